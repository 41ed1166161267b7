//! Pure qubit states and prior-weighted ensembles of them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::HermitianOp;

/// Tolerance on the squared norm of a state and on the sum of priors.
pub const NORM_TOL: f64 = 1e-12;

/// A unit vector `a|0⟩ + b|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    amps: [Complex64; 2],
}

impl QubitState {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if !((n - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized(n));
        }
        Ok(QubitState { amps: [a, b] })
    }

    /// Normalizes `(a, b)`; fails only for the zero vector.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(QubitState {
            amps: [a / n, b / n],
        })
    }

    /// `cos(angle)|0⟩ + sin(angle)|1⟩`.
    pub fn real(angle: f64) -> Self {
        QubitState {
            amps: [
                Complex64::new(angle.cos(), 0.0),
                Complex64::new(angle.sin(), 0.0),
            ],
        }
    }

    /// `cos(angle)|0⟩ + e^{i phase} sin(angle)|1⟩`.
    pub fn with_phase(angle: f64, phase: f64) -> Self {
        QubitState {
            amps: [
                Complex64::new(angle.cos(), 0.0),
                Complex64::from_polar(angle.sin(), phase),
            ],
        }
    }

    pub fn zero() -> Self {
        Self::real(0.0)
    }

    pub fn one() -> Self {
        Self::real(std::f64::consts::FRAC_PI_2)
    }

    pub fn plus() -> Self {
        Self::real(std::f64::consts::FRAC_PI_4)
    }

    /// The unit vector whose projector has Bloch vector `n` (`|n| = 1`).
    pub fn from_bloch(n: [f64; 3]) -> Self {
        let polar = n[2].clamp(-1.0, 1.0).acos();
        let phase = n[1].atan2(n[0]);
        Self::with_phase(polar / 2.0, phase)
    }

    pub fn amplitudes(&self) -> &[Complex64; 2] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }

    pub fn projector(&self) -> HermitianOp {
        HermitianOp::projector(&self.amps)
    }

    pub fn bloch_vector(&self) -> [f64; 3] {
        self.projector().bloch().1
    }

    /// The orthogonal state, `-b̄|0⟩ + ā|1⟩`.
    pub fn orthogonal(&self) -> Self {
        QubitState {
            amps: [-self.amps[1].conj(), self.amps[0].conj()],
        }
    }
}

/// Pure states with prior probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    states: Vec<QubitState>,
    priors: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<QubitState>, priors: Vec<f64>) -> Result<Self> {
        if states.len() != priors.len() {
            return Err(Error::InvalidPriors(format!(
                "{} states but {} priors",
                states.len(),
                priors.len()
            )));
        }
        if states.len() < 2 {
            return Err(Error::Arity {
                expected: 2,
                found: states.len(),
            });
        }
        if let Some(p) = priors.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::InvalidPriors(format!("negative prior {p}")));
        }
        let total: f64 = priors.iter().sum();
        if !((total - 1.0).abs() <= NORM_TOL) {
            return Err(Error::InvalidPriors(format!("priors sum to {total}")));
        }
        Ok(Ensemble { states, priors })
    }

    /// Equal priors over `states`.
    pub fn uniform(states: Vec<QubitState>) -> Result<Self> {
        let n = states.len();
        Self::new(states, vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[QubitState] {
        &self.states
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QubitState, f64)> {
        self.states.iter().zip(self.priors.iter().copied())
    }

    /// `ρ = Σ η_i |ψ_i⟩⟨ψ_i|`.
    pub fn average_state(&self) -> HermitianOp {
        self.iter().map(|(s, p)| s.projector() * p).sum()
    }

    /// The same ensemble with entries `i` and `j` exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut out = self.clone();
        out.states.swap(i, j);
        out.priors.swap(i, j);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_state() {
        let r = QubitState::new(Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0));
        assert!(matches!(r, Err(Error::NotNormalized(_))));
    }

    #[test]
    fn ensemble_validation() {
        let s = vec![QubitState::zero(), QubitState::one()];
        assert!(Ensemble::new(s.clone(), vec![0.5, 0.6]).is_err());
        assert!(Ensemble::new(s.clone(), vec![1.2, -0.2]).is_err());
        assert!(Ensemble::new(s.clone(), vec![1.0]).is_err());
        assert!(Ensemble::new(vec![QubitState::zero()], vec![1.0]).is_err());
        assert!(Ensemble::new(s, vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn average_state_has_unit_trace() {
        let e = Ensemble::new(vec![QubitState::real(0.3), QubitState::plus()], vec![0.3, 0.7])
            .unwrap();
        assert!((e.average_state().trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_vector_round_trip() {
        let s = QubitState::with_phase(0.4, 1.1);
        let back = QubitState::from_bloch(s.bloch_vector());
        assert!((s.inner(&back).norm() - 1.0).abs() < 1e-14);
        assert!(s.inner(&s.orthogonal()).norm() < 1e-15);
    }
}
