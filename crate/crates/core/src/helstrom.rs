//! Minimum-error discrimination: trace norm, Helstrom bound and the
//! measurements that attain it.

use crate::error::{Error, Result};
use crate::linalg::HermitianOp;
use crate::povm::{Outcome, Povm};
use crate::state::{Ensemble, QubitState};

/// Sum of absolute eigenvalues.
pub fn trace_norm(op: &HermitianOp) -> f64 {
    let [a, b] = op.eigenvalues();
    a.abs() + b.abs()
}

fn require_pair(ensemble: &Ensemble) -> Result<()> {
    if ensemble.len() != 2 {
        return Err(Error::Arity {
            expected: 2,
            found: ensemble.len(),
        });
    }
    Ok(())
}

/// `η₂ρ₂ − η₁ρ₁` for a two-state ensemble.
pub fn weighted_difference(ensemble: &Ensemble) -> Result<HermitianOp> {
    require_pair(ensemble)?;
    let s = ensemble.states();
    let p = ensemble.priors();
    Ok(s[1].projector() * p[1] - s[0].projector() * p[0])
}

/// Minimum error probability for two states, `(1 − ‖η₂ρ₂ − η₁ρ₁‖₁) / 2`.
pub fn helstrom_error(ensemble: &Ensemble) -> Result<f64> {
    let gamma = weighted_difference(ensemble)?;
    Ok(0.5 * (1.0 - trace_norm(&gamma)))
}

/// Pure-state form of the Helstrom bound: `½(1 − √(1 − 4η₁η₂|⟨ψ₁|ψ₂⟩|²))`.
pub fn helstrom_error_pure(eta1: f64, eta2: f64, overlap: f64) -> f64 {
    0.5 * (1.0 - (1.0 - 4.0 * eta1 * eta2 * overlap * overlap).max(0.0).sqrt())
}

/// The projective measurement attaining [`helstrom_error`], with `Π₀ = 0`.
///
/// `Π₁` projects onto the positive part of `η₁ρ₁ − η₂ρ₂`.
pub fn helstrom_povm(ensemble: &Ensemble) -> Result<Povm> {
    let gamma = weighted_difference(ensemble)?;
    let first = gamma.scale(-1.0).support_projector(0.0);
    Povm::new(vec![
        (Outcome::Inconclusive, HermitianOp::zero()),
        (Outcome::Identify(0), first),
        (Outcome::Identify(1), HermitianOp::identity() - first),
    ])
}

/// Square-root measurement `Π_k = ρ^{-1/2} η_k ρ_k ρ^{-1/2}` with `Π₀ = 0`.
///
/// Requires a full-rank average state.
pub fn square_root_measurement(ensemble: &Ensemble) -> Result<Povm> {
    let rho = ensemble.average_state();
    if rho.min_eigenvalue() <= 1e-12 {
        return Err(Error::Numerical(
            "square-root measurement needs a full-rank average state".into(),
        ));
    }
    let inv_sqrt = rho.pinv_sqrt(0.0);
    let mut elements = vec![(Outcome::Inconclusive, HermitianOp::zero())];
    elements.extend(
        ensemble
            .iter()
            .enumerate()
            .map(|(k, (s, p))| (Outcome::Identify(k), (s.projector() * p).sandwich(&inv_sqrt))),
    );
    Povm::new(elements)
}

/// `θ = arccos |⟨ψ₁|ψ₂⟩|`, in `[0, π/2]`.
pub fn overlap_angle(a: &QubitState, b: &QubitState) -> f64 {
    a.inner(b).norm().min(1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::rates;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn trace_norm_examples() {
        assert_eq!(trace_norm(&HermitianOp::identity()), 2.0);
        assert_eq!(trace_norm(&HermitianOp::diag(0.5, -0.5)), 1.0);
    }

    #[test]
    fn overlap_angle_examples() {
        let (z, o, p) = (QubitState::zero(), QubitState::one(), QubitState::plus());
        assert!((overlap_angle(&z, &o) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(overlap_angle(&z, &z), 0.0);
        assert!((overlap_angle(&z, &p) - FRAC_PI_4).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_states_have_zero_error() {
        for eta in [0.1, 0.5, 0.93] {
            let e = Ensemble::new(vec![QubitState::zero(), QubitState::one()], vec![eta, 1.0 - eta])
                .unwrap();
            assert!(helstrom_error(&e).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn identical_states_are_a_coin_flip() {
        let s = QubitState::real(0.3);
        let e = Ensemble::uniform(vec![s, s]).unwrap();
        assert!((helstrom_error(&e).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn helstrom_needs_two_states() {
        let e = Ensemble::uniform(vec![QubitState::zero(), QubitState::one(), QubitState::plus()])
            .unwrap();
        assert!(matches!(helstrom_error(&e), Err(Error::Arity { .. })));
    }

    #[test]
    fn helstrom_povm_attains_bound() {
        let theta = PI / 3.0;
        let e = Ensemble::new(
            vec![QubitState::real(theta / 2.0), QubitState::real(-theta / 2.0)],
            vec![0.35, 0.65],
        )
        .unwrap();
        let r = rates(&e, &helstrom_povm(&e).unwrap()).unwrap();
        assert!((r.p_error - helstrom_error(&e).unwrap()).abs() < 1e-14);
        assert_eq!(r.q_inconclusive, 0.0);
    }

    #[test]
    fn square_root_measurement_is_complete() {
        let states = (1..=3)
            .map(|k| QubitState::with_phase(0.4, 2.0 * PI * k as f64 / 3.0))
            .collect();
        let e = Ensemble::uniform(states).unwrap();
        let povm = square_root_measurement(&e).unwrap();
        let r = rates(&e, &povm).unwrap();
        assert!((r.p_error - (2.0 - (0.8f64).sin()) / 3.0).abs() < 1e-13);
    }
}
