//! The Ω-transform.
//!
//! Fixing the inconclusive element Π₀ and writing `Ω = 𝕀 − Π₀`, the remaining
//! conclusive elements satisfy `Σ Π_i = Ω`. Conjugating by `Ω^{-1/2}` turns
//! them into a complete measurement `Π̃_i = Ω^{-1/2} Π_i Ω^{-1/2}` on the
//! transformed states and priors
//!
//! ```text
//! ρ̃_i = Ω^{1/2} ρ_i Ω^{1/2} / tr(Ωρ_i),    η̃_i = η_i tr(Ωρ_i) / (1 − Q),
//! ```
//!
//! and every conclusive probability scales by `1 − Q`. The minimum error for a
//! given Π₀ is therefore `(1 − Q)` times a plain minimum-error problem.
//!
//! When Ω is a projector (Π₀ has a unit eigenvalue) everything is restricted to
//! the support of Ω; the transformed states then all coincide and the reduced
//! problem is classical.

use crate::error::{Error, Result};
use crate::helstrom::helstrom_error;
use crate::linalg::HermitianOp;
use crate::povm::{validate_povm, Outcome, Povm, COMPLETENESS_TOL, PSD_TOL};
use crate::state::{Ensemble, QubitState};

/// Eigenvalues of Ω at or below this are treated as its kernel.
pub const KERNEL_CUTOFF: f64 = 1e-12;
/// `tr(Ωρ_i)` at or below this means state `i` never reaches a conclusive outcome.
pub const ANNIHILATION_CUTOFF: f64 = 1e-14;

/// A minimum-error problem equivalent to a FRIO problem with fixed Π₀.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedProblem {
    /// Transformed states ρ̃_i and priors η̃_i.
    pub ensemble: Ensemble,
    /// The inconclusive rate `tr(ρΠ₀)` of the originating problem.
    pub q: f64,
    /// `Ω = 𝕀 − Π₀`.
    pub omega: HermitianOp,
}

impl ReducedProblem {
    pub fn conclusive_weight(&self) -> f64 {
        1.0 - self.q
    }
}

fn check_inconclusive(pi0: &HermitianOp) -> Result<()> {
    let [min, max] = pi0.eigenvalues();
    if !(min >= -PSD_TOL && max <= 1.0 + PSD_TOL) {
        return Err(Error::InvalidInconclusive { min, max });
    }
    Ok(())
}

/// Applies `Ω^{1/2}` to a state, returning the normalized image and `tr(Ωρ)`.
fn transform_state(omega_sqrt: &HermitianOp, state: &QubitState) -> (Option<QubitState>, f64) {
    let v = omega_sqrt.apply(state.amplitudes());
    let weight = v[0].norm_sqr() + v[1].norm_sqr();
    if weight <= ANNIHILATION_CUTOFF {
        return (None, weight);
    }
    (QubitState::normalized(v[0], v[1]).ok(), weight)
}

/// Maps `(ensemble, Π₀)` to the equivalent minimum-error problem.
pub fn reduce(ensemble: &Ensemble, pi0: &HermitianOp) -> Result<ReducedProblem> {
    check_inconclusive(pi0)?;
    let omega = HermitianOp::identity() - *pi0;
    let q = ensemble.average_state().trace_product(pi0);
    let q_bar = 1.0 - q;
    if q_bar <= ANNIHILATION_CUTOFF {
        return Err(Error::NoConclusiveSector);
    }
    let omega_sqrt = omega.sqrt_psd();

    let mut states = Vec::with_capacity(ensemble.len());
    let mut weights = Vec::with_capacity(ensemble.len());
    for (i, (state, prior)) in ensemble.iter().enumerate() {
        match transform_state(&omega_sqrt, state) {
            (Some(s), w) => {
                states.push(s);
                weights.push(prior * w);
            }
            // A state carrying no prior weight can be dropped silently.
            (None, _) if prior == 0.0 => {
                states.push(*state);
                weights.push(0.0);
            }
            (None, _) => return Err(Error::SingularOmega(i)),
        }
    }
    // Σ η_i tr(Ωρ_i) = 1 − Q analytically; normalizing by the computed sum keeps
    // the priors exactly stochastic.
    let total: f64 = weights.iter().sum();
    debug_assert!((total - q_bar).abs() < 1e-10);
    let priors = weights.iter().map(|w| w / total).collect();
    Ok(ReducedProblem {
        ensemble: Ensemble::new(states, priors)?,
        q,
        omega,
    })
}

/// `(1 − Q) · P_e^Helstrom` of the reduced problem: the smallest error of any
/// measurement whose inconclusive element is exactly `pi0`.
pub fn frio_error_for_pi0(ensemble: &Ensemble, pi0: &HermitianOp) -> Result<f64> {
    if ensemble.len() != 2 {
        return Err(Error::Arity {
            expected: 2,
            found: ensemble.len(),
        });
    }
    let reduced = reduce(ensemble, pi0)?;
    Ok(reduced.conclusive_weight() * helstrom_error(&reduced.ensemble)?)
}

fn check_omega(omega: &HermitianOp, pi0: &HermitianOp) -> Result<()> {
    let dev = (*omega + *pi0 - HermitianOp::identity()).max_abs();
    if !(dev <= COMPLETENESS_TOL) {
        return Err(Error::OmegaMismatch(dev));
    }
    Ok(())
}

/// Forward transform of a full measurement: `Π̃_i = Ω^{-1/2} Π_i Ω^{-1/2}`
/// with the inconclusive element replaced by zero.
///
/// If Ω is singular the kernel projector is added to the first conclusive
/// element so the result is complete; transformed states have no weight there.
pub fn transform_povm(povm: &Povm, omega: &HermitianOp) -> Result<Povm> {
    let pi0 = povm.inconclusive().ok_or_else(|| {
        Error::LabelMismatch("measurement has no inconclusive element".into())
    })?;
    check_omega(omega, pi0)?;
    let inv_sqrt = omega.pinv_sqrt(KERNEL_CUTOFF);
    let kernel = HermitianOp::identity() - omega.support_projector(KERNEL_CUTOFF);
    let mut kernel_assigned = false;
    let mut elements = Vec::with_capacity(povm.len());
    for (label, op) in povm.elements() {
        match label {
            Outcome::Inconclusive => elements.push((*label, HermitianOp::zero())),
            Outcome::Identify(_) => {
                let mut t = op.sandwich(&inv_sqrt);
                if !kernel_assigned {
                    t = t + kernel;
                    kernel_assigned = true;
                }
                elements.push((*label, t));
            }
        }
    }
    Povm::new(elements)
}

/// Inverse transform: `{Π₀, Π_i = Ω^{1/2} Π̃_i Ω^{1/2}}`.
///
/// `reduced_povm` must be a valid measurement with a zero inconclusive element.
pub fn lift_povm(reduced_povm: &Povm, omega: &HermitianOp, pi0: &HermitianOp) -> Result<Povm> {
    let violations = validate_povm(reduced_povm);
    if !violations.is_empty() {
        return Err(Error::InvalidPovm(violations));
    }
    let tilde0 = reduced_povm.inconclusive().expect("validated");
    if tilde0.max_abs() > COMPLETENESS_TOL {
        return Err(Error::LabelMismatch(format!(
            "reduced measurement has a non-zero inconclusive element ({:e})",
            tilde0.max_abs()
        )));
    }
    check_inconclusive(pi0)?;
    check_omega(omega, pi0)?;
    let sqrt = omega.sqrt_psd();
    let elements = reduced_povm
        .elements()
        .iter()
        .map(|(label, op)| match label {
            Outcome::Inconclusive => (*label, *pi0),
            Outcome::Identify(_) => (*label, op.sandwich(&sqrt)),
        })
        .collect();
    Povm::new(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helstrom::{helstrom_povm, overlap_angle};
    use crate::povm::rates;
    use std::f64::consts::PI;

    fn pair(eta1: f64, theta: f64) -> Ensemble {
        Ensemble::new(
            vec![QubitState::real(theta / 2.0), QubitState::real(-theta / 2.0)],
            vec![eta1, 1.0 - eta1],
        )
        .unwrap()
    }

    #[test]
    fn zero_inconclusive_is_identity_transform() {
        let e = pair(0.3, 1.0);
        let r = reduce(&e, &HermitianOp::zero()).unwrap();
        assert_eq!(r.q, 0.0);
        for (a, b) in r.ensemble.iter().zip(e.iter()) {
            assert!((a.0.inner(b.0).norm() - 1.0).abs() < 1e-15);
            assert!((a.1 - b.1).abs() < 1e-15);
        }
        assert_eq!(
            frio_error_for_pi0(&e, &HermitianOp::zero()).unwrap(),
            helstrom_error(&e).unwrap()
        );
    }

    #[test]
    fn transform_reduces_overlap_for_symmetric_pair() {
        let theta = PI / 3.0;
        let e = pair(0.5, theta);
        let pi0 = HermitianOp::diag(0.4, 0.0);
        let r = reduce(&e, &pi0).unwrap();
        let s = r.ensemble.states();
        assert!(s[0].inner(&s[1]).norm() < 0.5);
        assert!(overlap_angle(&s[0], &s[1]) > theta);
    }

    #[test]
    fn unit_rate_is_rejected() {
        let e = pair(0.5, 1.0);
        assert_eq!(
            reduce(&e, &HermitianOp::identity()),
            Err(Error::NoConclusiveSector)
        );
    }

    #[test]
    fn annihilated_state_is_reported() {
        let e = Ensemble::uniform(vec![QubitState::zero(), QubitState::plus()]).unwrap();
        let pi0 = HermitianOp::diag(1.0, 0.0);
        assert_eq!(reduce(&e, &pi0), Err(Error::SingularOmega(0)));
    }

    #[test]
    fn projective_omega_restricts_to_support() {
        let e = pair(0.7, 1.2);
        let pi0 = HermitianOp::diag(1.0, 0.0);
        let r = reduce(&e, &pi0).unwrap();
        let s = r.ensemble.states();
        assert!((s[0].inner(&s[1]).norm() - 1.0).abs() < 1e-14);
        // classical problem: guess the heavier transformed prior
        let p = r.ensemble.priors();
        let err = helstrom_error(&r.ensemble).unwrap();
        assert!((err - p[0].min(p[1])).abs() < 1e-14);
    }

    #[test]
    fn out_of_range_inconclusive_is_rejected() {
        let e = pair(0.5, 1.0);
        assert!(matches!(
            reduce(&e, &HermitianOp::diag(1.3, 0.0)),
            Err(Error::InvalidInconclusive { .. })
        ));
        assert!(matches!(
            reduce(&e, &HermitianOp::diag(-0.1, 0.0)),
            Err(Error::InvalidInconclusive { .. })
        ));
    }

    #[test]
    fn lift_of_zero_inconclusive_is_unchanged() {
        let e = pair(0.4, 0.9);
        let m = helstrom_povm(&e).unwrap();
        let lifted = lift_povm(&m, &HermitianOp::identity(), &HermitianOp::zero()).unwrap();
        for ((la, a), (lb, b)) in lifted.elements().iter().zip(m.elements()) {
            assert_eq!(la, lb);
            assert!((*a - *b).max_abs() < 1e-15);
        }
    }

    #[test]
    fn transform_then_lift_round_trips() {
        let e = pair(0.4, 0.9);
        let pi0 = HermitianOp::from_bloch(0.6, [0.2, 0.1, -0.3]);
        let omega = HermitianOp::identity() - pi0;
        let reduced = reduce(&e, &pi0).unwrap();
        let tilde = helstrom_povm(&reduced.ensemble).unwrap();
        let full = lift_povm(&tilde, &omega, &pi0).unwrap();
        let back = transform_povm(&full, &omega).unwrap();
        for ((_, a), (_, b)) in back.elements().iter().zip(tilde.elements()) {
            assert!((*a - *b).max_abs() < 1e-10);
        }
        let r = rates(&e, &full).unwrap();
        assert!((r.q_inconclusive - reduced.q).abs() < 1e-14);
    }

    #[test]
    fn lift_rejects_nonzero_reduced_inconclusive() {
        let m = Povm::trivial(2);
        assert!(lift_povm(&m, &HermitianOp::identity(), &HermitianOp::zero()).is_err());
    }
}
