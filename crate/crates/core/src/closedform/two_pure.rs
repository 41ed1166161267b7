//! Two pure states with arbitrary priors.
//!
//! The problem is fixed by the prior `η₁` and the overlap `cos θ = |⟨ψ₁|ψ₂⟩|`.
//! Its minimal error curve has up to three pieces:
//!
//! * an interior piece `½{Q̄ − √(Q̄² − (Q₀ − Q)²)}` with `Q₀ = 2√(η₁η₂) cos θ`,
//!   attained by a rank-one `Π₀ = ξ|0⟩⟨0|` with `ξ < 1`;
//! * in the skewed-prior regions I and III, a projective piece on
//!   `[Q_th, Q_c]` where `Π₀` is a projector and the measurement degenerates to
//!   two outcomes;
//! * the flat tail `P_e = 0` for `Q ≥ Q_c`, the unambiguous-discrimination
//!   failure rate.
//!
//! Measurements are returned for the canonical ensemble of
//! [`TwoPureProblem::ensemble`]: `|ψ₁⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩` and
//! `|ψ₂⟩ = cos(θ/2)|0⟩ − sin(θ/2)|1⟩`.

use std::fmt;

use crate::curve::{CriticalData, FrioCurve, FrioPoint, MixedStrategy, Regime};
use crate::error::{Error, Result};
use crate::helstrom::{helstrom_povm, overlap_angle};
use crate::linalg::HermitianOp;
use crate::povm::{Outcome, Povm};
use crate::reduction::{lift_povm, reduce};
use crate::state::{Ensemble, QubitState};

/// Bracket width at which bisection of the projective branch stops.
const BISECTION_TOL: f64 = 1e-15;

/// Prior-probability regions of the two-pure-state problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `η₁ < η₁^(l)`: state 2 dominates.
    I,
    /// `η₁^(l) ≤ η₁ ≤ η₁^(r)`.
    II,
    /// `η₁ > η₁^(r)`: state 1 dominates.
    III,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
        })
    }
}

/// The region together with its boundaries
/// `η₁^(l) = cos²θ/(1+cos²θ)` and `η₁^(r) = 1/(1+cos²θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionLabel {
    pub region: Region,
    pub lower: f64,
    pub upper: f64,
}

/// Priors `(η₁, 1 − η₁)` and overlap `cos θ ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPureProblem {
    eta1: f64,
    cos_theta: f64,
}

impl TwoPureProblem {
    pub fn new(eta1: f64, cos_theta: f64) -> Result<Self> {
        if !(eta1 > 0.0 && eta1 < 1.0) {
            return Err(Error::OutOfRange {
                name: "eta1",
                value: eta1,
            });
        }
        if !(0.0..1.0).contains(&cos_theta) {
            return Err(Error::OutOfRange {
                name: "cos_theta",
                value: cos_theta,
            });
        }
        Ok(TwoPureProblem { eta1, cos_theta })
    }

    /// Reads `η₁` and `|⟨ψ₁|ψ₂⟩|` off a two-state ensemble.
    pub fn from_ensemble(ensemble: &Ensemble) -> Result<Self> {
        if ensemble.len() != 2 {
            return Err(Error::Arity {
                expected: 2,
                found: ensemble.len(),
            });
        }
        let s = ensemble.states();
        Self::new(ensemble.priors()[0], s[0].inner(&s[1]).norm().min(1.0))
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> f64 {
        1.0 - self.eta1
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    pub fn sin_theta(&self) -> f64 {
        (1.0 - self.cos_theta * self.cos_theta).sqrt()
    }

    pub fn theta(&self) -> f64 {
        self.cos_theta.acos()
    }

    /// The canonical ensemble all returned measurements refer to.
    pub fn ensemble(&self) -> Ensemble {
        let half = 0.5 * self.theta();
        let e = Ensemble::new(
            vec![QubitState::real(half), QubitState::real(-half)],
            vec![self.eta1, self.eta2()],
        )
        .expect("priors validated at construction");
        debug_assert!((overlap_angle(&e.states()[0], &e.states()[1]) - self.theta()).abs() < 1e-12);
        e
    }

    /// `Q₀ = 2√(η₁η₂) cos θ`.
    pub fn q0(&self) -> f64 {
        2.0 * (self.eta1 * self.eta2()).sqrt() * self.cos_theta
    }

    pub fn region(&self) -> RegionLabel {
        let c2 = self.cos_theta * self.cos_theta;
        let lower = c2 / (1.0 + c2);
        let upper = 1.0 / (1.0 + c2);
        let region = if self.eta1 < lower {
            Region::I
        } else if self.eta1 > upper {
            Region::III
        } else {
            Region::II
        };
        RegionLabel {
            region,
            lower,
            upper,
        }
    }

    /// Critical rate `Q_c`: the optimal unambiguous failure probability.
    pub fn qc(&self) -> f64 {
        let c2 = self.cos_theta * self.cos_theta;
        match self.region().region {
            Region::I => self.eta1 + self.eta2() * c2,
            Region::II => self.q0(),
            Region::III => self.eta2() + self.eta1 * c2,
        }
    }

    /// Threshold `Q_th = 2η₁η₂ sin²θ / (1 − Q₀)` above which `ξ` saturates at 1.
    pub fn qth(&self) -> f64 {
        let s2 = 1.0 - self.cos_theta * self.cos_theta;
        2.0 * self.eta1 * self.eta2() * s2 / (1.0 - self.q0())
    }

    pub fn critical(&self) -> CriticalData {
        CriticalData {
            q_c: self.qc(),
            alpha: 0.0,
            q_th: Some(self.qth()),
            q0: Some(self.q0()),
        }
    }

    /// Upper end of the interior (ξ ≤ 1) piece.
    fn interior_limit(&self) -> f64 {
        match self.region().region {
            Region::II => self.qc(),
            Region::I | Region::III => self.qth(),
        }
    }

    /// Interior-piece error `½{Q̄ − √(Q̄² − (Q₀ − Q)²)}`, valid for `Q ≤ Q₀`.
    pub fn interior_error(&self, q: f64) -> f64 {
        let q_bar = 1.0 - q;
        let d = self.q0() - q;
        // Rationalized to avoid cancellation as Q approaches Q₀.
        let root = (q_bar * q_bar - d * d).max(0.0).sqrt();
        let denom = q_bar + root;
        if denom > 0.0 {
            0.5 * d * d / denom
        } else {
            0.0
        }
    }

    /// Interior-piece success probability `½{Q̄ + √(Q̄² − (Q₀ − Q)²)}`.
    pub fn interior_success(&self, q: f64) -> f64 {
        let q_bar = 1.0 - q;
        let d = self.q0() - q;
        0.5 * (q_bar + (q_bar * q_bar - d * d).max(0.0).sqrt())
    }

    /// (prior of the identified state, prior of the other state).
    fn dominant_priors(&self) -> (f64, f64) {
        if self.eta1 >= self.eta2() {
            (self.eta1, self.eta2())
        } else {
            (self.eta2(), self.eta1)
        }
    }

    /// Inconclusive rate of the projective measurement with error `pe`:
    /// `Q = 1 − P_e − η_big (√(P_e/η_small) cos θ + √(1 − P_e/η_small) sin θ)²`.
    ///
    /// The `+` sign is the branch that keeps the identified state's detection
    /// probability largest; it decreases from `Q_c` at `P_e = 0` to `Q_th` at
    /// the interior error `P_e(Q_th)`.
    pub fn projective_rate(&self, pe: f64) -> f64 {
        let (big, small) = self.dominant_priors();
        let x = (pe / small).clamp(0.0, 1.0);
        let amp = x.sqrt() * self.cos_theta + (1.0 - x).sqrt() * self.sin_theta();
        1.0 - pe - big * amp * amp
    }

    /// Error of the projective piece at rate `q ∈ [Q_th, Q_c]`.
    ///
    /// Bisects in `u = √(P_e/η_small)`, in which the rate is Lipschitz even at
    /// `P_e = 0`.
    pub fn projective_error(&self, q: f64) -> f64 {
        let (_, small) = self.dominant_priors();
        let rate_at = |u: f64| self.projective_rate(small * u * u);
        let (mut lo, mut hi) = (0.0, (self.interior_error(self.qth()) / small).sqrt());
        if q >= rate_at(lo) {
            return 0.0;
        }
        if q <= rate_at(hi) {
            return small * hi * hi;
        }
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if rate_at(mid) > q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = 0.5 * (lo + hi);
        small * u * u
    }

    /// `P_e^min(q)` for `q ∈ [0, 1]` (clamped), tagged with its regime.
    pub fn pe_min(&self, q: f64) -> FrioPoint {
        let q = q.clamp(0.0, 1.0);
        let qc = self.qc();
        if q == 0.0 {
            return FrioPoint::new(q, self.interior_error(0.0), Regime::MePoint);
        }
        if q >= qc {
            return FrioPoint::new(q, 0.0, Regime::LinearTail);
        }
        if q <= self.interior_limit() {
            FrioPoint::new(q, self.interior_error(q), Regime::Interior)
        } else {
            FrioPoint::new(q, self.projective_error(q), Regime::Projective)
        }
    }

    /// Smallest `Q ∈ [0, Q_c]` at which `P_e^min(Q) ≤ pe`: the inverse curve
    /// `Q^min(P_e)`.
    pub fn rate_for_error(&self, pe: f64) -> f64 {
        let qc = self.qc();
        if pe >= self.pe_min(0.0).pe_min {
            return 0.0;
        }
        if pe <= 0.0 {
            return qc;
        }
        let (mut lo, mut hi) = (0.0, qc);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.pe_min(mid).pe_min > pe {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi.max(1e-300) {
                break;
            }
        }
        hi
    }

    /// A measurement attaining `P_e^min(q)` for `q ≤ Q_c`.
    pub fn optimal_povm(&self, q: f64) -> Result<Povm> {
        let qc = self.qc();
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfRange { name: "q", value: q });
        }
        if q > qc + 1e-12 {
            return Err(Error::OutOfRange {
                name: "q above the critical rate",
                value: q,
            });
        }
        let q = q.min(qc);
        if q <= self.interior_limit() {
            self.interior_povm(q)
        } else {
            self.projective_povm(q)
        }
    }

    fn interior_povm(&self, q: f64) -> Result<Povm> {
        let theta = self.theta();
        let (r1, r2) = (self.eta1.sqrt(), self.eta2().sqrt());
        // Orientation with √η₁ cos θ₁ = √η₂ cos θ₂ and θ₁ − θ₂ = θ.
        let theta1 = (r1 - r2 * self.cos_theta).atan2(r2 * self.sin_theta());
        let (c1, c2) = (theta1.cos(), (theta1 - theta).cos());
        let xi = (q / (self.eta1 * c1 * c1 + self.eta2() * c2 * c2)).min(1.0);
        let axis = QubitState::real(0.5 * theta - theta1);
        let pi0 = axis.projector() * xi;

        let ensemble = self.ensemble();
        let reduced = reduce(&ensemble, &pi0)?;
        let tilde = helstrom_povm(&reduced.ensemble)?;
        lift_povm(&tilde, &reduced.omega, &pi0)
    }

    fn projective_povm(&self, q: f64) -> Result<Povm> {
        let pe = self.projective_error(q);
        let half = 0.5 * self.theta();
        // (identified index, its angle, other prior, other angle)
        let (k, a_k, eta_j, a_j) = if self.eta1 >= self.eta2() {
            (0, half, self.eta2(), -half)
        } else {
            (1, -half, self.eta1, half)
        };
        let gamma = (pe / eta_j).clamp(0.0, 1.0).sqrt().acos();
        let b = [a_j + gamma, a_j - gamma]
            .into_iter()
            .max_by(|x, y| (x - a_k).cos().powi(2).total_cmp(&(y - a_k).cos().powi(2)))
            .expect("two candidates");
        let detect = QubitState::real(b).projector();
        let mut elements = vec![
            (Outcome::Inconclusive, HermitianOp::identity() - detect),
            (Outcome::Identify(0), HermitianOp::zero()),
            (Outcome::Identify(1), HermitianOp::zero()),
        ];
        elements[1 + k].1 = detect;
        Povm::new(elements)
    }

    /// Mixture of the unambiguous measurement at `Q_c` with the trivial one.
    fn tail_strategy(&self, q: f64) -> Result<MixedStrategy> {
        let qc = self.qc();
        let weight = (1.0 - q) / (1.0 - qc);
        Ok(MixedStrategy {
            weight,
            first: (qc, 0.0),
            second: (1.0, 0.0),
            first_povm: Some(self.optimal_povm(qc)?),
            second_povm: Some(Povm::trivial(2)),
        })
    }

    /// Samples the curve at `qs` (sorted, in `[0, 1]`), optionally with the
    /// measurements that attain each sample.
    pub fn curve(&self, qs: &[f64], with_povms: bool) -> Result<FrioCurve> {
        let qc = self.qc();
        let mut points = Vec::with_capacity(qs.len());
        for &q in qs {
            let mut point = self.pe_min(q);
            if with_povms {
                if q <= qc {
                    point.optimal_povm = Some(self.optimal_povm(q)?);
                } else {
                    let mix = self.tail_strategy(q)?;
                    let first = mix.first_povm.as_ref().expect("set above");
                    let second = mix.second_povm.as_ref().expect("set above");
                    point.optimal_povm = Some(first.mix(mix.weight, second)?);
                    point.mixture = Some(mix);
                }
            }
            points.push(point);
        }
        FrioCurve::new(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helstrom::helstrom_error;
    use crate::povm::rates;

    fn p(eta1: f64, c: f64) -> TwoPureProblem {
        TwoPureProblem::new(eta1, c).unwrap()
    }

    #[test]
    fn validation() {
        assert!(TwoPureProblem::new(0.0, 0.5).is_err());
        assert!(TwoPureProblem::new(1.0, 0.5).is_err());
        assert!(TwoPureProblem::new(0.5, 1.0).is_err());
        assert!(TwoPureProblem::new(0.5, -0.1).is_err());
        assert!(TwoPureProblem::new(0.5, 0.0).is_ok());
    }

    #[test]
    fn critical_rate_examples() {
        assert!((p(0.5, 0.5).qc() - 0.5).abs() < 1e-15);
        assert_eq!(p(0.1, 0.5).region().region, Region::I);
        assert!((p(0.1, 0.5).qc() - 0.325).abs() < 1e-15);
        assert_eq!(p(0.9, 0.5).region().region, Region::III);
        assert!((p(0.9, 0.5).qc() - 0.325).abs() < 1e-15);
    }

    #[test]
    fn critical_rate_is_continuous_at_region_edges() {
        for c in [0.2, 0.5, 0.8] {
            let c2: f64 = c * c;
            let lower = c2 / (1.0 + c2);
            let upper = 1.0 / (1.0 + c2);
            let at_lower = p(lower, c);
            assert_eq!(at_lower.region().region, Region::II);
            let line1 = lower + (1.0 - lower) * c2;
            assert!((line1 - at_lower.q0()).abs() < 1e-14);
            let at_upper = p(upper, c);
            assert_eq!(at_upper.region().region, Region::II);
            let line3 = (1.0 - upper) + upper * c2;
            assert!((line3 - at_upper.q0()).abs() < 1e-14);
        }
    }

    #[test]
    fn threshold_examples() {
        assert!((p(0.5, 0.5).qth() - 0.75).abs() < 1e-15);
        let at_lower = p(0.2, 0.5);
        assert!((at_lower.qth() - at_lower.qc()).abs() < 1e-14);
        let orth = p(0.3, 0.0);
        assert!((orth.qth() - 2.0 * 0.3 * 0.7).abs() < 1e-15);
    }

    #[test]
    fn me_limit_matches_helstrom() {
        for (eta, c) in [(0.5, 0.5), (0.1, 0.5), (0.77, 0.3), (0.4, 0.95)] {
            let prob = p(eta, c);
            let pt = prob.pe_min(0.0);
            assert_eq!(pt.regime, Regime::MePoint);
            let h = helstrom_error(&prob.ensemble()).unwrap();
            assert!((pt.pe_min - h).abs() < 1e-12, "{eta} {c}");
        }
        assert!((p(0.5, 0.5).pe_min(0.0).pe_min - 0.066_987_298_107_780_68).abs() < 1e-12);
    }

    #[test]
    fn region_two_reaches_zero_at_q0() {
        let prob = p(0.5, 0.5);
        assert_eq!(prob.pe_min(0.5).pe_min, 0.0);
        assert!(prob.interior_error(0.5).abs() < 1e-16);
    }

    #[test]
    fn projective_branch_is_anchored() {
        for (eta, c) in [(0.1, 0.5), (0.9, 0.5), (0.05, 0.8), (0.97, 0.3)] {
            let prob = p(eta, c);
            assert_ne!(prob.region().region, Region::II);
            assert!((prob.projective_rate(0.0) - prob.qc()).abs() < 1e-12);
            let pe_th = prob.interior_error(prob.qth());
            assert!((prob.projective_rate(pe_th) - prob.qth()).abs() < 1e-12);
        }
    }

    #[test]
    fn projective_sample_matches_direct_rates() {
        let prob = p(0.1, 0.5);
        let q = 0.26;
        let pt = prob.pe_min(q);
        assert_eq!(pt.regime, Regime::Projective);
        let r = rates(&prob.ensemble(), &prob.optimal_povm(q).unwrap()).unwrap();
        assert!((r.q_inconclusive - q).abs() < 1e-12);
        assert!((r.p_error - pt.pe_min).abs() < 1e-12);
    }

    #[test]
    fn interior_povm_reproduces_curve() {
        let prob = p(0.5, 0.5);
        let r = rates(&prob.ensemble(), &prob.optimal_povm(0.3).unwrap()).unwrap();
        assert!((r.p_error - 0.014_589_803_375_031_5).abs() < 1e-9);
        assert!((r.p_success - 0.685_410_196_624_968_5).abs() < 1e-9);
        assert!((r.q_inconclusive - 0.3).abs() < 1e-12);
    }

    #[test]
    fn ud_limit_in_region_one() {
        let prob = p(0.1, 0.5);
        let povm = prob.optimal_povm(prob.qc()).unwrap();
        let r = rates(&prob.ensemble(), &povm).unwrap();
        assert!(r.p_error.abs() < 1e-12);
        assert!((r.q_inconclusive - 0.325).abs() < 1e-12);
        assert!(prob.optimal_povm(0.33).is_err());
    }

    #[test]
    fn q_zero_povm_is_helstrom() {
        let prob = p(0.3, 0.6);
        let povm = prob.optimal_povm(0.0).unwrap();
        assert_eq!(povm.inconclusive().unwrap().max_abs(), 0.0);
        let r = rates(&prob.ensemble(), &povm).unwrap();
        assert!((r.p_error - helstrom_error(&prob.ensemble()).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_states_are_error_free() {
        let prob = p(0.3, 0.0);
        assert_eq!(prob.qc(), 0.0);
        assert!(prob.pe_min(0.0).pe_min.abs() < 1e-16);
        assert_eq!(prob.pe_min(0.4).regime, Regime::LinearTail);
    }

    #[test]
    fn tail_points_carry_mixtures() {
        let prob = p(0.5, 0.5);
        let c = prob.curve(&[0.0, 0.25, 0.5, 0.8, 1.0], true).unwrap();
        let tail = &c.points[3];
        let mix = tail.mixture.as_ref().unwrap();
        assert!((mix.weight - 0.4).abs() < 1e-15);
        let r = rates(&prob.ensemble(), tail.optimal_povm.as_ref().unwrap()).unwrap();
        assert!(r.p_error.abs() < 1e-12);
        assert!((r.q_inconclusive - 0.8).abs() < 1e-12);
    }

    #[test]
    fn inverse_recovers_rate() {
        let prob = p(0.1, 0.5);
        for q in [0.0, 0.05, 0.19, 0.25, 0.3, 0.324, 0.325] {
            let back = prob.rate_for_error(prob.pe_min(q).pe_min);
            assert!((back - q).abs() < 1e-6, "{q} -> {back}");
        }
    }
}
