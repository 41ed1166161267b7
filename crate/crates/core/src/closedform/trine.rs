//! Equiprobable trine states `|ψ_k⟩ = cos θ|0⟩ + e^{2πik/3} sin θ|1⟩`.
//!
//! For `Q ≤ cos 2θ` the optimal inconclusive element is `Π₀ = ξ|0⟩⟨0|` with
//! `ξ = Q/cos²θ`; the reduced problem is again a trine with a smaller polar
//! angle, solved by the square-root measurement. Past `Q_c = cos 2θ` the
//! curve is the straight line `(1 − Q)/3`.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::curve::{CriticalData, FrioCurve, FrioPoint, MixedStrategy, Regime};
use crate::error::{Error, Result};
use crate::helstrom::square_root_measurement;
use crate::povm::Povm;
use crate::reduction::{lift_povm, reduce};
use crate::state::{Ensemble, QubitState};

/// Slope magnitude of the linear tail.
pub const TRINE_ALPHA: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrineProblem {
    theta: f64,
}

impl TrineProblem {
    /// Requires `0 < θ ≤ π/4`.
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= FRAC_PI_4 + 1e-15) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
            });
        }
        Ok(TrineProblem {
            theta: theta.min(FRAC_PI_4),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// States indexed 0, 1, 2 carry phases 2π/3, 4π/3, 2π.
    pub fn ensemble(&self) -> Ensemble {
        let states = (1..=3)
            .map(|k| QubitState::with_phase(self.theta, 2.0 * PI * k as f64 / 3.0))
            .collect();
        Ensemble::uniform(states).expect("three states")
    }

    /// `Q_c = cos 2θ`.
    pub fn qc(&self) -> f64 {
        (2.0 * self.theta).cos().max(0.0)
    }

    pub fn critical(&self) -> CriticalData {
        CriticalData {
            q_c: self.qc(),
            alpha: TRINE_ALPHA,
            q_th: None,
            q0: None,
        }
    }

    /// `(2/3)(Q̄ − sin θ √(cos²θ − Q))`, meaningful for `Q ≤ cos²θ`.
    pub fn interior_error(&self, q: f64) -> f64 {
        let (s, c) = self.theta.sin_cos();
        2.0 / 3.0 * ((1.0 - q) - s * (c * c - q).max(0.0).sqrt())
    }

    /// Polar angle of the reduced trine after `Π₀ = ξ|0⟩⟨0|`.
    pub fn reduced_theta(&self, q: f64) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let xi = q / (c * c);
        s.atan2((1.0 - xi).max(0.0).sqrt() * c)
    }

    pub fn pe_min(&self, q: f64) -> FrioPoint {
        let q = q.clamp(0.0, 1.0);
        let qc = self.qc();
        if q == 0.0 {
            FrioPoint::new(q, self.interior_error(0.0), Regime::MePoint)
        } else if q <= qc {
            FrioPoint::new(q, self.interior_error(q), Regime::Interior)
        } else {
            FrioPoint::new(q, TRINE_ALPHA * (1.0 - q), Regime::LinearTail)
        }
    }

    /// Optimal measurement for `q ≤ cos 2θ`.
    pub fn optimal_povm(&self, q: f64) -> Result<Povm> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::OutOfRange { name: "q", value: q });
        }
        let qc = self.qc();
        if q > qc + 1e-12 {
            return Err(Error::OutOfRange {
                name: "q above the critical rate",
                value: q,
            });
        }
        let q = q.min(qc);
        let c = self.theta.cos();
        let xi = (q / (c * c)).min(1.0);
        let pi0 = QubitState::zero().projector() * xi;
        let ensemble = self.ensemble();
        let reduced = reduce(&ensemble, &pi0)?;
        let tilde = square_root_measurement(&reduced.ensemble)?;
        lift_povm(&tilde, &reduced.omega, &pi0)
    }

    fn tail_strategy(&self, q: f64) -> Result<MixedStrategy> {
        let qc = self.qc();
        Ok(MixedStrategy {
            weight: (1.0 - q) / (1.0 - qc),
            first: (qc, self.interior_error(qc)),
            second: (1.0, 0.0),
            first_povm: Some(self.optimal_povm(qc)?),
            second_povm: Some(Povm::trivial(3)),
        })
    }

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
