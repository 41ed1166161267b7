//! Sampled minimal-error curves `Q ↦ P_e^min(Q)` and their shape checks.

use std::fmt;

use crate::error::{Error, Result};
use crate::povm::Povm;

/// Which piece of the solution produced a curve sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `Q = 0`: plain minimum-error discrimination.
    MePoint,
    /// Strictly convex part with a rank-one Π₀ of eigenvalue `ξ < 1`.
    Interior,
    /// Π₀ is a projector and the measurement is a two-outcome projection.
    Projective,
    /// `Q ≥ Q_c`, where `P_e^min = α(1 − Q)`.
    LinearTail,
    /// A pure strategy found by numerical search.
    Searched,
    /// A probabilistic mixture of two pure strategies.
    Mixed,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::MePoint => "me-point",
            Regime::Interior => "interior",
            Regime::Projective => "projective",
            Regime::LinearTail => "linear-tail",
            Regime::Searched => "searched",
            Regime::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `p Π′ + (1 − p) Π″` realizing the chord between two curve vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    pub weight: f64,
    /// `(Q′, P_e′)` of the strategy used with probability `weight`.
    pub first: (f64, f64),
    /// `(Q″, P_e″)` of the strategy used with probability `1 − weight`.
    pub second: (f64, f64),
    pub first_povm: Option<Povm>,
    pub second_povm: Option<Povm>,
}

/// One sample of `P_e^min(Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrioPoint {
    pub q: f64,
    pub pe_min: f64,
    pub regime: Regime,
    pub optimal_povm: Option<Povm>,
    pub mixture: Option<MixedStrategy>,
}

impl FrioPoint {
    pub fn new(q: f64, pe_min: f64, regime: Regime) -> Self {
        FrioPoint {
            q,
            pe_min,
            regime,
            optimal_povm: None,
            mixture: None,
        }
    }

    /// Error conditioned on a conclusive answer, `P_e / (1 − Q)`; `None` at `Q = 1`.
    pub fn conditional_error(&self) -> Option<f64> {
        let q_bar = 1.0 - self.q;
        (q_bar > 0.0).then(|| self.pe_min / q_bar)
    }
}

/// `Q_c`, the slope magnitude `α` of the linear tail and, for two pure
/// states, `Q_th` and `Q₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalData {
    pub q_c: f64,
    pub alpha: f64,
    pub q_th: Option<f64>,
    pub q0: Option<f64>,
}

impl CriticalData {
    /// Asymptotic conditional success probability `1 − α`.
    pub fn confidence(&self) -> f64 {
        1.0 - self.alpha
    }
}

/// A curve sampled at increasing `Q`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FrioCurve {
    pub points: Vec<FrioPoint>,
}

impl FrioCurve {
    pub fn new(points: Vec<FrioPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(w) = points.windows(2).position(|w| !(w[1].q > w[0].q)) {
            return Err(Error::MalformedCurve(format!(
                "sample {} is not strictly increasing in Q",
                w + 1
            )));
        }
        Ok(FrioCurve { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn qs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.q)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.pe_min)
    }
}

/// `n` evenly spaced points on `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// A failed shape property of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveViolation {
    /// The middle sample lies above the chord of its neighbours.
    NotConvex { index: usize, excess: f64 },
    /// `P_e` increases between consecutive samples.
    Increasing { index: usize, rise: f64 },
    /// Right slopes decrease between consecutive segments.
    SlopeDecreasing { index: usize, drop: f64 },
    /// The sample at `Q = 1` is not zero.
    NonZeroAtOne { value: f64 },
    /// The curve does not extend to `Q = 1`.
    MissingEndpoint,
}

/// Checks midpoint convexity, non-increase, `P_e(1) = 0` and monotone right
/// slopes, each to within `tol`.
pub fn check_curve(curve: &FrioCurve, tol: f64) -> Vec<CurveViolation> {
    let pts = &curve.points;
    let mut out = Vec::new();
    for (i, w) in pts.windows(2).enumerate() {
        let rise = w[1].pe_min - w[0].pe_min;
        if rise > tol {
            out.push(CurveViolation::Increasing { index: i + 1, rise });
        }
    }
    for (i, w) in pts.windows(3).enumerate() {
        let (a, b, c) = (&w[0], &w[1], &w[2]);
        let t = (b.q - a.q) / (c.q - a.q);
        let chord = a.pe_min + t * (c.pe_min - a.pe_min);
        let excess = b.pe_min - chord;
        if excess > tol {
            out.push(CurveViolation::NotConvex {
                index: i + 1,
                excess,
            });
        }
        let left = (b.pe_min - a.pe_min) / (b.q - a.q);
        let right = (c.pe_min - b.pe_min) / (c.q - b.q);
        if left - right > tol {
            out.push(CurveViolation::SlopeDecreasing {
                index: i + 1,
                drop: left - right,
            });
        }
    }
    match pts.last() {
        Some(p) if p.q == 1.0 => {
            if p.pe_min.abs() > tol {
                out.push(CurveViolation::NonZeroAtOne { value: p.pe_min });
            }
        }
        _ => out.push(CurveViolation::MissingEndpoint),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(f: impl Fn(f64) -> f64, n: usize) -> FrioCurve {
        FrioCurve::new(
            linspace(0.0, 1.0, n)
                .into_iter()
                .map(|q| FrioPoint::new(q, f(q), Regime::Searched))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(0.0, 0.3, 4);
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[3], 0.3);
    }

    #[test]
    fn convex_decreasing_curve_passes() {
        let c = curve(|q| 0.25 * (1.0 - q).powi(2), 101);
        assert!(check_curve(&c, 1e-12).is_empty());
    }

    #[test]
    fn concave_bump_is_flagged() {
        let c = curve(|q| 0.25 * (1.0 - q) * (1.0 + q), 51);
        let v = check_curve(&c, 1e-12);
        assert!(v.iter().any(|x| matches!(x, CurveViolation::NotConvex { .. })));
        assert!(v
            .iter()
            .any(|x| matches!(x, CurveViolation::SlopeDecreasing { .. })));
    }

    #[test]
    fn missing_and_nonzero_endpoint() {
        let c = curve(|q| 0.1 * (1.0 - q) + 0.01, 11);
        assert!(check_curve(&c, 1e-12)
            .iter()
            .any(|x| matches!(x, CurveViolation::NonZeroAtOne { .. })));
        let short = FrioCurve::new(vec![FrioPoint::new(0.0, 0.1, Regime::MePoint)]).unwrap();
        assert!(check_curve(&short, 1e-12).contains(&CurveViolation::MissingEndpoint));
    }

    #[test]
    fn unsorted_curve_is_rejected() {
        let pts = vec![
            FrioPoint::new(0.5, 0.0, Regime::Searched),
            FrioPoint::new(0.2, 0.0, Regime::Searched),
        ];
        assert!(FrioCurve::new(pts).is_err());
    }
}
