//! Locating the critical rate on a sampled curve.

use crate::curve::{check_curve, CriticalData, CurveViolation, FrioCurve};
use crate::error::{Error, Result};

/// Relative tolerance for matching a right slope against the secant to `(1, 0)`.
pub const TANGENCY_REL_TOL: f64 = 1e-6;
/// Absolute floor added to the tangency comparison.
pub const TANGENCY_ABS_TOL: f64 = 1e-12;
/// Midpoint-convexity slack allowed in the input.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Finds `Q_c`, the first sample from which the curve follows the straight line
/// to `(1, 0)`, and `α = P_e(Q_c)/(1 − Q_c)`.
///
/// The curve must be convex and end at `Q = 1`. Resolution of `Q_c` is the
/// sample spacing.
pub fn critical_from_curve(curve: &FrioCurve) -> Result<CriticalData> {
    let pts = &curve.points;
    if pts.len() < 2 {
        return Err(Error::MalformedCurve("need at least two samples".into()));
    }
    if pts.last().map(|p| p.q) != Some(1.0) {
        return Err(Error::MalformedCurve("curve must end at Q = 1".into()));
    }
    for v in check_curve(curve, CONVEXITY_TOL) {
        if let CurveViolation::NotConvex { index, excess } = v {
            return Err(Error::NonConvexCurve { index, excess });
        }
    }
    for (i, w) in pts.windows(2).enumerate() {
        let (a, b) = (&w[0], &w[1]);
        let secant = -a.pe_min / (1.0 - a.q);
        let right = (b.pe_min - a.pe_min) / (b.q - a.q);
        let scale = secant.abs().max(right.abs());
        if (right - secant).abs() <= TANGENCY_REL_TOL * scale + TANGENCY_ABS_TOL {
            return Ok(CriticalData {
                q_c: pts[i].q,
                alpha: (a.pe_min / (1.0 - a.q)).max(0.0),
                q_th: None,
                q0: None,
            });
        }
    }
    // The last segment always ends at (1, P_e(1)); reaching here means P_e(1) ≠ 0.
    Err(Error::MalformedCurve("curve does not reach zero at Q = 1".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{linspace, FrioPoint, Regime};

    fn sampled(f: impl Fn(f64) -> f64, n: usize) -> FrioCurve {
        FrioCurve::new(
            linspace(0.0, 1.0, n)
                .into_iter()
                .map(|q| FrioPoint::new(q, f(q), Regime::Searched))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn straight_line_has_zero_critical_rate() {
        let c = sampled(|q| 0.2 * (1.0 - q), 101);
        let d = critical_from_curve(&c).unwrap();
        assert_eq!(d.q_c, 0.0);
        assert!((d.alpha - 0.2).abs() < 1e-12);
    }

    #[test]
    fn quadratic_then_flat() {
        let c = sampled(|q| if q < 0.4 { (0.4 - q).powi(2) } else { 0.0 }, 1001);
        let d = critical_from_curve(&c).unwrap();
        assert!((d.q_c - 0.4).abs() < 1e-3);
        assert_eq!(d.alpha, 0.0);
    }

    #[test]
    fn concave_input_is_rejected() {
        let c = sampled(|q| 0.25 * (1.0 - q * q), 51);
        assert!(matches!(
            critical_from_curve(&c),
            Err(Error::NonConvexCurve { .. })
        ));
    }

    #[test]
    fn needs_endpoint_at_one() {
        let c = FrioCurve::new(
            linspace(0.0, 0.5, 11)
                .into_iter()
                .map(|q| FrioPoint::new(q, 0.5 - q, Regime::Searched))
                .collect(),
        )
        .unwrap();
        assert!(critical_from_curve(&c).is_err());
    }
}
