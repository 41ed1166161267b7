//! Lower convex envelope of achievable `(Q, P_e)` points.
//!
//! Mixing two measurements with weights `p` and `1 − p` realizes every point on
//! the chord between their rate pairs, so the envelope of any set of achievable
//! points is itself achievable.

use crate::curve::{FrioCurve, FrioPoint, MixedStrategy, Regime};
use crate::error::{Error, Result};
use crate::povm::{Outcome, Povm, RATE_TOL};

/// A middle point counts as above the chord only beyond this slack.
const HULL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub q: f64,
    pub pe: f64,
    pub povm: Option<Povm>,
}

impl RatePoint {
    pub fn new(q: f64, pe: f64, povm: Option<Povm>) -> Self {
        RatePoint { q, pe, povm }
    }
}

fn above_chord(a: &RatePoint, b: &RatePoint, c: &RatePoint) -> bool {
    let t = (b.q - a.q) / (c.q - a.q);
    b.pe > a.pe + t * (c.pe - a.pe) + HULL_TOL
}

/// Lower convex envelope over `Q`, sampled at every input `Q`.
///
/// The trivial point `(1, 0)` is appended when absent. Samples that are hull
/// vertices keep their own measurement; the others are labelled
/// [`Regime::Mixed`] and carry the chord's weights and component measurements.
pub fn convexify(points: &[RatePoint]) -> Result<FrioCurve> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(p) = points
        .iter()
        .find(|p| !(0.0..=1.0).contains(&p.q) || !p.pe.is_finite() || p.pe < -RATE_TOL)
    {
        return Err(Error::MalformedCurve(format!(
            "point ({}, {}) is not a rate pair",
            p.q, p.pe
        )));
    }

    let mut sorted: Vec<RatePoint> = points.to_vec();
    // Rates recomputed from measurements can dip below zero by rounding.
    sorted.iter_mut().for_each(|p| p.pe = p.pe.max(0.0));
    sorted.sort_by(|a, b| a.q.total_cmp(&b.q).then(a.pe.total_cmp(&b.pe)));
    sorted.dedup_by(|later, earlier| later.q == earlier.q);
    if sorted.last().map(|p| p.q) != Some(1.0) {
        let n_states = sorted.iter().find_map(|p| {
            p.povm.as_ref().map(|m| {
                m.elements()
                    .iter()
                    .filter(|(l, _)| matches!(l, Outcome::Identify(_)))
                    .count()
            })
        });
        sorted.push(RatePoint::new(1.0, 0.0, n_states.map(Povm::trivial)));
    }

    let mut hull: Vec<usize> = Vec::new();
    for i in 0..sorted.len() {
        while hull.len() >= 2
            && above_chord(&sorted[hull[hull.len() - 2]], &sorted[hull[hull.len() - 1]], &sorted[i])
        {
            hull.pop();
        }
        hull.push(i);
    }

    let mut out = Vec::with_capacity(sorted.len());
    let mut seg = 0;
    for (i, p) in sorted.iter().enumerate() {
        if hull.contains(&i) {
            let mut fp = FrioPoint::new(p.q, p.pe, Regime::Searched);
            fp.optimal_povm = p.povm.clone();
            out.push(fp);
            continue;
        }
        while sorted[hull[seg + 1]].q < p.q {
            seg += 1;
        }
        let (a, b) = (&sorted[hull[seg]], &sorted[hull[seg + 1]]);
        let weight = (b.q - p.q) / (b.q - a.q);
        let pe = weight * a.pe + (1.0 - weight) * b.pe;
        let mut fp = FrioPoint::new(p.q, pe, Regime::Mixed);
        if let (Some(pa), Some(pb)) = (&a.povm, &b.povm) {
            fp.optimal_povm = Some(pa.mix(weight, pb)?);
        }
        fp.mixture = Some(MixedStrategy {
            weight,
            first: (a.q, a.pe),
            second: (b.q, b.pe),
            first_povm: a.povm.clone(),
            second_povm: b.povm.clone(),
        });
        out.push(fp);
    }
    FrioCurve::new(out)
}
