//! Exact solutions: two pure states with arbitrary priors and the trine.

mod critical;
mod trine;
mod two_pure;

pub use critical::{critical_from_curve, CONVEXITY_TOL, TANGENCY_ABS_TOL, TANGENCY_REL_TOL};
pub use trine::{TrineProblem, TRINE_ALPHA};
pub use two_pure::{Region, RegionLabel, TwoPureProblem};

use crate::curve::FrioPoint;
use crate::error::Result;
use crate::povm::Povm;

pub fn two_pure_qc(p: &TwoPureProblem) -> f64 {
    p.qc()
}

pub fn two_pure_qth(p: &TwoPureProblem) -> f64 {
    p.qth()
}

pub fn two_pure_pe_min(p: &TwoPureProblem, q: f64) -> FrioPoint {
    p.pe_min(q)
}

pub fn two_pure_optimal_povm(p: &TwoPureProblem, q: f64) -> Result<Povm> {
    p.optimal_povm(q)
}

pub fn trine_pe_min(theta: f64, q: f64) -> Result<FrioPoint> {
    Ok(TrineProblem::new(theta)?.pe_min(q))
}

pub fn trine_optimal_povm(theta: f64, q: f64) -> Result<Povm> {
    TrineProblem::new(theta)?.optimal_povm(q)
}
