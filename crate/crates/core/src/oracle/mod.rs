//! Numerical optimizer over qubit measurements at a fixed inconclusive rate.
//!
//! Pure strategies are searched with a rank-one inconclusive element
//! `Π₀ = ξ|n⟩⟨n|`, where `ξ = Q/⟨n|ρ|n⟩` is fixed by the rate constraint. For
//! each orientation `n` the remaining conclusive problem is reduced to
//! minimum-error discrimination and solved (exactly for two states, by direct
//! search for three). Orientations are screened on a Fibonacci grid and the
//! best few are refined by nested golden-section search in a gnomonic chart.
//!
//! With `allow_full_rank_pi0` the search additionally covers
//! `Π₀ = ξ(|n⟩⟨n| + t|−n⟩⟨−n|)`, `0 < t ≤ 1`, which is every admissible Π₀.
//! Rates above the largest eigenvalue of `ρ` are out of reach of rank-one
//! elements and are served by mixing pure strategies.
//!
//! The reported error is always recomputed from the returned measurement.

mod envelope;
mod inner;
pub mod search;

use std::cell::RefCell;

use rayon::prelude::*;

pub use envelope::{convexify, RatePoint};

use crate::curve::{linspace, FrioCurve, MixedStrategy};
use crate::error::{Error, Result};
use crate::linalg::HermitianOp;
use crate::povm::{rates, Povm};
use crate::reduction::{lift_povm, reduce, ReducedProblem};
use crate::state::Ensemble;
use inner::{inner_povm, solve_inner, Effort, InnerSolution};
use search::{chart, dot, fibonacci_sphere, golden_section, norm, normalize, tangent_basis};

/// Random restarts used per orientation while screening the grid.
const SCREEN_RESTARTS: usize = 2;
/// Number of distinct grid minima that get refined.
const SEEDS: usize = 4;
/// Refinement passes per seed; each pass shrinks the chart window.
const REFINE_ROUNDS: usize = 3;
/// States whose conclusive weight `tr(Ωρ_i)` is at or below this are dropped.
const DROP_CUTOFF: f64 = 1e-13;
/// A full-rank Π₀ must beat the rank-one optimum by more than this to be kept.
const FULL_RANK_MARGIN: f64 = 1e-12;
/// Eigenvalue ratios screened for full-rank candidates.
const FULL_RANK_RATIOS: [f64; 8] = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0];
/// Rate samples used to build the mixed fallback.
const MIXED_SAMPLES: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub orientation_grid_size: usize,
    /// Golden-section iterations per one-dimensional refinement.
    pub refinement_iterations: usize,
    pub q_constraint_tolerance: f64,
    pub allow_full_rank_pi0: bool,
    /// Random restarts of the three-state inner search at the final orientation.
    pub random_restarts: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            orientation_grid_size: 720,
            refinement_iterations: 60,
            q_constraint_tolerance: 1e-9,
            allow_full_rank_pi0: false,
            random_restarts: 32,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.orientation_grid_size < 8 {
            return Err(Error::InvalidConfig(format!(
                "orientation grid needs at least 8 points, got {}",
                self.orientation_grid_size
            )));
        }
        if self.refinement_iterations == 0 {
            return Err(Error::InvalidConfig("refinement_iterations must be positive".into()));
        }
        if !(self.q_constraint_tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "q_constraint_tolerance must be positive, got {}",
                self.q_constraint_tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StrategyKind {
    Pure,
    Mixed(MixedStrategy),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub pe: f64,
    pub povm: Povm,
    pub achieved_q: f64,
    pub strategy_kind: StrategyKind,
    /// Smaller eigenvalue of the returned Π₀.
    pub pi0_min_eigenvalue: f64,
}

/// Outcome of comparing rank-one and full-rank searches at one rate.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck {
    pub q: f64,
    pub rank_one_pe: f64,
    pub full_rank_pe: f64,
    /// `rank_one_pe − full_rank_pe`; positive when full rank did better.
    pub improvement: f64,
    /// Eigenvalue ratio `t` of the best full-rank candidate.
    pub full_rank_ratio: f64,
    /// Smaller eigenvalue of the winning Π₀.
    pub winner_min_eigenvalue: f64,
    pub holds: bool,
}

/// Allowed full-rank improvement in [`verify_zero_eigenvalue_theorem`].
pub const THEOREM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    n: [f64; 3],
    t: f64,
    pi0: HermitianOp,
    inner: Option<InnerSolution>,
}

impl Candidate {
    fn feasible(&self) -> bool {
        self.inner.is_some()
    }
}

struct Problem<'a> {
    ensemble: &'a Ensemble,
    q: f64,
    bloch: [f64; 3],
    cfg: &'a OracleConfig,
}

impl<'a> Problem<'a> {
    fn new(ensemble: &'a Ensemble, q: f64, cfg: &'a OracleConfig) -> Self {
        let (_, bloch) = ensemble.average_state().bloch();
        Problem {
            ensemble,
            q,
            bloch,
            cfg,
        }
    }

    /// `ξ(P_n + t P_{−n})` meeting the rate constraint, or a penalty above any
    /// achievable error when that needs `ξ > 1`.
    fn pi0_for(&self, n: &[f64; 3], t: f64) -> std::result::Result<HermitianOp, f64> {
        let r_n = 0.5 * (1.0 + dot(n, &self.bloch));
        let denom = r_n + t * (1.0 - r_n);
        let xi = self.q / denom;
        if !(denom > 0.0) || xi > 1.0 + 1e-12 {
            return Err(1.0 + xi.min(1e6));
        }
        let xi = xi.min(1.0);
        let v = [xi * (1.0 - t) * n[0], xi * (1.0 - t) * n[1], xi * (1.0 - t) * n[2]];
        Ok(HermitianOp::from_bloch(xi * (1.0 + t), v))
    }

    /// Reduced problem for `pi0`, with annihilated states given zero prior,
    /// and the total prior `W` of the survivors.
    fn reduced(&self, pi0: &HermitianOp) -> Result<(ReducedProblem, f64)> {
        let mut priors: Vec<f64> = self
            .ensemble
            .iter()
            .map(|(s, p)| {
                let w = 1.0 - pi0.expectation(s.amplitudes());
                if w > DROP_CUTOFF {
                    p
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = priors.iter().sum();
        if !(total > 0.0) {
            return Err(Error::NoConclusiveSector);
        }
        priors.iter_mut().for_each(|p| *p /= total);
        let sub = Ensemble::new(self.ensemble.states().to_vec(), priors)?;
        Ok((reduce(&sub, pi0)?, total))
    }

    fn evaluate(&self, n: [f64; 3], t: f64, effort: Effort<'_>) -> Candidate {
        let infeasible = |value: f64, pi0: HermitianOp| Candidate {
            value,
            n,
            t,
            pi0,
            inner: None,
        };
        let pi0 = match self.pi0_for(&n, t) {
            Ok(p) => p,
            Err(penalty) => return infeasible(penalty, HermitianOp::zero()),
        };
        let solved = self
            .reduced(&pi0)
            .and_then(|(red, total)| Ok((solve_inner(&red.ensemble, effort)?, red, total)));
        match solved {
            Ok((out, red, total)) => Candidate {
                value: total * (1.0 - red.q) * out.pe,
                n,
                t,
                pi0,
                inner: Some(out.solution),
            },
            Err(_) => infeasible(2.0, pi0),
        }
    }

    fn screening_effort(&self) -> Effort<'static> {
        Effort::Restarts {
            restarts: SCREEN_RESTARTS.min(self.cfg.random_restarts),
            seed: self.cfg.seed,
        }
    }

    fn warm_effort<'b>(&self, c: &'b Candidate) -> Effort<'b> {
        match &c.inner {
            Some(InnerSolution::RankOne(x)) => Effort::Warm(x),
            _ => Effort::Restarts {
                restarts: 0,
                seed: self.cfg.seed,
            },
        }
    }

    fn full_effort(&self) -> Effort<'static> {
        Effort::Restarts {
            restarts: self.cfg.random_restarts,
            seed: self.cfg.seed,
        }
    }

    fn grid(&self) -> Vec<[f64; 3]> {
        let mut grid = fibonacci_sphere(self.cfg.orientation_grid_size);
        if norm(&self.bloch) > 1e-12 {
            // The direction of largest ⟨n|ρ|n⟩ reaches the highest rates.
            grid.push(normalize(self.bloch));
        }
        grid
    }

    /// Best Π₀ of the requested shape; `None` if no candidate met the rate.
    fn search(&self, full_rank: bool) -> Option<Candidate> {
        let ratios: &[f64] = if full_rank { &FULL_RANK_RATIOS } else { &[0.0] };
        let screening = self.screening_effort();
        let mut screened: Vec<Candidate> = self
            .grid()
            .into_iter()
            .flat_map(|n| ratios.iter().map(move |&t| (n, t)))
            .map(|(n, t)| self.evaluate(n, t, screening))
            .collect();
        screened.sort_by(|a, b| a.value.total_cmp(&b.value));

        let spacing = (4.0 * std::f64::consts::PI / self.cfg.orientation_grid_size as f64).sqrt();
        let mut seeds: Vec<Candidate> = Vec::with_capacity(SEEDS);
        for c in screened {
            if seeds.len() == SEEDS {
                break;
            }
            let distinct = seeds
                .iter()
                .all(|s| dot(&s.n, &c.n) < (2.0 * spacing).cos() || (s.t - c.t).abs() > 1e-12);
            if distinct {
                seeds.push(c);
            }
        }

        let mut best: Option<Candidate> = None;
        for seed in seeds {
            let refined = self.refine(seed, 2.0 * spacing, full_rank);
            if best.is_none_or(|b| refined.value < b.value) {
                best = Some(refined);
            }
        }
        let best = best?;
        let polished = self.evaluate(best.n, best.t, self.full_effort());
        let warm = self.evaluate(best.n, best.t, self.warm_effort(&best));
        let out = [best, polished, warm]
            .into_iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("three candidates");
        out.feasible().then_some(out)
    }

    fn refine(&self, seed: Candidate, width: f64, full_rank: bool) -> Candidate {
        let iters = self.cfg.refinement_iterations;
        let best = RefCell::new(seed);
        let mut width = width;
        for _ in 0..REFINE_ROUNDS {
            let centre = *best.borrow();
            let basis = tangent_basis(&centre.n);
            let effort = self.warm_effort(&centre);
            let consider = |c: Candidate| {
                let v = c.value;
                let mut b = best.borrow_mut();
                if v < b.value {
                    *b = c;
                }
                v
            };
            golden_section(
                |a| {
                    golden_section(
                        |b| consider(self.evaluate(chart(&centre.n, &basis, a, b), centre.t, effort)),
                        -width,
                        width,
                        iters,
                    )
                    .1
                },
                -width,
                width,
                iters,
            );
            if full_rank {
                let c = *best.borrow();
                let effort = self.warm_effort(&c);
                golden_section(|t| consider(self.evaluate(c.n, t, effort)), 0.0, 1.0, iters);
            }
            width *= 0.125;
        }
        best.into_inner()
    }

    fn finish(&self, c: &Candidate, strategy_kind: StrategyKind) -> Result<OracleResult> {
        let solution = c
            .inner
            .ok_or_else(|| Error::Numerical("no feasible inconclusive element".into()))?;
        let (red, _) = self.reduced(&c.pi0)?;
        let tilde = inner_povm(&red.ensemble, &solution)?;
        let povm = lift_povm(&tilde, &red.omega, &c.pi0)?;
        self.report(povm, strategy_kind)
    }

    fn report(&self, povm: Povm, strategy_kind: StrategyKind) -> Result<OracleResult> {
        let r = rates(self.ensemble, &povm)?;
        if (r.q_inconclusive - self.q).abs() > self.cfg.q_constraint_tolerance {
            return Err(Error::Numerical(format!(
                "achieved rate {} misses the requested {}",
                r.q_inconclusive, self.q
            )));
        }
        let pi0_min_eigenvalue = povm.inconclusive().map_or(0.0, |p| p.min_eigenvalue());
        Ok(OracleResult {
            pe: r.p_error,
            povm,
            achieved_q: r.q_inconclusive,
            strategy_kind,
            pi0_min_eigenvalue,
        })
    }

    /// Best pure strategy; full-rank Π₀ only displaces rank one by a clear margin.
    fn pure(&self) -> Option<Candidate> {
        if self.q == 0.0 {
            let c = self.evaluate([0.0, 0.0, 1.0], 0.0, self.full_effort());
            return c.feasible().then_some(c);
        }
        let rank_one = self.search(false);
        if !self.cfg.allow_full_rank_pi0 {
            return rank_one;
        }
        match (rank_one, self.search(true)) {
            (Some(r), Some(f)) if f.value < r.value - FULL_RANK_MARGIN => Some(f),
            (None, f) => f,
            (r, _) => r,
        }
    }

    /// Chord between pure optima below `λ_max(ρ)` and the trivial strategy.
    fn mixed(&self) -> Result<OracleResult> {
        let lam = self.ensemble.average_state().max_eigenvalue();
        let mut points = Vec::with_capacity(MIXED_SAMPLES + 1);
        for q in linspace(0.0, lam * (1.0 - 1e-9), MIXED_SAMPLES) {
            let sub = Problem::new(self.ensemble, q, self.cfg);
            if let Some(c) = sub.pure() {
                let res = sub.finish(&c, StrategyKind::Pure)?;
                points.push(RatePoint::new(res.achieved_q, res.pe, Some(res.povm)));
            }
        }
        points.push(RatePoint::new(self.q, 1.0, None));
        let curve = convexify(&points)?;
        let pt = curve
            .points
            .iter()
            .find(|p| p.q == self.q)
            .ok_or_else(|| Error::Numerical("rate missing from envelope".into()))?;
        let (povm, mixture) = match (&pt.optimal_povm, &pt.mixture) {
            (Some(p), Some(m)) => (p.clone(), m.clone()),
            _ => return Err(Error::Numerical("envelope has no mixed strategy at this rate".into())),
        };
        self.report(povm, StrategyKind::Mixed(mixture))
    }
}

fn check_inputs(ensemble: &Ensemble, q: f64, cfg: &OracleConfig) -> Result<()> {
    cfg.validate()?;
    if !(2..=3).contains(&ensemble.len()) {
        return Err(Error::Arity {
            expected: if ensemble.len() < 2 { 2 } else { 3 },
            found: ensemble.len(),
        });
    }
    if !(0.0..1.0).contains(&q) {
        return Err(Error::OutOfRange { name: "q", value: q });
    }
    Ok(())
}

/// Smallest error found over measurements with inconclusive rate `q`.
///
/// Pure strategies are preferred; when `q` exceeds every rank-one reach the
/// result mixes pure optima with the trivial measurement.
pub fn optimize_fixed_q(ensemble: &Ensemble, q: f64, cfg: &OracleConfig) -> Result<OracleResult> {
    check_inputs(ensemble, q, cfg)?;
    let problem = Problem::new(ensemble, q, cfg);
    match problem.pure() {
        Some(c) => {
            let pure = problem.finish(&c, StrategyKind::Pure)?;
            let lam = ensemble.average_state().max_eigenvalue();
            if q > lam {
                // Only full-rank elements reach here; a mixture may still do better.
                let mixed = problem.mixed()?;
                if mixed.pe < pure.pe {
                    return Ok(mixed);
                }
            }
            Ok(pure)
        }
        None => problem.mixed(),
    }
}

/// Oracle values at each `q < 1` plus the trivial point, convexified.
///
/// Rates are solved in parallel; each is independent of the others.
pub fn oracle_curve(ensemble: &Ensemble, qs: &[f64], cfg: &OracleConfig) -> Result<FrioCurve> {
    let points = qs
        .par_iter()
        .filter(|&&q| q < 1.0)
        .map(|&q| {
            let r = optimize_fixed_q(ensemble, q, cfg)?;
            Ok(RatePoint::new(q, r.pe, Some(r.povm)))
        })
        .collect::<Result<Vec<_>>>()?;
    convexify(&points)
}

/// Compares rank-one and unrestricted Π₀ searches at each rate.
///
/// Rates should lie where the minimal error curve is strictly convex.
pub fn verify_zero_eigenvalue_theorem(
    ensemble: &Ensemble,
    q_samples: &[f64],
    cfg: &OracleConfig,
) -> Result<Vec<TheoremCheck>> {
    let mut out = Vec::with_capacity(q_samples.len());
    for &q in q_samples {
        check_inputs(ensemble, q, cfg)?;
        let problem = Problem::new(ensemble, q, cfg);
        let rank_one = problem
            .search(false)
            .ok_or_else(|| Error::Numerical(format!("no rank-one element reaches q = {q}")))?;
        let full = problem
            .search(true)
            .ok_or_else(|| Error::Numerical(format!("no full-rank element reaches q = {q}")))?;
        let r1 = problem.finish(&rank_one, StrategyKind::Pure)?;
        let fr = problem.finish(&full, StrategyKind::Pure)?;
        let improvement = r1.pe - fr.pe;
        let winner = if improvement > FULL_RANK_MARGIN { &fr } else { &r1 };
        out.push(TheoremCheck {
            q,
            rank_one_pe: r1.pe,
            full_rank_pe: fr.pe,
            improvement,
            full_rank_ratio: full.t,
            winner_min_eigenvalue: winner.pi0_min_eigenvalue,
            holds: improvement <= THEOREM_TOL,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{TrineProblem, TwoPureProblem};
    use crate::helstrom::helstrom_error;
    use crate::povm::validate_povm;

    fn quick() -> OracleConfig {
        OracleConfig {
            orientation_grid_size: 200,
            refinement_iterations: 40,
            random_restarts: 4,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        let bad = OracleConfig {
            orientation_grid_size: 4,
            ..OracleConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = OracleConfig {
            q_constraint_tolerance: 0.0,
            ..OracleConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn q_zero_is_helstrom() {
        let e = TwoPureProblem::new(0.3, 0.7).unwrap().ensemble();
        let r = optimize_fixed_q(&e, 0.0, &quick()).unwrap();
        assert!((r.pe - helstrom_error(&e).unwrap()).abs() < 1e-12);
        assert_eq!(r.strategy_kind, StrategyKind::Pure);
    }

    #[test]
    fn matches_interior_closed_form() {
        let p = TwoPureProblem::new(0.5, 0.5).unwrap();
        let r = optimize_fixed_q(&p.ensemble(), 0.3, &quick()).unwrap();
        let closed = p.pe_min(0.3).pe_min;
        assert!(r.pe >= closed - 1e-9);
        assert!(r.pe - closed < 1e-7, "{} vs {closed}", r.pe);
        assert!(validate_povm(&r.povm).is_empty());
        assert!((r.achieved_q - 0.3).abs() < 1e-9);
    }

    #[test]
    fn matches_projective_closed_form() {
        let p = TwoPureProblem::new(0.1, 0.5).unwrap();
        let q = 0.27;
        let r = optimize_fixed_q(&p.ensemble(), q, &quick()).unwrap();
        let closed = p.pe_min(q).pe_min;
        assert!(r.pe >= closed - 1e-9);
        assert!(r.pe - closed < 1e-7, "{} vs {closed}", r.pe);
    }

    #[test]
    fn matches_trine_closed_form() {
        let t = TrineProblem::new(std::f64::consts::PI / 10.0).unwrap();
        let r = optimize_fixed_q(&t.ensemble(), 0.4, &quick()).unwrap();
        let closed = t.pe_min(0.4).pe_min;
        assert!(r.pe >= closed - 1e-9);
        assert!(r.pe - closed < 1e-6, "{} vs {closed}", r.pe);
    }

    #[test]
    fn high_rate_falls_back_to_mixing() {
        let p = TwoPureProblem::new(0.5, 0.5).unwrap();
        let e = p.ensemble();
        let lam = e.average_state().max_eigenvalue();
        let q = 0.5 * (lam + 1.0);
        let r = optimize_fixed_q(&e, q, &quick()).unwrap();
        assert!(matches!(r.strategy_kind, StrategyKind::Mixed(_)));
        assert!(r.pe.abs() < 1e-9);
        assert!((r.achieved_q - q).abs() < 1e-9);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let t = TrineProblem::new(0.3).unwrap();
        let a = optimize_fixed_q(&t.ensemble(), 0.2, &quick()).unwrap();
        let b = optimize_fixed_q(&t.ensemble(), 0.2, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = TwoPureProblem::new(0.5, 0.5).unwrap().ensemble();
        assert!(optimize_fixed_q(&e, 1.0, &quick()).is_err());
        assert!(optimize_fixed_q(&e, -0.1, &quick()).is_err());
    }
}
