//! Minimum-error solvers for the reduced (conclusive) problem.
//!
//! Two states are solved exactly. For three states the search space is every
//! labelled measurement made of rank-one elements: with Bloch vectors
//! `r₁, r₂` free and `r₃ = −r₁ − r₂`, the elements
//! `Π_k = (|r_k| 𝕀 + r_k·σ) / Σ_j |r_j|` are positive and sum to `𝕀` for any
//! parameters, so every point visited is a valid measurement. The "always
//! answer k" measurements are checked separately.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::search::{dot, nelder_mead, norm};
use crate::error::{Error, Result};
use crate::helstrom::{helstrom_error, helstrom_povm};
use crate::linalg::HermitianOp;
use crate::povm::{Outcome, Povm};
use crate::state::Ensemble;

const NM_STEP: f64 = 0.2;
const NM_MAX_EVALS: usize = 3000;
const NM_FTOL: f64 = 1e-15;

/// How a reduced problem was solved, enough to rebuild its measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum InnerSolution {
    Helstrom,
    RankOne([f64; 6]),
    Guess(usize),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct InnerOutcome {
    pub pe: f64,
    pub solution: InnerSolution,
}

/// Search effort for the three-state solver.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Effort<'a> {
    /// One descent from the given parameters.
    Warm(&'a [f64; 6]),
    /// A deterministic start plus `restarts` random ones drawn from `seed`.
    Restarts { restarts: usize, seed: u64 },
}

struct ThreeStates {
    priors: [f64; 3],
    bloch: [[f64; 3]; 3],
}

impl ThreeStates {
    fn new(e: &Ensemble) -> Self {
        let p = e.priors();
        let s = e.states();
        ThreeStates {
            priors: [p[0], p[1], p[2]],
            bloch: [s[0].bloch_vector(), s[1].bloch_vector(), s[2].bloch_vector()],
        }
    }

    fn vectors(x: &[f64; 6]) -> [[f64; 3]; 3] {
        let r1 = [x[0], x[1], x[2]];
        let r2 = [x[3], x[4], x[5]];
        let r3 = [-x[0] - x[3], -x[1] - x[4], -x[2] - x[5]];
        [r1, r2, r3]
    }

    fn error(&self, x: &[f64; 6]) -> f64 {
        let r = Self::vectors(x);
        let lens = [norm(&r[0]), norm(&r[1]), norm(&r[2])];
        let total: f64 = lens.iter().sum();
        if total <= 1e-300 {
            return 1.0;
        }
        let success: f64 = (0..3)
            .map(|k| self.priors[k] * (lens[k] + dot(&r[k], &self.bloch[k])))
            .sum::<f64>()
            / total;
        1.0 - success
    }

    /// Centred Bloch vectors: the square-root measurement directions for
    /// symmetric ensembles and a reasonable start otherwise.
    fn natural_start(&self) -> [f64; 6] {
        let mean: [f64; 3] = std::array::from_fn(|i| (0..3).map(|k| self.bloch[k][i]).sum::<f64>() / 3.0);
        let d = |k: usize| -> [f64; 3] { std::array::from_fn(|i| self.bloch[k][i] - mean[i]) };
        let (a, b) = (d(0), d(1));
        let x = [a[0], a[1], a[2], b[0], b[1], b[2]];
        if x.iter().all(|v| v.abs() < 1e-9) {
            [1.0, 0.0, 0.0, -0.5, 0.8, 0.0]
        } else {
            x
        }
    }

    fn descend(&self, x0: [f64; 6]) -> ([f64; 6], f64) {
        let scale = x0.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-3);
        let f = |x: &[f64; 6]| self.error(x);
        let (x, fx) = nelder_mead(f, x0, NM_STEP * scale, NM_MAX_EVALS, NM_FTOL);
        // A second, smaller simplex shakes off premature collapse.
        let scale = x.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-3);
        let (x2, fx2) = nelder_mead(f, x, 0.02 * scale, NM_MAX_EVALS, NM_FTOL);
        if fx2 <= fx {
            (x2, fx2)
        } else {
            (x, fx)
        }
    }

    fn solve(&self, effort: Effort<'_>) -> InnerOutcome {
        let (k_best, p_best) = self
            .priors
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (k, p)| if p > acc.1 { (k, p) } else { acc });
        let mut best = InnerOutcome {
            pe: 1.0 - p_best,
            solution: InnerSolution::Guess(k_best),
        };
        let mut consider = |x: [f64; 6], fx: f64| {
            if fx < best.pe {
                best = InnerOutcome {
                    pe: fx,
                    solution: InnerSolution::RankOne(x),
                };
            }
        };
        match effort {
            Effort::Warm(x0) => {
                let (x, fx) = self.descend(*x0);
                consider(x, fx);
            }
            Effort::Restarts { restarts, seed } => {
                let (x, fx) = self.descend(self.natural_start());
                consider(x, fx);
                for r in 0..restarts {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(r as u64);
                    let x0: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                    let (x, fx) = self.descend(x0);
                    consider(x, fx);
                }
            }
        }
        best
    }
}

pub(crate) fn solve_inner(reduced: &Ensemble, effort: Effort<'_>) -> Result<InnerOutcome> {
    match reduced.len() {
        2 => Ok(InnerOutcome {
            pe: helstrom_error(reduced)?,
            solution: InnerSolution::Helstrom,
        }),
        3 => Ok(ThreeStates::new(reduced).solve(effort)),
        n => Err(Error::Arity { expected: 3, found: n }),
    }
}

/// Rebuilds the reduced measurement described by `solution`.
pub(crate) fn inner_povm(reduced: &Ensemble, solution: &InnerSolution) -> Result<Povm> {
    let n = reduced.len();
    match solution {
        InnerSolution::Helstrom => helstrom_povm(reduced),
        InnerSolution::Guess(k) => {
            let mut elements = vec![(Outcome::Inconclusive, HermitianOp::zero())];
            elements.extend((0..n).map(|i| {
                let op = if i == *k { HermitianOp::identity() } else { HermitianOp::zero() };
                (Outcome::Identify(i), op)
            }));
            Povm::new(elements)
        }
        InnerSolution::RankOne(x) => {
            let r = ThreeStates::vectors(x);
            let lens = [norm(&r[0]), norm(&r[1]), norm(&r[2])];
            let s = 2.0 / lens.iter().sum::<f64>();
            let mut elements = vec![(Outcome::Inconclusive, HermitianOp::zero())];
            elements.extend((0..3).map(|k| {
                let v = [s * r[k][0], s * r[k][1], s * r[k][2]];
                (Outcome::Identify(k), HermitianOp::from_bloch(s * lens[k], v))
            }));
            Povm::new(elements)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helstrom::square_root_measurement;
    use crate::povm::rates;
    use crate::state::QubitState;
    use std::f64::consts::PI;

    fn trine(theta: f64) -> Ensemble {
        Ensemble::uniform(
            (1..=3)
                .map(|k| QubitState::with_phase(theta, 2.0 * PI * k as f64 / 3.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn parameterization_error_matches_rates() {
        let e = trine(0.4);
        let t = ThreeStates::new(&e);
        let x = [0.3, -0.2, 0.5, 0.1, 0.7, -0.4];
        let povm = inner_povm(&e, &InnerSolution::RankOne(x)).unwrap();
        let r = rates(&e, &povm).unwrap();
        assert!((r.p_error - t.error(&x)).abs() < 1e-14);
        assert_eq!(r.q_inconclusive, 0.0);
    }

    #[test]
    fn trine_search_reaches_square_root_value() {
        for theta in [0.2, 0.5, PI / 4.0] {
            let e = trine(theta);
            let out = solve_inner(&e, Effort::Restarts { restarts: 4, seed: 7 }).unwrap();
            let srm = rates(&e, &square_root_measurement(&e).unwrap()).unwrap().p_error;
            assert!((out.pe - srm).abs() < 1e-9, "{theta}: {} vs {srm}", out.pe);
        }
    }

    #[test]
    fn skewed_priors_fall_back_to_guessing() {
        let s = QubitState::real(0.1);
        let e = Ensemble::new(vec![s, s, s], vec![0.7, 0.2, 0.1]).unwrap();
        let out = solve_inner(&e, Effort::Restarts { restarts: 2, seed: 1 }).unwrap();
        assert!((out.pe - 0.3).abs() < 1e-9);
    }
}
