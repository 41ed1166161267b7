//! Born-rule sampling of measurement outcomes.
//!
//! Trial `i` draws its two uniforms from a ChaCha8 stream keyed by the seed at
//! word offset `4i`, so the outcome of each trial is fixed by `(seed, i)`
//! alone and chunked parallel tallies agree with a serial run.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::povm::{rates, Outcome, Povm, RateTriple};
use crate::state::{Ensemble, QubitState};

/// Allowed deviation of outcome probabilities from a unit sum.
pub const PROBABILITY_TOL: f64 = 1e-9;
/// Random words consumed per trial.
const WORDS_PER_TRIAL: u128 = 4;
const CHUNK: u64 = 1 << 16;

/// Inverse-CDF sampler for one state measured by one POVM.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeSampler {
    labels: Vec<Outcome>,
    probabilities: Vec<f64>,
    cdf: Vec<f64>,
}

impl OutcomeSampler {
    pub fn new(state: &QubitState, povm: &Povm) -> Result<Self> {
        let probabilities: Vec<f64> = povm
            .elements()
            .iter()
            .map(|(_, op)| op.expectation(state.amplitudes()).max(0.0))
            .collect();
        let total: f64 = probabilities.iter().sum();
        if !((total - 1.0).abs() <= PROBABILITY_TOL) {
            return Err(Error::ProbabilityMismatch(total));
        }
        let cdf = probabilities
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p / total;
                Some(*acc)
            })
            .collect();
        Ok(OutcomeSampler {
            labels: povm.elements().iter().map(|(l, _)| *l).collect(),
            probabilities,
            cdf,
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn labels(&self) -> &[Outcome] {
        &self.labels
    }

    /// Element index for a uniform draw `u ∈ [0, 1)`.
    pub fn index_for(&self, u: f64) -> usize {
        let i = self.cdf.partition_point(|&c| c <= u);
        // Guards against the last cumulative sum rounding below 1.
        let i = i.min(self.cdf.len() - 1);
        // Never return a zero-probability outcome through rounding.
        if self.probabilities[i] > 0.0 {
            i
        } else {
            (0..=i).rev().find(|&j| self.probabilities[j] > 0.0).unwrap_or(i)
        }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        self.index_for(rng.gen::<f64>())
    }
}

/// Draws one element index of `povm` with the Born probabilities of `state`.
pub fn sample_outcome(state: &QubitState, povm: &Povm, rng: &mut impl Rng) -> Result<usize> {
    Ok(OutcomeSampler::new(state, povm)?.sample(rng))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub n_trials: u64,
    /// Success, error and inconclusive counts.
    pub counts: [u64; 3],
    pub empirical: RateTriple,
    pub reference: RateTriple,
    /// `√(p̂(1 − p̂)/n)` per component.
    pub standard_errors: [f64; 3],
    pub z_scores: [f64; 3],
}

impl TrialReport {
    pub fn max_abs_z(&self) -> f64 {
        self.z_scores.iter().fold(0.0, |m, z| m.max(z.abs()))
    }
}

fn unit(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn z_score(empirical: f64, reference: f64, se: f64, n: f64) -> f64 {
    let diff = empirical - reference;
    let se = if se > 0.0 {
        se
    } else {
        (reference * (1.0 - reference) / n).max(0.0).sqrt()
    };
    if se > 0.0 {
        diff / se
    } else if diff.abs() <= 1e-9 {
        0.0
    } else {
        f64::INFINITY.copysign(diff)
    }
}

/// Simulates `n_trials` rounds of preparing a state from `ensemble` and
/// measuring it with `povm`, and compares the tallies with [`rates`].
pub fn estimate_rates(ensemble: &Ensemble, povm: &Povm, n_trials: u64, seed: u64) -> Result<TrialReport> {
    if n_trials == 0 {
        return Err(Error::OutOfRange {
            name: "n_trials",
            value: 0.0,
        });
    }
    let reference = rates(ensemble, povm)?;
    let samplers = ensemble
        .states()
        .iter()
        .map(|s| OutcomeSampler::new(s, povm))
        .collect::<Result<Vec<_>>>()?;
    let prior_cdf: Vec<f64> = ensemble
        .priors()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let pick_state = |u: f64| {
        let i = prior_cdf.partition_point(|&c| c <= u).min(prior_cdf.len() - 1);
        if ensemble.priors()[i] > 0.0 {
            i
        } else {
            (0..=i).rev().find(|&j| ensemble.priors()[j] > 0.0).unwrap_or(i)
        }
    };

    let n_chunks = n_trials.div_ceil(CHUNK);
    let counts = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n_trials);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(start as u128 * WORDS_PER_TRIAL);
            let mut counts = [0u64; 3];
            for _ in start..end {
                let state = pick_state(unit(rng.next_u64()));
                let sampler = &samplers[state];
                let k = sampler.index_for(unit(rng.next_u64()));
                let slot = match sampler.labels[k] {
                    Outcome::Identify(j) if j == state => 0,
                    Outcome::Identify(_) => 1,
                    Outcome::Inconclusive => 2,
                };
                counts[slot] += 1;
            }
            counts
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);

    let n = n_trials as f64;
    let freq = counts.map(|c| c as f64 / n);
    let empirical = RateTriple::new(freq[0], freq[1], freq[2])?;
    let standard_errors = freq.map(|p| (p * (1.0 - p) / n).sqrt());
    let reference_arr = reference.as_array();
    let z_scores = std::array::from_fn(|i| z_score(freq[i], reference_arr[i], standard_errors[i], n));
    Ok(TrialReport {
        n_trials,
        counts,
        empirical,
        reference,
        standard_errors,
        z_scores,
    })
}
