use thiserror::Error;

use crate::povm::PovmViolation;

/// Errors raised by the discrimination library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid priors: {0}")]
    InvalidPriors(String),

    #[error("expected {expected} states, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid POVM: {}", describe(.0))]
    InvalidPovm(Vec<PovmViolation>),

    #[error("POVM labels do not match the ensemble: {0}")]
    LabelMismatch(String),

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("inconclusive element must satisfy 0 <= Pi0 <= I (eigenvalues {min}, {max})")]
    InvalidInconclusive { min: f64, max: f64 },

    #[error("Omega annihilates state {0}; the transformed state is undefined")]
    SingularOmega(usize),

    #[error("inconclusive rate is 1; no conclusive sector remains")]
    NoConclusiveSector,

    #[error("Omega does not match I - Pi0 (deviation {0:e})")]
    OmegaMismatch(f64),

    #[error("curve is not convex at sample {index} (excess {excess:e})")]
    NonConvexCurve { index: usize, excess: f64 },

    #[error("malformed curve: {0}")]
    MalformedCurve(String),

    #[error("empty input")]
    EmptyInput,

    #[error("outcome probabilities sum to {0}, not 1")]
    ProbabilityMismatch(f64),

    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

fn describe(violations: &[PovmViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
