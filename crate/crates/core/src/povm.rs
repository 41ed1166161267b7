//! Measurements with an inconclusive outcome and the rate triple they induce.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::HermitianOp;
use crate::state::Ensemble;

/// Minimum eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Entrywise tolerance on `Σ Π_k = 𝕀`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance on rate-triple components and their sum.
pub const RATE_TOL: f64 = 1e-10;

/// Role of a POVM element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Π₀: no identification is made.
    Inconclusive,
    /// Claims the system was prepared in ensemble state `i`.
    Identify(usize),
}

/// A single broken POVM axiom, with the offending magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PovmViolation {
    NotPositive { element: usize, min_eigenvalue: f64 },
    Incomplete { deviation: f64 },
    InconclusiveCount { count: usize },
}

impl fmt::Display for PovmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PovmViolation::NotPositive {
                element,
                min_eigenvalue,
            } => write!(
                f,
                "element {element} is not positive (min eigenvalue {min_eigenvalue:e})"
            ),
            PovmViolation::Incomplete { deviation } => {
                write!(f, "elements do not sum to identity (deviation {deviation:e})")
            }
            PovmViolation::InconclusiveCount { count } => {
                write!(f, "expected one inconclusive element, found {count}")
            }
        }
    }
}

/// An ordered list of labelled positive operators.
///
/// [`Povm::from_parts`] accepts anything so that broken measurements can be
/// diagnosed with [`validate_povm`]; [`Povm::new`] only accepts valid ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<(Outcome, HermitianOp)>,
}

impl Povm {
    pub fn new(elements: Vec<(Outcome, HermitianOp)>) -> Result<Self> {
        let povm = Self::from_parts(elements);
        let violations = validate_povm(&povm);
        if violations.is_empty() {
            Ok(povm)
        } else {
            Err(Error::InvalidPovm(violations))
        }
    }

    pub fn from_parts(elements: Vec<(Outcome, HermitianOp)>) -> Self {
        Povm { elements }
    }

    /// `{Π₀ = 𝕀, Π_i = 0}`: never commit to an answer.
    pub fn trivial(n_states: usize) -> Self {
        let mut elements = vec![(Outcome::Inconclusive, HermitianOp::identity())];
        elements.extend((0..n_states).map(|i| (Outcome::Identify(i), HermitianOp::zero())));
        Povm { elements }
    }

    pub fn elements(&self) -> &[(Outcome, HermitianOp)] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The first element labelled inconclusive.
    pub fn inconclusive(&self) -> Option<&HermitianOp> {
        self.element(Outcome::Inconclusive)
    }

    pub fn element(&self, label: Outcome) -> Option<&HermitianOp> {
        self.elements
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, op)| op)
    }

    pub fn sum(&self) -> HermitianOp {
        self.elements.iter().map(|(_, op)| *op).sum()
    }

    /// The mixed strategy `p·self + (1-p)·other`; labels must line up.
    pub fn mix(&self, p: f64, other: &Povm) -> Result<Povm> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "mixing weight",
                value: p,
            });
        }
        let same_labels = self.len() == other.len()
            && self
                .elements
                .iter()
                .zip(&other.elements)
                .all(|((a, _), (b, _))| a == b);
        if !same_labels {
            return Err(Error::LabelMismatch(
                "mixed POVMs must share their outcome labels".into(),
            ));
        }
        Ok(Povm {
            elements: self
                .elements
                .iter()
                .zip(&other.elements)
                .map(|((l, a), (_, b))| (*l, *a * p + *b * (1.0 - p)))
                .collect(),
        })
    }
}

/// Lists every violated POVM axiom; empty iff the measurement is valid.
pub fn validate_povm(povm: &Povm) -> Vec<PovmViolation> {
    let mut out = Vec::new();
    for (k, (_, op)) in povm.elements.iter().enumerate() {
        let min = op.min_eigenvalue();
        if !(min >= -PSD_TOL) {
            out.push(PovmViolation::NotPositive {
                element: k,
                min_eigenvalue: min,
            });
        }
    }
    let deviation = (povm.sum() - HermitianOp::identity()).max_abs();
    if !(deviation <= COMPLETENESS_TOL) {
        out.push(PovmViolation::Incomplete { deviation });
    }
    let count = povm
        .elements
        .iter()
        .filter(|(l, _)| *l == Outcome::Inconclusive)
        .count();
    if count != 1 {
        out.push(PovmViolation::InconclusiveCount { count });
    }
    out
}

/// Success, error and inconclusive probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTriple {
    pub p_success: f64,
    pub p_error: f64,
    pub q_inconclusive: f64,
}

impl RateTriple {
    pub fn new(p_success: f64, p_error: f64, q_inconclusive: f64) -> Result<Self> {
        for (name, v) in [
            ("p_success", p_success),
            ("p_error", p_error),
            ("q_inconclusive", q_inconclusive),
        ] {
            if !(-RATE_TOL..=1.0 + RATE_TOL).contains(&v) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        let total = p_success + p_error + q_inconclusive;
        if !((total - 1.0).abs() <= RATE_TOL) {
            return Err(Error::OutOfRange {
                name: "rate sum",
                value: total,
            });
        }
        Ok(RateTriple {
            p_success,
            p_error,
            q_inconclusive,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p_success, self.p_error, self.q_inconclusive]
    }
}

/// Checks that `povm` has one inconclusive element and exactly one
/// `Identify(i)` element for each of the `n` ensemble states.
pub(crate) fn check_labels(povm: &Povm, n: usize) -> Result<()> {
    let mut seen = vec![0usize; n];
    let mut inconclusive = 0;
    for (label, _) in povm.elements() {
        match *label {
            Outcome::Inconclusive => inconclusive += 1,
            Outcome::Identify(i) if i < n => seen[i] += 1,
            Outcome::Identify(i) => {
                return Err(Error::LabelMismatch(format!(
                    "outcome identifies state {i} but the ensemble has {n}"
                )))
            }
        }
    }
    if inconclusive != 1 {
        return Err(Error::LabelMismatch(format!(
            "{inconclusive} inconclusive elements"
        )));
    }
    if let Some(i) = seen.iter().position(|&c| c != 1) {
        return Err(Error::LabelMismatch(format!(
            "state {i} is identified by {} elements",
            seen[i]
        )));
    }
    Ok(())
}

/// Evaluates `(P_s, P_e, Q)` for `ensemble` measured with `povm`.
///
/// `P_s = Σ_i η_i tr(ρ_i Π_i)`, `P_e = Σ_{i≠j} η_i tr(ρ_i Π_j)` and
/// `Q = tr(ρ Π₀)`.
pub fn rates(ensemble: &Ensemble, povm: &Povm) -> Result<RateTriple> {
    check_labels(povm, ensemble.len())?;
    let violations = validate_povm(povm);
    if !violations.is_empty() {
        return Err(Error::InvalidPovm(violations));
    }
    let (mut ps, mut pe, mut q) = (0.0, 0.0, 0.0);
    for (i, (state, prior)) in ensemble.iter().enumerate() {
        for (label, op) in povm.elements() {
            let p = prior * op.expectation(state.amplitudes());
            match *label {
                Outcome::Inconclusive => q += p,
                Outcome::Identify(j) if j == i => ps += p,
                Outcome::Identify(_) => pe += p,
            }
        }
    }
    RateTriple::new(ps, pe, q)
}
