//! Qubit state discrimination with a fixed rate of inconclusive outcomes.
//!
//! The crate minimizes the error probability `P_e` of a measurement subject to
//! a prescribed inconclusive probability `Q`. It provides the qubit linear
//! algebra and POVM types, the reduction of the constrained problem to plain
//! minimum-error discrimination, exact solutions for two pure states and for
//! the trine, a numerical oracle over qubit POVMs and a Monte Carlo sampler.

pub mod closedform;
pub mod curve;
pub mod error;
pub mod helstrom;
pub mod linalg;
pub mod oracle;
pub mod povm;
pub mod reduction;
pub mod simulate;
pub mod state;

pub use curve::{CriticalData, FrioCurve, FrioPoint, MixedStrategy, Regime};
pub use error::{Error, Result};
pub use linalg::HermitianOp;
pub use povm::{rates, validate_povm, Outcome, Povm, RateTriple};
pub use state::{Ensemble, QubitState};
