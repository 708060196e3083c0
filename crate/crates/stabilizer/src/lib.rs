//! Stabilizer simulation on bit-packed binary-symplectic rows.
//!
//! [`Tableau`] keeps destabilizers and exact phases; [`GeneratorSet`] drops signs for
//! measurement-only dynamics on many thousands of qubits. [`dense`] is a statevector
//! reference used by the tests.

pub mod crosscheck;
pub mod dense;
mod genset;
mod pauli;
mod tableau;

pub use genset::GeneratorSet;
pub use pauli::Pauli;
pub use tableau::{Outcome, Tableau};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("qubit count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("operator is not Hermitian")]
    NonHermitian,
    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),
    #[error("region must be a nonempty proper subset of distinct qubits")]
    BadRegion,
    #[error("logical collapse: {0}")]
    LogicalCollapse(String),
    #[error("parse error: {0}")]
    Parse(String),
}
