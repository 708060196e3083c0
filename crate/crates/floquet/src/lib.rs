//! Periodic check-measurement schedules and their logical and syndrome bookkeeping.

pub mod protocol;
pub mod schedule;
pub mod syndrome;
pub mod tjunction;

use kekule_lattice::LatticeError;
use kekule_stabilizer::EngineError;

pub use protocol::{initial_state, run_cycle, verify_logical_preservation, LogicalInit, Record};
pub use schedule::{build_schedule, Round, RoundLabel, Schedule, Variant};
pub use syndrome::{ExtractorOptions, SyndromeExtractor, SyndromeRecord};
pub use tjunction::tjunction_exchange_sign;

#[derive(Debug, thiserror::Error)]
pub enum FloquetError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("cycle {cycle} round {round} bond {bond}: {source}")]
    Measurement { cycle: usize, round: usize, bond: usize, source: EngineError },
    #[error("{0}")]
    Unsupported(String),
    #[error("incomplete record: {0}")]
    IncompleteRecord(String),
    #[error("site {0} is not a trivalent x/y/z vertex")]
    NotTrivalent(usize),
    #[error("automorphism: {0}")]
    Automorphism(String),
}

impl FloquetError {
    fn at(e: EngineError, cycle: usize, round: usize, bond: usize) -> Self {
        FloquetError::Measurement { cycle, round: round + 1, bond, source: e }
    }

    /// Whether the error reports a measured logical (collapsed code space).
    pub fn is_collapse(&self) -> bool {
        matches!(self, FloquetError::Engine(EngineError::LogicalCollapse(_)) | FloquetError::Measurement { source: EngineError::LogicalCollapse(_), .. })
    }
}
