//! Measurement-only dynamics of bond checks drawn from the color simplex.

pub mod components;
pub mod simplex;
pub mod survival;
pub mod sweep;
pub mod trajectory;

pub use simplex::{simplex_grid, SimplexPoint};
pub use sweep::{edge_scan, sweep_simplex, two_size_ratio, EdgeScan, EtaEstimate, PhaseMap, SweepSpec};
pub use trajectory::{run_trajectory, steady_state_entropy, Estimate, InitialState, Trajectory, TrajectoryConfig};

#[derive(Debug, thiserror::Error)]
pub enum MonitoredError {
    #[error("{0}")]
    Point(String),
    #[error(transparent)]
    Lattice(#[from] kekule_lattice::LatticeError),
    #[error(transparent)]
    Engine(#[from] kekule_stabilizer::EngineError),
    #[error("mean half-cut entropy is zero at L = {0}")]
    ZeroEntropy(usize),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
