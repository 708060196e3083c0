//! Free-Majorana analysis of Kitaev-type couplings on the lattice families: flux sectors, gauge
//! fixing, Bloch Hamiltonians and bulk gaps.

pub mod bloch;
pub mod gap;
pub mod gauge;

pub use bloch::{BlochModel, Couplings};
pub use gap::{gap, gap_map, gapless_window, phase_diagram, GapMap, GapResult, Window};
pub use gauge::{build_gauge, flux_report, lieb_flux, lieb_gauge, FluxAssignment, FluxConvention, FluxReport, Gauge};

use kekule_lattice::{build_lattice, LatticeGraph};

#[derive(Debug, thiserror::Error)]
pub enum MajoranaError {
    #[error(transparent)]
    Lattice(#[from] kekule_lattice::LatticeError),
    #[error("odd perimeter {0} has no Lieb flux")]
    OddPerimeter(usize),
    #[error("gauge flux differs from the assignment on {0:?}")]
    FluxMismatch(Vec<String>),
    #[error("no gauge realizes the requested fluxes")]
    Inconsistent,
    #[error("{0}")]
    Couplings(String),
    #[error("k-grid resolution {0} is too small")]
    Grid(usize),
    #[error("{0}")]
    Unsupported(String),
}

/// The smallest torus on which the bond colors are periodic: two cells along the first two
/// axes for parity-colored families, one cell otherwise.
pub fn supercell(name: &str) -> Result<LatticeGraph, MajoranaError> {
    let t = kekule_lattice::families::template(name)?;
    let dims = if t.parity_colors { [2, 2, 1] } else { [1, 1, 1] };
    Ok(build_lattice(name, dims)?)
}
