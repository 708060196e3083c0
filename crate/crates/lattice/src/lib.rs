//! Tricoordinated, 3-edge-colored periodic lattices and the operators built on them.

pub mod decorate;
pub mod families;
pub mod graph;
pub mod loops;
pub mod operators;
pub mod suite;
pub mod template;
pub mod validate;

use std::collections::BTreeMap;

use kekule_core::{gf2, Color};
use serde::Serialize;

pub use graph::{Bond, LatticeGraph, Plaquette, VolumeClass, VolumeConstraint};
pub use loops::{color_deletion_components, Cycle, LoopDecomposition};
pub use operators::{logical_operators, LogicalSet};
pub use suite::{run_suite, LoopSummary, SuiteReport};
pub use validate::{validate_coloring, ValidationReport, Violation};

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("unknown lattice '{0}'")]
    UnknownLattice(String),
    #[error("invalid dimensions: {0}")]
    Dims(String),
    #[error("template error: {0}")]
    Template(String),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("{0}")]
    Invalid(String),
    #[error("lattice '{0}' has no {1}")]
    Unsupported(String, &'static str),
}

/// Builds a named lattice on an `L1 x L2 x L3` torus. For 2d names `dims[2]` must be 1.
pub fn build_lattice(name: &str, dims: [usize; 3]) -> Result<LatticeGraph, LatticeError> {
    let t = families::template(name)?;
    let mut g = LatticeGraph::from_template(&t, dims)?;
    g.name = name.to_string();
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct KindSummary {
    pub kind: String,
    pub per_cell: usize,
    pub perimeter: usize,
    pub colors_used: Vec<Color>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaquetteReport {
    pub lattice: String,
    pub cells: usize,
    pub plaquettes: usize,
    pub kinds: Vec<KindSummary>,
    /// Kinds whose boundary uses all three colors.
    pub three_color_kinds: Vec<String>,
    pub volumes_per_cell: usize,
    /// Plaquettes per cell minus volume constraints per cell.
    pub local_independent_per_cell: usize,
    /// GF(2) rank of all plaquette operators on the torus.
    pub rank: usize,
}

/// Plaquettes of `g`, or an error when the lattice carries no plaquette template.
pub fn enumerate_plaquettes(g: &LatticeGraph) -> Result<&[Plaquette], LatticeError> {
    if g.plaquettes.is_empty() {
        return Err(LatticeError::Unsupported(g.name.clone(), "plaquette template"));
    }
    Ok(&g.plaquettes)
}

pub fn plaquette_report(g: &LatticeGraph) -> Result<PlaquetteReport, LatticeError> {
    let ps = enumerate_plaquettes(g)?;
    let cells = g.num_cells();
    let mut by_kind: BTreeMap<String, KindSummary> = BTreeMap::new();
    for p in ps {
        let e = by_kind.entry(p.kind.clone()).or_insert_with(|| KindSummary {
            kind: p.kind.clone(),
            per_cell: 0,
            perimeter: p.perimeter(),
            colors_used: p.colors_used.clone(),
        });
        e.per_cell += 1;
        for c in &p.colors_used {
            if !e.colors_used.contains(c) {
                e.colors_used.push(*c);
            }
        }
    }
    let mut kinds: Vec<KindSummary> = by_kind.into_values().collect();
    for k in &mut kinds {
        k.per_cell /= cells;
        k.colors_used.sort();
    }
    let three_color_kinds = kinds.iter().filter(|k| k.colors_used.len() == 3).map(|k| k.kind.clone()).collect();
    let rows: Vec<_> = (0..ps.len()).map(|p| operators::plaquette_operator(g, p).symplectic()).collect();
    let per_cell = ps.len() / cells;
    let vols = g.volumes.len() / cells;
    Ok(PlaquetteReport {
        lattice: g.name.clone(),
        cells,
        plaquettes: ps.len(),
        kinds,
        three_color_kinds,
        volumes_per_cell: vols,
        local_independent_per_cell: per_cell.saturating_sub(vols),
        rank: gf2::rank(&rows),
    })
}

/// Volume constraints of `g`; only lattices with stored volumes support this.
pub fn volume_constraints(g: &LatticeGraph) -> Result<&[VolumeConstraint], LatticeError> {
    if g.volumes.is_empty() {
        return Err(LatticeError::Unsupported(g.name.clone(), "volume constraints"));
    }
    Ok(&g.volumes)
}
