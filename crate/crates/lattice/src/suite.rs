//! The full invariant suite in one machine-readable report.

use std::collections::BTreeSet;

use kekule_core::Color;
use serde::Serialize;

use crate::{color_deletion_components, plaquette_report, validate_coloring, LatticeError, LatticeGraph, PlaquetteReport, ValidationReport};

#[derive(Clone, Debug, Serialize)]
pub struct LoopSummary {
    pub deleted: Color,
    pub components: usize,
    pub noncontractible: usize,
    /// Kinds of the plaquettes bounded by finite components.
    pub bounded_kinds: Vec<String>,
    /// Parities of the cells those plaquettes are homed in.
    pub parities: Vec<usize>,
    /// Finite components that bound no plaquette.
    pub unmatched: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub lattice: String,
    pub dims: [usize; 3],
    pub coloring: ValidationReport,
    pub plaquettes: Option<PlaquetteReport>,
    pub volumes: usize,
    /// Volume constraints whose bonds do not cancel.
    pub volume_failures: Vec<String>,
    pub loops: Vec<LoopSummary>,
    /// Commuting failures of plaquette operators with checks.
    pub noncommuting: usize,
}

impl SuiteReport {
    /// Violations of properties every lattice must satisfy.
    pub fn failures(&self) -> Vec<String> {
        let mut f: Vec<String> = self.coloring.violations.iter().map(|v| format!("{:?}", v)).collect();
        f.extend(self.volume_failures.iter().map(|v| format!("volume {} leaves bonds", v)));
        if self.noncommuting > 0 {
            f.push(format!("{} plaquette/check pairs anticommute", self.noncommuting));
        }
        f
    }

    pub fn loop_summary(&self, c: Color) -> &LoopSummary {
        self.loops.iter().find(|l| l.deleted == c).expect("all colors summarized")
    }
}

pub fn run_suite(g: &LatticeGraph) -> Result<SuiteReport, LatticeError> {
    let coloring = validate_coloring(g);
    // Operators need a proper coloring; on a broken one only the coloring report is meaningful.
    let ok = coloring.is_valid();
    let plaquettes = if g.plaquettes.is_empty() || !ok { None } else { Some(plaquette_report(g)?) };
    let volume_failures = g.volumes.iter().filter(|v| !g.volume_residue(v).is_empty()).map(|v| v.name.clone()).collect();
    let mut loops = Vec::new();
    if ok {
        for c in Color::ALL {
            let d = color_deletion_components(g, c)?;
            let mut kinds = BTreeSet::new();
            let mut parities = BTreeSet::new();
            let mut unmatched = 0;
            for k in d.components.iter().filter(|k| k.is_finite()) {
                let mut b = k.bonds.clone();
                b.sort_unstable();
                let hit = g.plaquettes.iter().find(|p| {
                    let mut q = p.bonds.clone();
                    q.sort_unstable();
                    q == b
                });
                match hit {
                    Some(p) => {
                        kinds.insert(p.kind.clone());
                        parities.insert(g.parity(p.cell));
                    }
                    None => unmatched += 1,
                }
            }
            loops.push(LoopSummary {
                deleted: c,
                components: d.components.len(),
                noncontractible: d.noncontractible(),
                bounded_kinds: kinds.into_iter().collect(),
                parities: parities.into_iter().collect(),
                unmatched,
            });
        }
    }
    let mut noncommuting = 0;
    for p in 0..if ok { g.plaquettes.len() } else { 0 } {
        let w = crate::operators::plaquette_operator(g, p);
        for b in 0..g.bonds.len() {
            noncommuting += w.anticommutes(&crate::operators::check(g, b)) as usize;
        }
    }
    Ok(SuiteReport {
        lattice: g.name.clone(),
        dims: g.dims,
        coloring,
        plaquettes,
        volumes: g.volumes.len(),
        volume_failures,
        loops,
        noncommuting,
    })
}
