use kekule_core::Color;
use serde::Serialize;

use crate::LatticeGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Degree { site: usize, degree: usize },
    SameColor { site: usize, color: Color, count: usize },
    PlaquetteRevisit { plaquette: usize, site: usize },
    PlaquetteColors { plaquette: usize, colors: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub lattice: String,
    pub sites: usize,
    pub bonds: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tricoordination and proper coloring at every site, plus plaquette boundary sanity.
pub fn validate_coloring(g: &LatticeGraph) -> ValidationReport {
    let mut v = Vec::new();
    for s in 0..g.n() {
        let inc = g.incident(s);
        // a self-loop would be listed twice, which still counts toward the degree correctly
        if inc.len() != 3 {
            v.push(Violation::Degree { site: s, degree: inc.len() });
        }
        for c in Color::ALL {
            let k = inc.iter().filter(|&&b| g.bonds[b].color == c).count();
            if k > 1 {
                v.push(Violation::SameColor { site: s, color: c, count: k });
            }
        }
    }
    for p in &g.plaquettes {
        let mut seen = std::collections::BTreeSet::new();
        for &s in &p.sites {
            if !seen.insert(s) {
                v.push(Violation::PlaquetteRevisit { plaquette: p.id, site: s });
            }
        }
        if !(2..=3).contains(&p.colors_used.len()) {
            v.push(Violation::PlaquetteColors { plaquette: p.id, colors: p.colors_used.len() });
        }
    }
    ValidationReport { lattice: g.name.clone(), sites: g.n(), bonds: g.bonds.len(), violations: v }
}
