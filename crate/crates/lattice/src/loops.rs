use kekule_core::Color;
use serde::Serialize;

use crate::{LatticeError, LatticeGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub sites: Vec<usize>,
    pub bonds: Vec<usize>,
    /// Accumulated cell offset around the cycle.
    pub winding: [i32; 3],
}

impl Cycle {
    pub fn is_finite(&self) -> bool {
        self.winding == [0; 3]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LoopDecomposition {
    pub deleted: Color,
    pub components: Vec<Cycle>,
}

impl LoopDecomposition {
    pub fn noncontractible(&self) -> usize {
        self.components.iter().filter(|c| !c.is_finite()).count()
    }
}

/// Cycles of the two-color subgraph left after removing color `c`.
pub fn color_deletion_components(g: &LatticeGraph, c: Color) -> Result<LoopDecomposition, LatticeError> {
    let n = g.n();
    let keep: Vec<Vec<usize>> = (0..n).map(|s| g.incident(s).iter().copied().filter(|&b| g.bonds[b].color != c).collect()).collect();
    if let Some(s) = (0..n).find(|&s| keep[s].len() != 2) {
        return Err(LatticeError::Invalid(format!("site {} has {} bonds after deleting {}", s, keep[s].len(), c)));
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut sites = vec![start];
        let mut bonds = Vec::new();
        let mut w = [0i32; 3];
        seen[start] = true;
        let mut cur = start;
        let mut via = keep[start][0];
        loop {
            let off = g.step_offset(via, cur);
            for i in 0..3 {
                w[i] += off[i];
            }
            bonds.push(via);
            let nxt = g.other_end(via, cur);
            if nxt == start {
                break;
            }
            seen[nxt] = true;
            sites.push(nxt);
            via = if keep[nxt][0] == via { keep[nxt][1] } else { keep[nxt][0] };
            cur = nxt;
        }
        comps.push(Cycle { sites, bonds, winding: w });
    }
    Ok(LoopDecomposition { deleted: c, components: comps })
}
