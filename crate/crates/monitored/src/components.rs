//! Factorization of two-color dynamics over the connected components of the kept bonds.

use kekule_core::Color;
use kekule_lattice::LatticeGraph;
use kekule_stabilizer::GeneratorSet;

use crate::MonitoredError;

/// Component index of every site in the subgraph without bonds of color `absent`.
pub fn components(g: &LatticeGraph, absent: Color) -> Vec<usize> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut k = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = k;
        while let Some(u) = stack.pop() {
            for &b in g.incident(u) {
                if g.bonds[b].color == absent {
                    continue;
                }
                let v = g.other_end(b, u);
                if comp[v] == usize::MAX {
                    comp[v] = k;
                    stack.push(v);
                }
            }
        }
        k += 1;
    }
    comp
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Additivity {
    pub whole: usize,
    pub sum_over_components: usize,
}

/// S(A) against Σ_C S(A ∩ C), where each term is the entropy of A ∩ C within the full state.
pub fn component_additivity(state: &GeneratorSet, region: &[usize], comp: &[usize]) -> Result<Additivity, MonitoredError> {
    let whole = state.entropy(region)?;
    let mut parts: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &q in region {
        parts.entry(comp[q]).or_default().push(q);
    }
    let mut sum = 0;
    for (_, p) in parts {
        if p.len() < state.n() {
            sum += state.entropy(&p)?;
        }
    }
    Ok(Additivity { whole, sum_over_components: sum })
}
