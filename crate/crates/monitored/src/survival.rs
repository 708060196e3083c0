//! Survival of encoded logicals under monitored dynamics, tracked with reference qubits.

use kekule_core::gf2::EchelonBasis;
use kekule_core::{rng, Color};
use kekule_lattice::operators::zz_and_plaquettes;
use kekule_lattice::{logical_operators, LatticeGraph};
use kekule_stabilizer::{GeneratorSet, Pauli};
use rand::Rng;
use serde::Serialize;

use crate::simplex::SimplexPoint;
use crate::MonitoredError;

fn extend(p: &Pauli, n: usize) -> Pauli {
    let mut q = Pauli::identity(n);
    for s in p.support() {
        q.mul_assign(&Pauli::single(n, s, p.site(s).unwrap()));
    }
    q.with_sign(1)
}

/// Code state on n system qubits plus one reference per logical, each maximally entangled with
/// its logical pair: generators l_i Z_ref and m_i X_ref.
pub fn entangled_code_state(g: &LatticeGraph) -> Result<(GeneratorSet, usize), MonitoredError> {
    let n = g.n();
    let ls = logical_operators(g, Color::Z)?;
    let k = ls.lines.len();
    let tot = n + k;
    let mut basis = EchelonBasis::new(2 * n, 0);
    let mut gens = Vec::with_capacity(tot);
    for p in zz_and_plaquettes(g) {
        if basis.insert(&p.symplectic()) {
            gens.push(extend(&p, tot));
        }
    }
    for i in 0..k {
        let mut a = extend(&ls.lines[i], tot);
        a.mul_assign(&Pauli::single(tot, n + i, Color::Z));
        gens.push(a.with_sign(1));
        let mut b = extend(&ls.membranes[i], tot);
        b.mul_assign(&Pauli::single(tot, n + i, Color::X));
        gens.push(b.with_sign(1));
    }
    Ok((GeneratorSet::from_generators(tot, &gens)?, k))
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalReport {
    pub sites: usize,
    pub logicals: usize,
    pub trajectories: usize,
    pub time: f64,
    /// Mean number of logical qubits lost by `time`.
    pub mean_lost: f64,
    /// Lost logical qubits per logical per unit time.
    pub loss_rate: f64,
}

/// Logical information remaining is the reference entropy; each lost bit is a lost logical.
pub fn logical_survival(g: &LatticeGraph, point: SimplexPoint, time: f64, trajectories: usize, seed: u64) -> Result<SurvivalReport, MonitoredError> {
    let n = g.n();
    let by_color = [g.bonds_of_color(Color::X), g.bonds_of_color(Color::Y), g.bonds_of_color(Color::Z)];
    let mut lost_total = 0usize;
    let mut k = 0;
    for j in 0..trajectories {
        let (mut st, kk) = entangled_code_state(g)?;
        k = kk;
        let refs: Vec<usize> = (n..n + k).collect();
        let mut r = rng::stream(seed, j as u64);
        let steps = (time * n as f64).round() as u64;
        for _ in 0..steps {
            let c = point.pick(r.gen::<f64>());
            let bonds = &by_color[c.index()];
            let b = &g.bonds[bonds[r.gen_range(0..bonds.len())]];
            st.measure_check(b.a, b.b, c);
        }
        lost_total += k - st.entropy(&refs)?;
    }
    let mean_lost = lost_total as f64 / trajectories as f64;
    Ok(SurvivalReport { sites: n, logicals: k, trajectories, time, mean_lost, loss_rate: mean_lost / (k as f64 * time) })
}
