//! Bloch Hamiltonians H(k) = iA(k) of the Majorana hopping problem.

use std::f64::consts::PI;

use kekule_core::Color;
use kekule_lattice::LatticeGraph;
use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::gauge::Gauge;
use crate::MajoranaError;

pub type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl Couplings {
    /// Non-negative couplings summing to one.
    pub fn normalized(jx: f64, jy: f64, jz: f64) -> Result<Self, MajoranaError> {
        let ok = [jx, jy, jz].iter().all(|&j| j >= 0.0) && (jx + jy + jz - 1.0).abs() <= 1e-12;
        if !ok {
            return Err(MajoranaError::Couplings(format!("({}, {}, {}) is not normalized", jx, jy, jz)));
        }
        Ok(Couplings { jx, jy, jz })
    }

    pub fn isotropic() -> Self {
        Couplings { jx: 1.0 / 3.0, jy: 1.0 / 3.0, jz: 1.0 / 3.0 }
    }

    /// The point with J_x = J_y on the normalized line.
    pub fn on_line(jz: f64) -> Self {
        let j = (1.0 - jz) / 2.0;
        Couplings { jx: j, jy: j, jz }
    }

    pub fn get(&self, c: Color) -> f64 {
        match c {
            Color::X => self.jx,
            Color::Y => self.jy,
            Color::Z => self.jz,
        }
    }
}

#[derive(Clone, Debug)]
struct Hop {
    i: usize,
    j: usize,
    /// Supercell translation from the cell of i to that of j.
    r: [i32; 3],
    color: Color,
    u: f64,
}

/// The hopping data of a gauge on one supercell: the graph's full torus is the unit of
/// translation, and bonds leaving it pick up Bloch phases.
#[derive(Clone, Debug)]
pub struct BlochModel {
    pub n: usize,
    /// Number of periodic directions.
    pub dim: usize,
    hops: Vec<Hop>,
    /// Sublattice of each site when the hopping graph is bipartite.
    sublattice: Option<Vec<bool>>,
}

impl BlochModel {
    pub fn new(g: &LatticeGraph, gauge: &Gauge) -> Self {
        let hops: Vec<Hop> = g
            .bonds
            .iter()
            .zip(&gauge.u)
            .map(|(b, &u)| {
                let c = g.site_cell(b.a);
                let mut r = [0; 3];
                for ax in 0..3 {
                    r[ax] = (c[ax] as i32 + b.offset[ax]).div_euclid(g.dims[ax] as i32);
                }
                Hop { i: b.a, j: b.b, r, color: b.color, u: u as f64 }
            })
            .collect();
        let sublattice = two_color(g.n(), &hops);
        BlochModel { n: g.n(), dim: g.dim, hops, sublattice }
    }

    pub fn is_bipartite(&self) -> bool {
        self.sublattice.is_some()
    }

    /// A(k) with A_ij = J u_ij e^{2πi k·R}; antihermitian.
    pub fn hopping(&self, j: &Couplings, k: [f64; 3]) -> DMatrix<C64> {
        let mut a = DMatrix::<C64>::zeros(self.n, self.n);
        for h in &self.hops {
            let t = j.get(h.color) * h.u;
            if t == 0.0 {
                continue;
            }
            let phase = 2.0 * PI * (k[0] * h.r[0] as f64 + k[1] * h.r[1] as f64 + k[2] * h.r[2] as f64);
            let v = C64::from_polar(t, phase);
            a[(h.i, h.j)] += v;
            a[(h.j, h.i)] -= v.conj();
        }
        a
    }

    /// H(k) = iA(k).
    pub fn hamiltonian(&self, j: &Couplings, k: [f64; 3]) -> DMatrix<C64> {
        self.hopping(j, k) * C64::new(0.0, 1.0)
    }

    /// Eigenvalues of H(k), ascending.
    pub fn spectrum(&self, j: &Couplings, k: [f64; 3]) -> Vec<f64> {
        let mut e: Vec<f64> = self.hamiltonian(j, k).symmetric_eigenvalues().iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// min_n |ε_n(k)|. On a bipartite graph this is the smallest singular value of the
    /// off-diagonal block, half the size of the full problem.
    pub fn min_abs(&self, j: &Couplings, k: [f64; 3]) -> f64 {
        match &self.sublattice {
            Some(side) => {
                let a = self.hopping(j, k);
                let rows: Vec<usize> = (0..self.n).filter(|&i| side[i]).collect();
                let cols: Vec<usize> = (0..self.n).filter(|&i| !side[i]).collect();
                if rows.len() != cols.len() {
                    return 0.0;
                }
                let m = a.select_rows(&rows).select_columns(&cols);
                m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
            }
            None => self.spectrum(j, k).iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min),
        }
    }
}

fn two_color(n: usize, hops: &[Hop]) -> Option<Vec<bool>> {
    let mut adj = vec![Vec::new(); n];
    for h in hops {
        adj[h.i].push(h.j);
        adj[h.j].push(h.i);
    }
    let mut side: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(true);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let sv = side[v].unwrap();
            for &w in &adj[v] {
                match side[w] {
                    None => {
                        side[w] = Some(!sv);
                        stack.push(w);
                    }
                    Some(sw) if sw == sv => return None,
                    _ => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.unwrap()).collect())
}
