//! Bulk gap Δ = min_{k,n} |ε_n(k)| on uniform k-grids and scans over the coupling simplex.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{BlochModel, Couplings};
use crate::MajoranaError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub delta: f64,
    /// Minimizing k in reduced coordinates of the supercell reciprocal lattice.
    pub argmin: [f64; 3],
    pub grid: usize,
}

impl GapResult {
    pub fn is_gapless(&self, threshold: f64) -> bool {
        self.delta < threshold
    }
}

pub const DEFAULT_THRESHOLD: f64 = 5e-3;
pub const DEFAULT_GRID: usize = 48;

/// k-points i/res along each periodic axis. Since |ε(−k)| = |ε(k)|, only one of each ±k pair
/// is kept.
pub fn kgrid(dim: usize, res: usize) -> Vec<[usize; 3]> {
    let nz = if dim == 3 { res } else { 1 };
    let mut out = Vec::new();
    for a in 0..res {
        for b in 0..res {
            for c in 0..nz {
                let m = [(res - a) % res, (res - b) % res, (nz - c) % nz];
                if (a, b, c) <= (m[0], m[1], m[2]) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn gap(model: &BlochModel, j: &Couplings, res: usize) -> Result<GapResult, MajoranaError> {
    if res < 1 {
        return Err(MajoranaError::Grid(res));
    }
    let r = res as f64;
    let best = kgrid(model.dim, res)
        .into_par_iter()
        .map(|q| {
            let k = [q[0] as f64 / r, q[1] as f64 / r, q[2] as f64 / r];
            (model.min_abs(j, k), q)
        })
        .reduce(|| (f64::INFINITY, [usize::MAX; 3]), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let q = best.1;
    Ok(GapResult { delta: best.0, argmin: [q[0] as f64 / r, q[1] as f64 / r, q[2] as f64 / r], grid: res })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GapPoint {
    pub j: Couplings,
    pub gap: GapResult,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GapMap {
    pub threshold: f64,
    pub points: Vec<GapPoint>,
}

impl GapMap {
    pub const CSV_HEADER: &'static str = "Jx,Jy,Jz,Delta,kx,ky,kz,grid";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            let (j, g) = (p.j, p.gap);
            s.push_str(&format!(
                "{:.6},{:.6},{:.6},{:.8e},{:.6},{:.6},{:.6},{}\n",
                j.jx, j.jy, j.jz, g.delta, g.argmin[0], g.argmin[1], g.argmin[2], g.grid
            ));
        }
        s
    }

    pub fn gapless(&self) -> Vec<Couplings> {
        self.points.iter().filter(|p| p.gap.is_gapless(self.threshold)).map(|p| p.j).collect()
    }
}

/// Couplings (a, b, c) / res with a + b + c = res.
pub fn coupling_grid(res: usize) -> Vec<Couplings> {
    let mut v = Vec::new();
    let r = res.max(1) as f64;
    for a in 0..=res {
        for b in 0..=res - a {
            let c = res - a - b;
            v.push(Couplings { jx: a as f64 / r, jy: b as f64 / r, jz: c as f64 / r });
        }
    }
    v
}

pub fn gap_map(model: &BlochModel, js: &[Couplings], kres: usize, threshold: f64) -> Result<GapMap, MajoranaError> {
    let points = js.iter().map(|j| Ok(GapPoint { j: *j, gap: gap(model, j, kres)? })).collect::<Result<_, MajoranaError>>()?;
    Ok(GapMap { threshold, points })
}

pub fn phase_diagram(model: &BlochModel, res: usize, kres: usize, threshold: f64) -> Result<GapMap, MajoranaError> {
    gap_map(model, &coupling_grid(res), kres, threshold)
}

/// Gapless interval of J_z on the line J_x = J_y containing the isotropic point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
    /// Half-width of the bracket left around each endpoint.
    pub tolerance: f64,
    pub grid: usize,
    pub threshold: f64,
}

/// Walks out from J_z = 1/3 in steps of `step`, then bisects each crossing down to `tol`.
/// Endpoints reaching J_z = 0 or 1 are reported there. None when the isotropic point is gapped.
pub fn gapless_window(model: &BlochModel, kres: usize, threshold: f64, step: f64, tol: f64) -> Result<Option<Window>, MajoranaError> {
    let gapless = |jz: f64| -> Result<bool, MajoranaError> { Ok(gap(model, &Couplings::on_line(jz), kres)?.is_gapless(threshold)) };
    let start = 1.0 / 3.0;
    if !gapless(start)? {
        return Ok(None);
    }
    let mut ends = [0.0; 2];
    for (slot, dir) in [(0usize, -1.0f64), (1, 1.0)] {
        let mut inside = start;
        let mut outside = None;
        loop {
            let next = (inside + dir * step).clamp(0.0, 1.0);
            if next == inside {
                break;
            }
            if gapless(next)? {
                inside = next;
            } else {
                outside = Some(next);
                break;
            }
        }
        ends[slot] = match outside {
            None => inside,
            Some(mut out) => {
                let mut inn = inside;
                while (out - inn).abs() > 2.0 * tol {
                    let mid = 0.5 * (out + inn);
                    if gapless(mid)? {
                        inn = mid;
                    } else {
                        out = mid;
                    }
                }
                0.5 * (out + inn)
            }
        };
    }
    Ok(Some(Window { lower: ends[0], upper: ends[1], tolerance: tol, grid: kres, threshold }))
}
