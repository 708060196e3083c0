use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use kekule_core::meta::config_hash;
use kekule_core::{rng, Color};
use kekule_lattice::build_lattice;
use serde::{Deserialize, Serialize};

use crate::simplex::{simplex_grid, SimplexPoint};
use crate::trajectory::{steady_state_entropy, Estimate, TrajectoryConfig};
use crate::MonitoredError;

pub fn dims_for(name: &str, l: usize) -> Result<[usize; 3], MonitoredError> {
    let t = kekule_lattice::families::template(name)?;
    Ok(if t.dim == 2 { [l, l, 1] } else { [l, l, l] })
}

fn lattice_dim(name: &str) -> Result<usize, MonitoredError> {
    Ok(kekule_lattice::families::template(name)?.dim)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EtaEstimate {
    pub eta: f64,
    pub stderr: f64,
    pub small: Estimate,
    pub large: Estimate,
    pub l_small: usize,
    pub l_large: usize,
}

/// η = (S(L₂/2)/L₂^(d−1)) / (S(L₁/2)/L₁^(d−1)) for a d-dimensional family.
pub fn eta_from(small: Estimate, large: Estimate, l1: usize, l2: usize, dim: usize) -> Result<EtaEstimate, MonitoredError> {
    if small.mean == 0.0 {
        return Err(MonitoredError::ZeroEntropy(l1));
    }
    let scale = (l1 as f64 / l2 as f64).powi(dim as i32 - 1);
    let eta = large.mean / small.mean * scale;
    let rel = if large.mean == 0.0 { small.stderr / small.mean } else { ((large.stderr / large.mean).powi(2) + (small.stderr / small.mean).powi(2)).sqrt() };
    Ok(EtaEstimate { eta, stderr: eta * rel, small, large, l_small: l1, l_large: l2 })
}

pub fn two_size_ratio(name: &str, cfg: &TrajectoryConfig, l1: usize, l2: usize, stream: u64) -> Result<EtaEstimate, MonitoredError> {
    let dim = lattice_dim(name)?;
    let g1 = build_lattice(name, dims_for(name, l1)?)?;
    let s1 = steady_state_entropy(&g1, cfg, rng::mix(&[stream, l1 as u64]))?;
    if l1 == l2 {
        return eta_from(s1, s1, l1, l2, dim);
    }
    let g2 = build_lattice(name, dims_for(name, l2)?)?;
    let s2 = steady_state_entropy(&g2, cfg, rng::mix(&[stream, l2 as u64]))?;
    eta_from(s1, s2, l1, l2, dim)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapPoint {
    pub index: usize,
    pub point: SimplexPoint,
    pub eta: EtaEstimate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseMap {
    pub lattice: String,
    pub l_small: usize,
    pub l_large: usize,
    pub config: TrajectoryConfig,
    pub points: Vec<MapPoint>,
}

impl PhaseMap {
    pub const CSV_HEADER: &'static str = "px,py,pz,eta,stderr,nsamples,L1,L2";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            s.push_str(&csv_row(p));
        }
        s
    }
}

fn csv_row(p: &MapPoint) -> String {
    format!(
        "{:.6},{:.6},{:.6},{:.6},{:.6},{},{},{}\n",
        p.point.px, p.point.py, p.point.pz, p.eta.eta, p.eta.stderr, p.eta.small.samples, p.eta.l_small, p.eta.l_large
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepSpec {
    pub lattice: String,
    pub l_small: usize,
    pub l_large: usize,
    /// Grid resolution per simplex edge.
    pub resolution: usize,
    pub config: TrajectoryConfig,
}

/// η over the simplex grid. With `checkpoint`, each finished point is appended as a JSON line
/// and points already present are reused, so an interrupted sweep resumes where it stopped.
/// The first line holds the config hash; resuming under a different config is an error.
pub fn sweep_simplex(spec: &SweepSpec, checkpoint: Option<&Path>) -> Result<PhaseMap, MonitoredError> {
    let grid = if spec.resolution == 1 { vec![spec.config.point] } else { simplex_grid(spec.resolution) };
    points_map(spec, &grid, checkpoint)
}

#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    config_hash: String,
}

/// η at an explicit list of points, sharing the checkpoint logic of the grid sweep.
pub fn points_map(spec: &SweepSpec, grid: &[SimplexPoint], checkpoint: Option<&Path>) -> Result<PhaseMap, MonitoredError> {
    let hash = config_hash(&(spec, grid));
    let mut done: BTreeMap<usize, MapPoint> = BTreeMap::new();
    if let Some(path) = checkpoint {
        if path.exists() {
            let text = fs::read_to_string(path)?;
            let mut lines = text.lines().filter(|l| !l.trim().is_empty());
            if let Some(head) = lines.next() {
                let h: CheckpointHeader = serde_json::from_str(head).map_err(|e| MonitoredError::Checkpoint(e.to_string()))?;
                if h.config_hash != hash {
                    return Err(MonitoredError::Checkpoint(format!("config hash {} does not match checkpoint {}", hash, h.config_hash)));
                }
            }
            for line in lines {
                let p: MapPoint = serde_json::from_str(line).map_err(|e| MonitoredError::Checkpoint(e.to_string()))?;
                done.insert(p.index, p);
            }
        }
        if !path.exists() || fs::metadata(path)?.len() == 0 {
            let head = CheckpointHeader { config_hash: hash.clone() };
            fs::write(path, format!("{}\n", serde_json::to_string(&head).expect("serializable")))?;
        }
    }
    let mut out = Vec::with_capacity(grid.len());
    for (i, &pt) in grid.iter().enumerate() {
        if let Some(p) = done.remove(&i) {
            out.push(p);
            continue;
        }
        let cfg = TrajectoryConfig { point: pt, ..spec.config.clone() };
        let eta = two_size_ratio(&spec.lattice, &cfg, spec.l_small, spec.l_large, rng::mix(&[spec.config.seed, i as u64]))?;
        let mp = MapPoint { index: i, point: pt, eta };
        if let Some(path) = checkpoint {
            let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
            writeln!(f, "{}", serde_json::to_string(&mp).expect("serializable"))?;
        }
        out.push(mp);
    }
    Ok(PhaseMap { lattice: spec.lattice.clone(), l_small: spec.l_small, l_large: spec.l_large, config: spec.config.clone(), points: out })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeScan {
    pub absent: Color,
    pub fractions: Vec<f64>,
    pub map: PhaseMap,
    /// Fraction with the largest η.
    pub peak: f64,
}

pub fn edge_scan(spec: &SweepSpec, absent: Color, fractions: &[f64], checkpoint: Option<&Path>) -> Result<EdgeScan, MonitoredError> {
    let pts: Vec<SimplexPoint> = fractions.iter().map(|&f| SimplexPoint::on_edge(absent, f)).collect();
    let map = points_map(spec, &pts, checkpoint)?;
    let best = (0..fractions.len()).max_by(|&a, &b| map.points[a].eta.eta.total_cmp(&map.points[b].eta.eta)).unwrap_or(0);
    Ok(EdgeScan { absent, fractions: fractions.to_vec(), peak: fractions[best], map })
}
