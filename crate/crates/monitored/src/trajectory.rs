use kekule_core::gf2::EchelonBasis;
use kekule_core::{rng, Color};
use kekule_lattice::operators::{loop_state_generators, zz_and_plaquettes};
use kekule_lattice::{logical_operators, LatticeGraph};
use kekule_stabilizer::{GeneratorSet, Pauli};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::simplex::SimplexPoint;
use crate::MonitoredError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// z checks, plaquettes, and the line logicals (or cycle-basis loops where no plaquette
    /// template exists).
    CodeLines,
    /// z checks, plaquettes and the membrane logicals at label z.
    CodeMembranes,
    /// Product eigenstate of the single-site Pauli of the given color.
    Product(Color),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub point: SimplexPoint,
    /// Equilibration time in units of n measurements.
    pub t_eq: f64,
    pub snapshots: usize,
    pub spacing: f64,
    pub trajectories: usize,
    pub seed: u64,
    pub init: InitialState,
}

impl Default for TrajectoryConfig {
    fn default() -> Self {
        TrajectoryConfig {
            point: SimplexPoint::center(),
            t_eq: 20.0,
            snapshots: 8,
            spacing: 1.0,
            trajectories: 10,
            seed: 1,
            init: InitialState::CodeLines,
        }
    }
}

pub fn initial_generators(g: &LatticeGraph, init: InitialState) -> Result<Vec<Pauli>, MonitoredError> {
    let n = g.n();
    match init {
        InitialState::Product(c) => Ok((0..n).map(|q| Pauli::single(n, q, c)).collect()),
        InitialState::CodeLines => Ok(loop_state_generators(g)?),
        InitialState::CodeMembranes => {
            let ls = logical_operators(g, Color::Z)?;
            let mut basis = EchelonBasis::new(2 * n, 0);
            let mut out = Vec::with_capacity(n);
            for p in zz_and_plaquettes(g) {
                if basis.insert(&p.symplectic()) {
                    out.push(p);
                }
            }
            out.extend(ls.membranes);
            Ok(out)
        }
    }
}

/// Measurement-only evolution of one trajectory.
pub struct Trajectory<'g> {
    pub g: &'g LatticeGraph,
    pub state: GeneratorSet,
    by_color: [Vec<usize>; 3],
    point: SimplexPoint,
    rng: rng::Rng,
    pub steps: u64,
}

impl<'g> Trajectory<'g> {
    pub fn new(g: &'g LatticeGraph, point: SimplexPoint, init: InitialState, seed: u64, id: u64) -> Result<Self, MonitoredError> {
        let state = GeneratorSet::from_generators(g.n(), &initial_generators(g, init)?)?;
        Ok(Self::from_state(g, state, point, seed, id))
    }

    pub fn from_state(g: &'g LatticeGraph, state: GeneratorSet, point: SimplexPoint, seed: u64, id: u64) -> Self {
        let by_color = [g.bonds_of_color(Color::X), g.bonds_of_color(Color::Y), g.bonds_of_color(Color::Z)];
        Trajectory { g, state, by_color, point, rng: rng::stream(seed, id), steps: 0 }
    }

    /// One elementary measurement: a color drawn from the point, then a uniform bond of it.
    pub fn step(&mut self) {
        let c = self.point.pick(self.rng.gen::<f64>());
        let bonds = &self.by_color[c.index()];
        if bonds.is_empty() {
            return;
        }
        let b = &self.g.bonds[bonds[self.rng.gen_range(0..bonds.len())]];
        self.state.measure_check(b.a, b.b, c);
        self.steps += 1;
    }

    /// Advances by `t` time units of n measurements each.
    pub fn advance(&mut self, t: f64) {
        let k = (t * self.g.n() as f64).round() as u64;
        for _ in 0..k {
            self.step();
        }
    }

    /// Entropy of the half system: cells whose first coordinate is below L1 / 2.
    pub fn half_entropy(&self) -> Result<usize, MonitoredError> {
        Ok(self.state.entropy_prefix(half_cut(self.g))?)
    }
}

pub fn half_cut(g: &LatticeGraph) -> usize {
    (g.dims[0] / 2) * g.dims[1] * g.dims[2] * g.sites_per_cell
}

/// Final state after `t_max` time units.
pub fn run_trajectory(g: &LatticeGraph, point: SimplexPoint, init: InitialState, t_max: f64, seed: u64, id: u64) -> Result<GeneratorSet, MonitoredError> {
    let mut t = Trajectory::new(g, point, init, seed, id)?;
    t.advance(t_max);
    Ok(t.state)
}

/// Half-cut entropies at the snapshot times of one trajectory.
pub fn snapshot_entropies(g: &LatticeGraph, cfg: &TrajectoryConfig, id: u64) -> Result<Vec<usize>, MonitoredError> {
    let mut t = Trajectory::new(g, cfg.point, cfg.init, cfg.seed, id)?;
    t.advance(cfg.t_eq);
    let mut out = Vec::with_capacity(cfg.snapshots);
    for k in 0..cfg.snapshots {
        if k > 0 {
            t.advance(cfg.spacing);
        }
        out.push(t.half_entropy()?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// Mean and standard error over per-trajectory means.
pub fn estimate(values: &[f64]) -> Estimate {
    let k = values.len();
    let mean = values.iter().sum::<f64>() / k as f64;
    let stderr = if k > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
        (var / k as f64).sqrt()
    } else {
        0.0
    };
    Estimate { mean, stderr, samples: k }
}

/// Half-cut entropy averaged over snapshots within each trajectory and then over trajectories.
/// `stream` separates independent uses of the same seed.
pub fn steady_state_entropy(g: &LatticeGraph, cfg: &TrajectoryConfig, stream: u64) -> Result<Estimate, MonitoredError> {
    use rayon::prelude::*;
    let per: Result<Vec<f64>, MonitoredError> = (0..cfg.trajectories as u64)
        .into_par_iter()
        .map(|j| {
            let s = snapshot_entropies(g, cfg, rng::mix(&[stream, j]))?;
            Ok(s.iter().sum::<usize>() as f64 / s.len() as f64)
        })
        .collect();
    Ok(estimate(&per?))
}
