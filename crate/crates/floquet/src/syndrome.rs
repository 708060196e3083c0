//! Plaquette syndromes from the measurement record.
//!
//! A window is a run of consecutive record positions: position 0 is the last round of the
//! previous cycle and positions 1..=P are the rounds of the current one. A plaquette is read
//! out directly in a window when its operator is a product of checks from that window whose
//! running partial product commutes with every later round of the window; the check subset is
//! found by GF(2) elimination. Plaquettes without such a window are inferred from volume
//! constraints.

use std::collections::{BTreeSet, HashMap};

use kekule_core::{gf2, BitRow, Color};
use kekule_lattice::operators::{check, plaquette_operator};
use kekule_lattice::LatticeGraph;
use kekule_stabilizer::{Pauli, Tableau};
use serde::Serialize;

use crate::protocol::Record;
use crate::schedule::Schedule;
use crate::FloquetError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowFormula {
    /// Inclusive range of record positions.
    pub first: usize,
    pub last: usize,
    /// (position, bond) pairs whose outcomes multiply to the syndrome, up to `sign`.
    pub terms: Vec<(usize, usize)>,
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Direct,
    VolumeInferred,
}

#[derive(Clone, Debug, Serialize)]
pub struct Syndrome {
    pub plaquette: usize,
    pub kind: String,
    pub value: i8,
    pub provenance: Provenance,
    pub window: Option<(usize, usize)>,
    pub volume: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RedundancyCheck {
    pub volume: usize,
    pub name: String,
    /// Signed product of the directly extracted member values; +1 when consistent.
    pub product: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyndromeRecord {
    pub cycle: usize,
    pub syndromes: Vec<Option<Syndrome>>,
    pub redundancy: Vec<RedundancyCheck>,
}

impl SyndromeRecord {
    pub fn undetermined(&self) -> Vec<usize> {
        (0..self.syndromes.len()).filter(|&p| self.syndromes[p].is_none()).collect()
    }

    pub fn count(&self, prov: Provenance) -> usize {
        self.syndromes.iter().flatten().filter(|s| s.provenance == prov).count()
    }

    /// One line per determined plaquette: `plaquette_id type value provenance`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in self.syndromes.iter().flatten() {
            let prov = match e.provenance {
                Provenance::Direct => "direct",
                Provenance::VolumeInferred => "volume",
            };
            s.push_str(&format!("{} {} {} {}\n", e.plaquette, e.kind, e.value, prov));
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExtractorOptions {
    /// Longest window searched, in rounds.
    pub max_window: usize,
    /// Whether windows may start in the previous cycle's last round.
    pub use_previous: bool,
    /// Windows `(first, last)` a plaquette kind may be read from; any window when None.
    pub window_filter: Option<fn(&str, usize, usize) -> bool>,
}

impl Default for ExtractorOptions {
    fn default() -> Self {
        ExtractorOptions { max_window: 4, use_previous: true, window_filter: None }
    }
}

impl ExtractorOptions {
    /// Windows restricted to the readout pattern of the 10-round cycle.
    pub fn ten_round() -> Self {
        ExtractorOptions { window_filter: Some(ten_round_windows), ..Default::default() }
    }
}

/// p2 from rounds 5-8, p4 and p6 from rounds 3-5 or 8-10; other kinds anywhere. Plaquettes with
/// no such window are left to volume inference.
pub fn ten_round_windows(kind: &str, first: usize, last: usize) -> bool {
    let inside = |a: usize, b: usize| first >= a && last <= b;
    match kind {
        "p2" => inside(5, 8),
        "p4" | "p6" => inside(3, 5) || inside(8, 10),
        _ => true,
    }
}

/// Readout formulas for every plaquette of a lattice under a fixed schedule.
#[derive(Clone, Debug)]
pub struct SyndromeExtractor {
    pub period: usize,
    pub formulas: Vec<Option<WindowFormula>>,
    pub volume_signs: Vec<i8>,
    kinds: Vec<String>,
}

fn schedule_round(period: usize, pos: usize) -> usize {
    if pos == 0 {
        period - 1
    } else {
        pos - 1
    }
}

fn torus_dist(a: [usize; 3], b: [usize; 3], dims: [usize; 3]) -> usize {
    (0..3)
        .map(|i| {
            let d = a[i].abs_diff(b[i]);
            d.min(dims[i] - d)
        })
        .max()
        .unwrap()
}

/// Checks from rounds `first..=last` (record positions) that multiply to `target` under the
/// running-commutation rule, restricted to bonds with both ends in `local` sites.
pub fn solve_window(g: &LatticeGraph, s: &Schedule, first: usize, last: usize, target: &Pauli, local: &[bool]) -> Option<Vec<(usize, usize)>> {
    let p = s.period();
    let mut vars: Vec<(usize, usize)> = Vec::new();
    for pos in first..=last {
        for &b in &s.rounds[schedule_round(p, pos)].bonds {
            let bd = &g.bonds[b];
            if local[bd.a] && local[bd.b] {
                vars.push((pos, b));
            }
        }
    }
    let nv = vars.len();
    let mut touched: BTreeSet<usize> = target.support().into_iter().collect();
    let mut by_site: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &(_, b)) in vars.iter().enumerate() {
        let bd = &g.bonds[b];
        for q in [bd.a, bd.b] {
            touched.insert(q);
            by_site.entry(q).or_default().push(i);
        }
    }
    if target.support().iter().any(|q| !local[*q]) {
        return None;
    }
    let mut eqs = Vec::new();
    let mut rhs = Vec::new();
    // the product must reproduce the target's x and z bits on every touched site
    for &q in &touched {
        let mut ex = BitRow::zeros(nv);
        let mut ez = BitRow::zeros(nv);
        for &i in by_site.get(&q).map(|v| v.as_slice()).unwrap_or(&[]) {
            let c = g.bonds[vars[i].1].color;
            let (x, z) = bits(c);
            if x {
                ex.flip(i);
            }
            if z {
                ez.flip(i);
            }
        }
        eqs.push(ex);
        rhs.push(target.x.get(q));
        eqs.push(ez);
        rhs.push(target.z.get(q));
    }
    // running products must commute with the next round
    for pos in first..last {
        let next = &s.rounds[schedule_round(p, pos + 1)];
        let color = next.label.color();
        for &b in &next.bonds {
            let bd = &g.bonds[b];
            let mut row = BitRow::zeros(nv);
            for q in [bd.a, bd.b] {
                for &i in by_site.get(&q).map(|v| v.as_slice()).unwrap_or(&[]) {
                    let (vp, vb) = vars[i];
                    if vp <= pos && g.bonds[vb].color != color {
                        row.flip(i);
                    }
                }
            }
            if !row.is_zero() {
                eqs.push(row);
                rhs.push(false);
            }
        }
    }
    let x = gf2::solve_system(nv, &eqs, &rhs)?;
    Some(x.iter_ones().map(|i| vars[i]).collect())
}

fn bits(c: Color) -> (bool, bool) {
    match c {
        Color::X => (true, false),
        Color::Y => (true, true),
        Color::Z => (false, true),
    }
}

/// Product of the checks in `terms` in record order; equals `sign · target` when valid.
fn formula_sign(g: &LatticeGraph, terms: &[(usize, usize)], target: &Pauli) -> Option<i8> {
    let mut acc = Pauli::identity(g.n());
    for &(_, b) in terms {
        acc.mul_assign(&check(g, b));
    }
    if acc.x != target.x || acc.z != target.z {
        return None;
    }
    acc.sign().map(|s| s * target.sign().unwrap())
}

impl SyndromeExtractor {
    pub fn new(g: &LatticeGraph, s: &Schedule, opts: ExtractorOptions) -> Result<Self, FloquetError> {
        let p = s.period();
        let cells = g.num_cells();
        let npt = g.plaquettes.len() / cells;
        let nbt = g.bonds.len() / cells;
        let reps: Vec<[usize; 3]> = if g.parity_colors { vec![[0, 0, 0], [1, 0, 0]] } else { vec![[0, 0, 0]] };
        let first_pos = if opts.use_previous { 0 } else { 1 };
        // template formulas per (representative cell, template plaquette)
        let mut template: HashMap<(usize, usize), Option<WindowFormula>> = HashMap::new();
        for (ri, &rep) in reps.iter().enumerate() {
            for tp in 0..npt {
                let pid = g.cell_index(rep) * npt + tp;
                let pl = &g.plaquettes[pid];
                let target = plaquette_operator(g, pid);
                let vcells: Vec<[usize; 3]> = pl.sites.iter().map(|&q| g.site_cell(q)).collect();
                let local: Vec<bool> = (0..g.n()).map(|q| vcells.iter().any(|&c| torus_dist(c, g.site_cell(q), g.dims) <= 1)).collect();
                let mut found = None;
                'search: for len in 1..=opts.max_window.min(p + 1 - first_pos) {
                    for first in first_pos..=(p + 1 - len) {
                        let last = first + len - 1;
                        if opts.window_filter.is_some_and(|f| !f(&pl.kind, first, last)) {
                            continue;
                        }
                        if let Some(terms) = solve_window(g, s, first, last, &target, &local) {
                            let sign = formula_sign(g, &terms, &target)
                                .ok_or_else(|| FloquetError::Automorphism(format!("window product for plaquette {} is inconsistent", pid)))?;
                            found = Some(WindowFormula { first, last, terms, sign });
                            break 'search;
                        }
                    }
                }
                template.insert((ri, tp), found);
            }
        }
        let mut formulas = Vec::with_capacity(g.plaquettes.len());
        for pid in 0..g.plaquettes.len() {
            let cell = g.cell_coords(pid / npt);
            let tp = pid % npt;
            let ri = if g.parity_colors { g.parity(cell) } else { 0 };
            let rep = reps[ri];
            let f = match &template[&(ri, tp)] {
                None => None,
                Some(f) => {
                    let shift = |c: [usize; 3]| -> [usize; 3] {
                        let mut o = [0; 3];
                        for i in 0..3 {
                            o[i] = (c[i] + cell[i] + g.dims[i] - rep[i]) % g.dims[i];
                        }
                        o
                    };
                    let mut terms: Vec<(usize, usize)> = f
                        .terms
                        .iter()
                        .map(|&(pos, b)| {
                            let cb = g.cell_coords(b / nbt);
                            (pos, g.cell_index(shift(cb)) * nbt + b % nbt)
                        })
                        .collect();
                    terms.sort_unstable();
                    let target = plaquette_operator(g, pid);
                    let sign = formula_sign(g, &terms, &target)
                        .ok_or_else(|| FloquetError::Automorphism(format!("translated formula fails for plaquette {}", pid)))?;
                    Some(WindowFormula { first: f.first, last: f.last, terms, sign })
                }
            };
            formulas.push(f);
        }
        let volume_signs = g
            .volumes
            .iter()
            .map(|v| {
                let mut acc = Pauli::identity(g.n());
                for &p in &v.plaquettes {
                    acc.mul_assign(&plaquette_operator(g, p));
                }
                debug_assert!(acc.is_identity());
                acc.sign().unwrap_or(1)
            })
            .collect();
        Ok(SyndromeExtractor { period: p, formulas, volume_signs, kinds: g.plaquettes.iter().map(|p| p.kind.clone()).collect() })
    }

    pub fn uses_previous_cycle(&self) -> bool {
        self.formulas.iter().flatten().any(|f| f.first == 0)
    }

    /// Syndromes of `cycle`, read from that cycle and the last round of the one before.
    pub fn extract(&self, g: &LatticeGraph, record: &Record, cycle: usize) -> Result<SyndromeRecord, FloquetError> {
        if record.round(cycle, self.period - 1).is_none() {
            return Err(FloquetError::IncompleteRecord(format!("cycle {} is not complete", cycle)));
        }
        if cycle == 0 && self.uses_previous_cycle() {
            return Err(FloquetError::IncompleteRecord("windows reach into the cycle before the first".into()));
        }
        let outcome = |pos: usize, b: usize| -> i8 {
            let (c, r) = if pos == 0 { (cycle - 1, self.period - 1) } else { (cycle, pos - 1) };
            let ms = record.round(c, r).unwrap();
            let i = ms.binary_search_by_key(&b, |m| m.bond).expect("bond in round");
            ms[i].outcome
        };
        let mut syn: Vec<Option<Syndrome>> = self
            .formulas
            .iter()
            .enumerate()
            .map(|(pid, f)| {
                f.as_ref().map(|f| Syndrome {
                    plaquette: pid,
                    kind: self.kinds[pid].clone(),
                    value: f.terms.iter().fold(f.sign, |acc, &(pos, b)| acc * outcome(pos, b)),
                    provenance: Provenance::Direct,
                    window: Some((f.first, f.last)),
                    volume: None,
                })
            })
            .collect();
        let mut redundancy = Vec::new();
        for (vi, v) in g.volumes.iter().enumerate() {
            if v.plaquettes.iter().all(|&p| syn[p].is_some()) {
                let product = v.plaquettes.iter().fold(self.volume_signs[vi], |acc, &p| acc * syn[p].as_ref().unwrap().value);
                redundancy.push(RedundancyCheck { volume: vi, name: v.name.clone(), product });
            }
        }
        loop {
            let mut progress = false;
            for (vi, v) in g.volumes.iter().enumerate() {
                let unknown: Vec<usize> = v.plaquettes.iter().copied().filter(|&p| syn[p].is_none()).collect();
                if unknown.len() != 1 {
                    continue;
                }
                let u = unknown[0];
                let value = v.plaquettes.iter().filter(|&&p| p != u).fold(self.volume_signs[vi], |acc, &p| acc * syn[p].as_ref().unwrap().value);
                syn[u] = Some(Syndrome {
                    plaquette: u,
                    kind: self.kinds[u].clone(),
                    value,
                    provenance: Provenance::VolumeInferred,
                    window: None,
                    volume: Some(vi),
                });
                progress = true;
            }
            if !progress {
                break;
            }
        }
        Ok(SyndromeRecord { cycle, syndromes: syn, redundancy })
    }
}

/// Plaquette eigenvalues held by the state, for comparison with extracted values.
pub fn true_syndromes(g: &LatticeGraph, t: &Tableau) -> Result<Vec<Option<i8>>, FloquetError> {
    (0..g.plaquettes.len()).map(|p| Ok(t.membership(&plaquette_operator(g, p))?)).collect()
}
