use kekule_core::gf2::EchelonBasis;
use kekule_core::{BitRow, Color};
use kekule_lattice::operators::{check, isg_at, plaquette_operator};
use kekule_lattice::{logical_operators, LatticeGraph, LogicalSet};
use kekule_stabilizer::{Pauli, Tableau};
use rand::Rng;
use serde::Serialize;

use crate::schedule::Schedule;
use crate::FloquetError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measurement {
    pub cycle: usize,
    /// Zero-based position in the schedule.
    pub round: usize,
    pub bond: usize,
    pub outcome: i8,
}

/// Every outcome of a run, indexed by (cycle, round).
#[derive(Clone, Debug, Default, Serialize)]
pub struct Record {
    pub period: usize,
    pub entries: Vec<Measurement>,
    // start of each (cycle, round) block in `entries`
    #[serde(skip)]
    blocks: Vec<usize>,
}

impl Record {
    pub fn new(period: usize) -> Self {
        Record { period, entries: Vec::new(), blocks: Vec::new() }
    }

    fn begin_block(&mut self) {
        self.blocks.push(self.entries.len());
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn cycles(&self) -> usize {
        self.blocks.len() / self.period
    }

    /// Outcomes of one executed round, in measurement order.
    pub fn round(&self, cycle: usize, round: usize) -> Option<&[Measurement]> {
        let k = cycle * self.period + round;
        let start = *self.blocks.get(k)?;
        let end = self.blocks.get(k + 1).copied().unwrap_or(self.entries.len());
        Some(&self.entries[start..end])
    }

    /// One line per measurement: `cycle round bond outcome`, rounds numbered from 1.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.entries {
            s.push_str(&format!("{} {} {} {}\n", m.cycle, m.round + 1, m.bond, m.outcome));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LogicalInit {
    /// Line operators are stabilized.
    Z,
    /// Membrane operators are stabilized.
    X,
}

/// Logical representatives at the closing round label together with the tableau rows that carry
/// the encoded logicals.
#[derive(Clone, Debug)]
pub struct LogicalFrame {
    pub label: Color,
    pub init: LogicalInit,
    pub logicals: LogicalSet,
    pub rows: Vec<usize>,
}

impl LogicalFrame {
    pub fn k(&self) -> usize {
        self.logicals.lines.len()
    }
}

/// Initial state at the code instant `label`: label checks and plaquettes (plaquette signs from
/// `plaquette_signs`, +1 if None), completed by the lines or membranes with sign +1.
pub fn initial_state(
    g: &LatticeGraph,
    label: Color,
    init: LogicalInit,
    plaquette_signs: Option<&[i8]>,
) -> Result<(Tableau, LogicalFrame), FloquetError> {
    let n = g.n();
    let logicals = logical_operators(g, label)?;
    let mut basis = EchelonBasis::new(2 * n, 0);
    let mut gens = Vec::with_capacity(n);
    for b in g.bonds_of_color(label) {
        let c = check(g, b);
        if basis.insert(&c.symplectic()) {
            gens.push(c);
        }
    }
    for p in 0..g.plaquettes.len() {
        let mut w = plaquette_operator(g, p);
        if basis.insert(&w.symplectic()) {
            if let Some(s) = plaquette_signs {
                w = w.with_sign(s[p]);
            }
            gens.push(w);
        }
    }
    let first = gens.len();
    let reps = match init {
        LogicalInit::Z => &logicals.lines,
        LogicalInit::X => &logicals.membranes,
    };
    gens.extend(reps.iter().cloned());
    let mut t = Tableau::from_generators(n, gens)?;
    let rows: Vec<usize> = (first..n).collect();
    for &r in &rows {
        t.set_protected(r, true);
    }
    Ok((t, LogicalFrame { label, init, logicals, rows }))
}

/// Measures one round and appends its outcomes to the record.
pub fn run_round<R: Rng + ?Sized>(
    t: &mut Tableau,
    g: &LatticeGraph,
    s: &Schedule,
    cycle: usize,
    round: usize,
    record: &mut Record,
    rng: &mut R,
) -> Result<(), FloquetError> {
    record.begin_block();
    for &b in &s.rounds[round].bonds {
        let o = t.measure(&check(g, b), rng).map_err(|e| FloquetError::at(e, cycle, round, b))?;
        record.entries.push(Measurement { cycle, round, bond: b, outcome: o.value });
    }
    Ok(())
}

pub fn run_cycle<R: Rng + ?Sized>(
    t: &mut Tableau,
    g: &LatticeGraph,
    s: &Schedule,
    cycle: usize,
    record: &mut Record,
    rng: &mut R,
) -> Result<(), FloquetError> {
    for r in 0..s.period() {
        run_round(t, g, s, cycle, r, record, rng)?;
    }
    Ok(())
}

/// Reference stabilizer group ⟨label checks, plaquettes⟩ for ISG audits.
pub struct IsgReference {
    pub label: Color,
    basis: EchelonBasis,
}

impl IsgReference {
    pub fn new(g: &LatticeGraph, label: Color) -> Self {
        let n = g.n();
        let mut basis = EchelonBasis::new(2 * n, 0);
        for p in isg_at(g, label) {
            basis.insert(&p.symplectic());
        }
        IsgReference { label, basis }
    }

    pub fn rank(&self) -> usize {
        self.basis.dim()
    }

    pub fn contains(&self, p: &Pauli) -> bool {
        self.basis.contains(&p.symplectic())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsgAudit {
    /// Rank of the tableau stabilizers excluding logical rows.
    pub rank: usize,
    pub reference_rank: usize,
    pub matches: bool,
}

/// Compares the non-logical stabilizer rows with the reference group.
pub fn audit_isg(t: &Tableau, reference: &IsgReference) -> IsgAudit {
    let n = t.n();
    let mut own = EchelonBasis::new(2 * n, 0);
    let mut inside = true;
    for (i, s) in t.stabilizers().iter().enumerate() {
        if t.is_protected(i) {
            continue;
        }
        own.insert(&s.symplectic());
        if inside && !reference.contains(s) {
            inside = false;
        }
    }
    IsgAudit { rank: own.dim(), reference_rank: reference.rank(), matches: inside && own.dim() == reference.rank() }
}

/// Induced action on the logical rows: row i lists the coefficients of the current image of
/// representative i on (l_1..l_k, m_1..m_k), after dividing out the reference group.
pub fn logical_action(t: &Tableau, frame: &LogicalFrame, reference: &IsgReference) -> Result<Vec<BitRow>, FloquetError> {
    let k = frame.k();
    let ls = &frame.logicals;
    let mut out = Vec::with_capacity(k);
    for (i, &r) in frame.rows.iter().enumerate() {
        let img = &t.stabilizers()[r];
        let mut coeff = BitRow::zeros(2 * k);
        let mut rest = img.clone();
        for j in 0..k {
            if img.anticommutes(&ls.membranes[j]) {
                coeff.set(j, true);
                rest.mul_assign(&ls.lines[j]);
            }
            if img.anticommutes(&ls.lines[j]) {
                coeff.set(k + j, true);
                rest.mul_assign(&ls.membranes[j]);
            }
        }
        if !reference.contains(&rest) {
            return Err(FloquetError::Automorphism(format!("image of logical representative {} leaves the code space", i)));
        }
        out.push(coeff);
    }
    Ok(out)
}

/// Full 2k x 2k action: rows for l_1..l_k from a Z-initialized run, then m_1..m_k from an
/// X-initialized run.
pub fn automorphism(z_rows: &[BitRow], x_rows: &[BitRow]) -> Vec<BitRow> {
    z_rows.iter().chain(x_rows).cloned().collect()
}

pub fn is_identity(m: &[BitRow]) -> bool {
    m.iter().enumerate().all(|(i, r)| r.len() == m.len() && r.iter_ones().eq(std::iter::once(i)))
}

/// Outcome of a multi-cycle run with audits at every full-color round.
#[derive(Clone, Debug, Serialize)]
pub struct PreservationReport {
    pub cycles: usize,
    pub init: LogicalInit,
    pub k: usize,
    /// Rows of the logical action after each cycle.
    pub actions: Vec<Vec<Vec<u8>>>,
    pub identity_every_cycle: bool,
    pub isg_audits: usize,
    pub isg_failures: usize,
    pub min_rank: usize,
    pub max_rank: usize,
}

fn rows_u8(rows: &[BitRow]) -> Vec<Vec<u8>> {
    rows.iter().map(|r| (0..r.len()).map(|i| r.get(i) as u8).collect()).collect()
}

/// Runs `cycles` full cycles from the code instant of the closing color and records the logical
/// action after each. With `audit` the ISG is compared with ⟨checks, plaquettes⟩ after every
/// full-color round.
pub fn verify_logical_preservation<R: Rng + ?Sized>(
    g: &LatticeGraph,
    s: &Schedule,
    init: LogicalInit,
    cycles: usize,
    audit: bool,
    rng: &mut R,
) -> Result<PreservationReport, FloquetError> {
    let label = s.closing_color();
    let (mut t, frame) = initial_state(g, label, init, None)?;
    let refs: Vec<IsgReference> = if audit { Color::ALL.iter().map(|&c| IsgReference::new(g, c)).collect() } else { Vec::new() };
    let closing = IsgReference::new(g, label);
    let mut record = Record::new(s.period());
    let mut actions = Vec::new();
    let mut identity = true;
    let (mut audits, mut failures, mut min_rank, mut max_rank) = (0, 0, usize::MAX, 0);
    for c in 0..cycles {
        for r in 0..s.period() {
            run_round(&mut t, g, s, c, r, &mut record, rng)?;
            let lab = s.rounds[r].label;
            if audit && lab.is_full() {
                let a = audit_isg(&t, &refs[lab.color().index()]);
                audits += 1;
                failures += (!a.matches) as usize;
                min_rank = min_rank.min(a.rank);
                max_rank = max_rank.max(a.rank);
            }
        }
        let rows = logical_action(&t, &frame, &closing)?;
        let k = frame.k();
        let expect_offset = match init {
            LogicalInit::Z => 0,
            LogicalInit::X => k,
        };
        identity &= rows.iter().enumerate().all(|(i, r)| r.iter_ones().eq(std::iter::once(i + expect_offset)));
        actions.push(rows_u8(&rows));
    }
    if !audit {
        min_rank = 0;
    }
    Ok(PreservationReport {
        cycles,
        init,
        k: frame.k(),
        actions,
        identity_every_cycle: identity,
        isg_audits: audits,
        isg_failures: failures,
        min_rank,
        max_rank,
    })
}
