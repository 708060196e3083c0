use kekule_core::gf2;
use kekule_core::BitRow;
use rand::Rng;

use crate::{EngineError, Pauli};

/// Result of a projective measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub value: i8,
    pub deterministic: bool,
}

/// Stabilizer state on `n` qubits with destabilizer bookkeeping.
///
/// Stabilizer rows may be marked protected. A protected row stands for an encoded logical
/// operator: it is never chosen as a measurement pivot, and any measurement that would read it
/// out is reported as [`EngineError::LogicalCollapse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    stab: Vec<Pauli>,
    destab: Vec<Pauli>,
    protected: Vec<bool>,
}

impl Tableau {
    /// The all-zero computational basis state.
    pub fn zero_state(n: usize) -> Self {
        let stab = (0..n).map(|q| Pauli::single(n, q, kekule_core::Color::Z)).collect();
        let destab = (0..n).map(|q| Pauli::single(n, q, kekule_core::Color::X)).collect();
        Tableau { n, stab, destab, protected: vec![false; n] }
    }

    /// State stabilized by exactly `gens` (each with its stored sign). The generators must be
    /// Hermitian, pairwise commuting, independent and `n` in number.
    pub fn from_generators(n: usize, gens: Vec<Pauli>) -> Result<Self, EngineError> {
        if gens.len() != n {
            return Err(EngineError::InvalidGenerators(format!("{} generators for {} qubits", gens.len(), n)));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.n() != n {
                return Err(EngineError::SizeMismatch(g.n(), n));
            }
            if !g.is_hermitian() {
                return Err(EngineError::NonHermitian);
            }
            for h in &gens[..i] {
                if g.anticommutes(h) {
                    return Err(EngineError::InvalidGenerators(format!("generators {} and others anticommute", i)));
                }
            }
        }
        // rows c_j = (z_j | x_j) so that v·c_j is the symplectic form of v with generator j
        let mut rows: Vec<BitRow> = gens
            .iter()
            .map(|g| {
                let mut r = BitRow::zeros(2 * n);
                for q in g.z.iter_ones() {
                    r.set(q, true);
                }
                for q in g.x.iter_ones() {
                    r.set(n + q, true);
                }
                r
            })
            .collect();
        let mut tags: Vec<BitRow> = (0..n).map(|i| BitRow::from_indices(n, [i])).collect();
        let mut pivots = Vec::with_capacity(n);
        let mut r = 0;
        for c in 0..2 * n {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, p);
            tags.swap(r, p);
            let (pr, pt) = (rows[r].clone(), tags[r].clone());
            for i in 0..n {
                if i != r && rows[i].get(c) {
                    rows[i].xor_assign(&pr);
                    tags[i].xor_assign(&pt);
                }
            }
            pivots.push(c);
            r += 1;
        }
        if r < n {
            return Err(EngineError::InvalidGenerators(format!("generators have rank {} < {}", r, n)));
        }
        let mut destab: Vec<Pauli> = (0..n)
            .map(|i| {
                let mut v = BitRow::zeros(2 * n);
                for (k, &pc) in pivots.iter().enumerate() {
                    if tags[k].get(i) {
                        v.set(pc, true);
                    }
                }
                Pauli::from_symplectic(&v)
            })
            .collect();
        for i in 0..n {
            for j in 0..i {
                if destab[i].anticommutes(&destab[j]) {
                    let s = gens[j].clone();
                    destab[i].mul_assign(&s);
                }
            }
        }
        Ok(Tableau { n, stab: gens, destab, protected: vec![false; n] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[Pauli] {
        &self.stab
    }

    pub fn destabilizers(&self) -> &[Pauli] {
        &self.destab
    }

    pub fn set_protected(&mut self, i: usize, v: bool) {
        self.protected[i] = v;
    }

    pub fn protected_rows(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.protected[i]).collect()
    }

    pub fn is_protected(&self, i: usize) -> bool {
        self.protected[i]
    }

    fn check_operator(&self, p: &Pauli) -> Result<(), EngineError> {
        if p.n() != self.n {
            return Err(EngineError::SizeMismatch(p.n(), self.n));
        }
        if !p.is_hermitian() {
            return Err(EngineError::NonHermitian);
        }
        Ok(())
    }

    /// If `p` commutes with every stabilizer, returns its eigenvalue together with the stabilizer
    /// rows whose product equals `±p`.
    pub fn express(&self, p: &Pauli) -> Option<(i8, Vec<usize>)> {
        if self.stab.iter().any(|s| s.anticommutes(p)) {
            return None;
        }
        let mut acc = Pauli::identity(self.n);
        let mut used = Vec::new();
        for i in 0..self.n {
            if self.destab[i].anticommutes(p) {
                acc.mul_assign(&self.stab[i]);
                used.push(i);
            }
        }
        debug_assert!(acc.x == p.x && acc.z == p.z);
        let s_acc = acc.sign().expect("product of commuting Hermitian stabilizers");
        let s_p = p.sign().expect("hermitian");
        Some((s_acc * s_p, used))
    }

    /// Eigenvalue of `p` if `±p` lies in the stabilizer group.
    pub fn membership(&self, p: &Pauli) -> Result<Option<i8>, EngineError> {
        self.check_operator(p)?;
        Ok(self.express(p).map(|(s, _)| s))
    }

    /// Projective measurement of the Hermitian operator `p`.
    pub fn measure<R: Rng + ?Sized>(&mut self, p: &Pauli, rng: &mut R) -> Result<Outcome, EngineError> {
        self.measure_inner(p, || rng.gen::<bool>())
    }

    /// Measurement with the random branch fixed to `forced` (for oracle comparisons).
    pub fn measure_forced(&mut self, p: &Pauli, forced: i8) -> Result<Outcome, EngineError> {
        self.measure_inner(p, || forced < 0)
    }

    fn measure_inner(&mut self, p: &Pauli, mut coin: impl FnMut() -> bool) -> Result<Outcome, EngineError> {
        self.check_operator(p)?;
        let anti: Vec<usize> = (0..self.n).filter(|&i| self.stab[i].anticommutes(p)).collect();
        if anti.is_empty() {
            let (value, used) = self.express(p).expect("commutes with all stabilizers");
            if used.iter().any(|&i| self.protected[i]) {
                return Err(EngineError::LogicalCollapse(format!("{} equals a logical operator up to stabilizers", short(p))));
            }
            return Ok(Outcome { value, deterministic: true });
        }
        let Some(&piv) = anti.iter().find(|&&i| !self.protected[i]) else {
            return Err(EngineError::LogicalCollapse(format!("{} anticommutes only with logical rows", short(p))));
        };
        let sp = self.stab[piv].clone();
        for &i in &anti {
            if i != piv {
                self.stab[i].mul_assign(&sp);
            }
        }
        for i in 0..self.n {
            if i != piv && self.destab[i].anticommutes(p) {
                self.destab[i].mul_assign(&sp);
            }
        }
        self.destab[piv] = sp;
        let value = if coin() { -1 } else { 1 };
        self.stab[piv] = p.clone().with_sign(p.sign().unwrap() * value);
        Ok(Outcome { value, deterministic: false })
    }

    /// Entanglement entropy of `region` in bits.
    pub fn entropy(&self, region: &[usize]) -> Result<usize, EngineError> {
        if region.is_empty() || region.len() >= self.n {
            return Err(EngineError::BadRegion);
        }
        let mut cols: Vec<usize> = region.to_vec();
        cols.sort_unstable();
        cols.dedup();
        if cols.len() != region.len() || *cols.last().unwrap() >= self.n {
            return Err(EngineError::BadRegion);
        }
        let mut rows: Vec<BitRow> = self
            .stab
            .iter()
            .map(|s| {
                let gx = s.x.gather(&cols);
                let gz = s.z.gather(&cols);
                let mut r = BitRow::zeros(2 * cols.len());
                for i in gx.iter_ones() {
                    r.set(i, true);
                }
                for i in gz.iter_ones() {
                    r.set(cols.len() + i, true);
                }
                r
            })
            .filter(|r| !r.is_zero())
            .collect();
        Ok(gf2::rank_in_place(&mut rows) - cols.len())
    }

    /// Checks every tableau invariant.
    pub fn audit(&self) -> Result<(), String> {
        for i in 0..self.n {
            if !self.stab[i].is_hermitian() {
                return Err(format!("stabilizer {} not Hermitian", i));
            }
            for j in 0..self.n {
                if j < i && self.stab[i].anticommutes(&self.stab[j]) {
                    return Err(format!("stabilizers {} {} anticommute", i, j));
                }
                if j < i && self.destab[i].anticommutes(&self.destab[j]) {
                    return Err(format!("destabilizers {} {} anticommute", i, j));
                }
                if self.destab[i].anticommutes(&self.stab[j]) != (i == j) {
                    return Err(format!("destabilizer {} vs stabilizer {} pairing broken", i, j));
                }
            }
        }
        Ok(())
    }

    pub fn h(&mut self, q: usize) {
        for p in self.stab.iter_mut().chain(self.destab.iter_mut()) {
            let (x, z) = (p.x.get(q), p.z.get(q));
            p.x.set(q, z);
            p.z.set(q, x);
            if x && z {
                let k = p.phase_exponent();
                p.set_phase_exponent(k + 2);
            }
        }
    }

    pub fn s(&mut self, q: usize) {
        for p in self.stab.iter_mut().chain(self.destab.iter_mut()) {
            if p.x.get(q) {
                let k = p.phase_exponent();
                p.set_phase_exponent(k + 1);
                p.z.flip(q);
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        for p in self.stab.iter_mut().chain(self.destab.iter_mut()) {
            if p.x.get(c) {
                p.x.flip(t);
            }
            if p.z.get(t) {
                p.z.flip(c);
            }
        }
    }

    /// Text snapshot: a header line, then `S`, `D` rows and an optional `P` line of protected rows.
    pub fn to_text(&self) -> String {
        let mut s = format!("tableau {}\n", self.n);
        for r in &self.stab {
            s.push_str("S ");
            s.push_str(&r.to_label());
            s.push('\n');
        }
        for r in &self.destab {
            s.push_str("D ");
            s.push_str(&r.to_label());
            s.push('\n');
        }
        let prot = self.protected_rows();
        if !prot.is_empty() {
            let v: Vec<String> = prot.iter().map(|i| i.to_string()).collect();
            s.push_str(&format!("P {}\n", v.join(" ")));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, EngineError> {
        let bad = |m: &str| EngineError::Parse(m.to_string());
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| bad("empty snapshot"))?;
        let n: usize = head
            .strip_prefix("tableau ")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| bad("bad header"))?;
        let (mut stab, mut destab, mut protected) = (Vec::new(), Vec::new(), vec![false; n]);
        for l in lines {
            if let Some(r) = l.strip_prefix("S ") {
                stab.push(Pauli::parse(r)?);
            } else if let Some(r) = l.strip_prefix("D ") {
                destab.push(Pauli::parse(r)?);
            } else if let Some(r) = l.strip_prefix("P ") {
                for t in r.split_whitespace() {
                    let i: usize = t.parse().map_err(|_| bad("bad protected index"))?;
                    if i >= n {
                        return Err(bad("protected index out of range"));
                    }
                    protected[i] = true;
                }
            } else if !l.trim().is_empty() {
                return Err(bad(l));
            }
        }
        if stab.len() != n || destab.len() != n || stab.iter().chain(&destab).any(|p| p.n() != n) {
            return Err(bad("row count mismatch"));
        }
        let t = Tableau { n, stab, destab, protected };
        t.audit().map_err(EngineError::Parse)?;
        Ok(t)
    }
}

fn short(p: &Pauli) -> String {
    let s: Vec<String> = p.support().iter().map(|&q| format!("{}{}", p.site(q).unwrap(), q)).collect();
    s.join("·")
}
