//! Sign-free stabilizer generator sets for measurement-only dynamics.
//!
//! Outcome signs never influence entanglement, so large monitored runs drop them. Rows are
//! kept densely alongside per-qubit column bitsets, which makes the anticommuting-row mask of a
//! two-site check an XOR of four columns.

use kekule_core::bits::{words_for, WORD};
use kekule_core::{gf2, BitRow, Color};

use crate::{EngineError, Pauli};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    w: usize,
    rw: usize,
    rows: Vec<u64>,
    colx: Vec<u64>,
    colz: Vec<u64>,
}

impl GeneratorSet {
    /// Generators of a pure state; signs are discarded. Commutation and independence are checked.
    pub fn from_generators(n: usize, gens: &[Pauli]) -> Result<Self, EngineError> {
        if gens.len() != n {
            return Err(EngineError::InvalidGenerators(format!("{} generators for {} qubits", gens.len(), n)));
        }
        let sym: Vec<BitRow> = gens.iter().map(|g| g.symplectic()).collect();
        if gf2::rank(&sym) != n {
            return Err(EngineError::InvalidGenerators("generators are dependent".into()));
        }
        let w = words_for(n);
        let rw = words_for(n);
        let mut g = GeneratorSet { n, w, rw, rows: vec![0; n * 2 * w], colx: vec![0; n * rw], colz: vec![0; n * rw] };
        for (r, p) in gens.iter().enumerate() {
            if p.n() != n {
                return Err(EngineError::SizeMismatch(p.n(), n));
            }
            for q in p.x.iter_ones() {
                g.set_x(r, q);
            }
            for q in p.z.iter_ones() {
                g.set_z(r, q);
            }
        }
        for r in 0..n {
            let m = g.anticommuting_with_row(r);
            if m.iter().any(|&w| w != 0) {
                return Err(EngineError::InvalidGenerators(format!("generator {} does not commute with the rest", r)));
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn set_x(&mut self, r: usize, q: usize) {
        self.rows[r * 2 * self.w + q / WORD] |= 1 << (q % WORD);
        self.colx[q * self.rw + r / WORD] |= 1 << (r % WORD);
    }

    #[inline]
    fn set_z(&mut self, r: usize, q: usize) {
        self.rows[r * 2 * self.w + self.w + q / WORD] |= 1 << (q % WORD);
        self.colz[q * self.rw + r / WORD] |= 1 << (r % WORD);
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.rows[r * 2 * self.w..(r + 1) * 2 * self.w]
    }

    pub fn row_pauli(&self, r: usize) -> Pauli {
        let row = self.row(r);
        let mut p = Pauli::identity(self.n);
        p.x = BitRow::from_words(self.n, row[..self.w].to_vec());
        p.z = BitRow::from_words(self.n, row[self.w..].to_vec());
        p.with_sign(1)
    }

    pub fn weight(&self, r: usize) -> usize {
        let row = self.row(r);
        (0..self.w).map(|i| (row[i] | row[self.w + i]).count_ones() as usize).sum()
    }

    fn anticommuting_with_row(&self, r: usize) -> Vec<u64> {
        let mut m = vec![0u64; self.rw];
        let row = self.row(r).to_vec();
        for q in ones(&row[..self.w]) {
            xor_into(&mut m, &self.colz[q * self.rw..(q + 1) * self.rw]);
        }
        for q in ones(&row[self.w..]) {
            xor_into(&mut m, &self.colx[q * self.rw..(q + 1) * self.rw]);
        }
        m
    }

    fn site_mask(&self, m: &mut [u64], q: usize, c: Color) {
        let cx = &self.colx[q * self.rw..(q + 1) * self.rw];
        let cz = &self.colz[q * self.rw..(q + 1) * self.rw];
        match c {
            Color::Z => xor_into(m, cx),
            Color::X => xor_into(m, cz),
            Color::Y => {
                xor_into(m, cx);
                xor_into(m, cz);
            }
        }
    }

    /// True if the Pauli with the given single-site factors commutes with every generator,
    /// which for a pure state means it lies in the stabilizer group up to sign.
    pub fn contains_sites(&self, sites: &[(usize, Color)]) -> bool {
        let mut m = vec![0u64; self.rw];
        for &(q, c) in sites {
            self.site_mask(&mut m, q, c);
        }
        m.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, p: &Pauli) -> bool {
        let sites: Vec<(usize, Color)> = p.support().into_iter().map(|q| (q, p.site(q).unwrap())).collect();
        self.contains_sites(&sites)
    }

    /// Measures `σ^c_a σ^c_b`. Returns false when the outcome was determined by the state.
    pub fn measure_check(&mut self, a: usize, b: usize, c: Color) -> bool {
        let mut m = vec![0u64; self.rw];
        self.site_mask(&mut m, a, c);
        self.site_mask(&mut m, b, c);
        if m.iter().all(|&w| w == 0) {
            return false;
        }
        let anti: Vec<usize> = ones(&m).collect();
        let piv = *anti.iter().min_by_key(|&&r| (self.weight(r), r)).unwrap();
        let prow = self.row(piv).to_vec();
        let xs: Vec<usize> = ones(&prow[..self.w]).collect();
        let zs: Vec<usize> = ones(&prow[self.w..]).collect();
        let rw2 = 2 * self.w;
        for &r in &anti {
            if r == piv {
                continue;
            }
            let dst = &mut self.rows[r * rw2..(r + 1) * rw2];
            for (d, s) in dst.iter_mut().zip(&prow) {
                *d ^= *s;
            }
            let (rword, rbit) = (r / WORD, 1u64 << (r % WORD));
            for &q in &xs {
                self.colx[q * self.rw + rword] ^= rbit;
            }
            for &q in &zs {
                self.colz[q * self.rw + rword] ^= rbit;
            }
        }
        let (pword, pbit) = (piv / WORD, 1u64 << (piv % WORD));
        for &q in &xs {
            self.colx[q * self.rw + pword] &= !pbit;
        }
        for &q in &zs {
            self.colz[q * self.rw + pword] &= !pbit;
        }
        self.rows[piv * rw2..(piv + 1) * rw2].iter_mut().for_each(|w| *w = 0);
        for q in [a, b] {
            if c != Color::Z {
                self.set_x(piv, q);
            }
            if c != Color::X {
                self.set_z(piv, q);
            }
        }
        true
    }

    /// Entropy of the first `m` qubits.
    pub fn entropy_prefix(&self, m: usize) -> Result<usize, EngineError> {
        if m == 0 || m >= self.n {
            return Err(EngineError::BadRegion);
        }
        let wm = words_for(m);
        let tail = if m % WORD == 0 { u64::MAX } else { (1u64 << (m % WORD)) - 1 };
        let mut rows: Vec<BitRow> = Vec::new();
        for r in 0..self.n {
            let row = self.row(r);
            let mut v = Vec::with_capacity(2 * wm);
            v.extend_from_slice(&row[..wm]);
            v.extend_from_slice(&row[self.w..self.w + wm]);
            v[wm - 1] &= tail;
            v[2 * wm - 1] &= tail;
            if v.iter().any(|&w| w != 0) {
                rows.push(BitRow::from_words(2 * wm * WORD, v));
            }
        }
        Ok(gf2::rank_in_place(&mut rows) - m)
    }

    /// Entropy of an arbitrary proper subset of qubits.
    pub fn entropy(&self, region: &[usize]) -> Result<usize, EngineError> {
        let mut cols = region.to_vec();
        cols.sort_unstable();
        cols.dedup();
        if cols.is_empty() || cols.len() >= self.n || cols.len() != region.len() || *cols.last().unwrap() >= self.n {
            return Err(EngineError::BadRegion);
        }
        if cols.iter().enumerate().all(|(i, &q)| i == q) {
            return self.entropy_prefix(cols.len());
        }
        let k = cols.len();
        let mut rows: Vec<BitRow> = Vec::new();
        for r in 0..self.n {
            let row = self.row(r);
            let mut v = BitRow::zeros(2 * k);
            for (j, &q) in cols.iter().enumerate() {
                if (row[q / WORD] >> (q % WORD)) & 1 == 1 {
                    v.set(j, true);
                }
                if (row[self.w + q / WORD] >> (q % WORD)) & 1 == 1 {
                    v.set(k + j, true);
                }
            }
            if !v.is_zero() {
                rows.push(v);
            }
        }
        Ok(gf2::rank_in_place(&mut rows) - k)
    }

    /// Consistency of the column mirror with the rows, and mutual commutation.
    pub fn audit(&self) -> Result<(), String> {
        for r in 0..self.n {
            let row = self.row(r);
            for q in 0..self.n {
                let bx = (row[q / WORD] >> (q % WORD)) & 1 == 1;
                let bz = (row[self.w + q / WORD] >> (q % WORD)) & 1 == 1;
                let cx = (self.colx[q * self.rw + r / WORD] >> (r % WORD)) & 1 == 1;
                let cz = (self.colz[q * self.rw + r / WORD] >> (r % WORD)) & 1 == 1;
                if bx != cx || bz != cz {
                    return Err(format!("column mirror out of sync at row {} qubit {}", r, q));
                }
            }
            if self.anticommuting_with_row(r).iter().any(|&w| w != 0) {
                return Err(format!("row {} anticommutes with another", r));
            }
        }
        let sym: Vec<BitRow> = (0..self.n).map(|r| self.row_pauli(r).symplectic()).collect();
        if gf2::rank(&sym) != self.n {
            return Err("generators became dependent".into());
        }
        Ok(())
    }
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD + t)
            }
        })
    })
}
