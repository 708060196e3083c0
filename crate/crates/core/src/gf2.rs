//! Linear algebra over GF(2) on packed rows.

use crate::bits::BitRow;

/// Row rank of `rows`, destroying them. Elimination proceeds column by column over packed words.
pub fn rank_in_place(rows: &mut [BitRow]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let piv = &head[r];
        for row in tail.iter_mut() {
            if row.get(c) {
                row.xor_assign(piv);
            }
        }
        r += 1;
    }
    r
}

pub fn rank(rows: &[BitRow]) -> usize {
    let mut v = rows.to_vec();
    rank_in_place(&mut v)
}

/// Plain elimination on unpacked booleans, used as an oracle for the packed path.
pub fn rank_naive(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c]) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] {
                for j in 0..ncols {
                    let v = m[r][j];
                    m[i][j] ^= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Incrementally built echelon basis with one pivot column per stored row.
///
/// With `tag_len > 0` each stored row also records which inserted vectors it is built from,
/// so membership queries can return a certificate.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ncols: usize,
    rows: Vec<BitRow>,
    tags: Vec<BitRow>,
    pivot_of_col: Vec<Option<usize>>,
    inserted: usize,
    tag_len: usize,
}

impl EchelonBasis {
    /// `tag_len` bounds the number of vectors that will be offered to `insert`; zero disables tags.
    pub fn new(ncols: usize, tag_len: usize) -> Self {
        EchelonBasis { ncols, rows: Vec::new(), tags: Vec::new(), pivot_of_col: vec![None; ncols], inserted: 0, tag_len }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Inserts `v`; returns true if it was independent of the current span.
    pub fn insert(&mut self, v: &BitRow) -> bool {
        assert_eq!(v.len(), self.ncols);
        let mut w = v.clone();
        let mut tag = BitRow::zeros(self.tag_len);
        if self.tag_len > 0 {
            assert!(self.inserted < self.tag_len, "tag capacity exceeded");
            tag.set(self.inserted, true);
        }
        self.inserted += 1;
        self.reduce(&mut w, &mut tag);
        match w.first_one() {
            None => false,
            Some(p) => {
                self.pivot_of_col[p] = Some(self.rows.len());
                self.rows.push(w);
                self.tags.push(tag);
                true
            }
        }
    }

    // Stored rows have their pivot as lowest set bit, so clearing pivots in increasing column
    // order never reintroduces an earlier one.
    fn reduce(&self, v: &mut BitRow, tag: &mut BitRow) {
        let mut at = 0;
        while let Some(i) = v.next_one(at) {
            if let Some(k) = self.pivot_of_col[i] {
                v.xor_assign(&self.rows[k]);
                if self.tag_len > 0 {
                    tag.xor_assign(&self.tags[k]);
                }
            }
            at = i + 1;
        }
    }

    /// If `v` lies in the span, returns the set of inserted vectors (by insertion index) summing to it.
    /// Without tags the returned set is empty.
    pub fn express(&self, v: &BitRow) -> Option<BitRow> {
        let mut w = v.clone();
        let mut tag = BitRow::zeros(self.tag_len);
        self.reduce(&mut w, &mut tag);
        if w.is_zero() {
            Some(tag)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        self.express(v).is_some()
    }
}

/// Solves `x · A = b` for a row vector `x`, where `a` lists the rows of `A`.
/// Returns one solution as a selection of rows, or None when `b` is outside the row space.
pub fn solve_rows(a: &[BitRow], b: &BitRow) -> Option<BitRow> {
    let mut basis = EchelonBasis::new(b.len(), a.len().max(1));
    for r in a {
        basis.insert(r);
    }
    basis.express(b)
}

/// Solves the linear system `eqs[i] · v = rhs[i]` over GF(2). Returns one solution or None.
pub fn solve_system(nvars: usize, eqs: &[BitRow], rhs: &[bool]) -> Option<BitRow> {
    assert_eq!(eqs.len(), rhs.len());
    let mut rows: Vec<BitRow> = eqs
        .iter()
        .zip(rhs)
        .map(|(e, &r)| {
            let mut a = BitRow::zeros(nvars + 1);
            for i in e.iter_ones() {
                a.set(i, true);
            }
            a.set(nvars, r);
            a
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
        rows.swap(r, p);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pr);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| row.get(nvars)) {
        return None;
    }
    let mut x = BitRow::zeros(nvars);
    for (k, &c) in pivots.iter().enumerate() {
        if rows[k].get(nvars) {
            x.set(c, true);
        }
    }
    Some(x)
}
