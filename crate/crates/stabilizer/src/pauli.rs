use std::fmt;

use kekule_core::{BitRow, Color};

use crate::EngineError;

/// A Pauli operator `i^k · Π_q X_q^{x_q} Z_q^{z_q}`.
///
/// The stored exponent is relative to the XZ-ordered product, so a canonical `Y` on one qubit
/// carries one factor of `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub x: BitRow,
    pub z: BitRow,
    k: u8,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Pauli { x: BitRow::zeros(n), z: BitRow::zeros(n), k: 0 }
    }

    /// Builds `sign · Π σ` from canonical single-site factors; `sign` is +1 or -1.
    pub fn from_sites(n: usize, sites: impl IntoIterator<Item = (usize, Color)>, sign: i8) -> Self {
        let mut p = Pauli::identity(n);
        for (q, c) in sites {
            p.mul_assign(&Pauli::single(n, q, c));
        }
        if sign < 0 {
            p.k = (p.k + 2) & 3;
        }
        p
    }

    pub fn single(n: usize, q: usize, c: Color) -> Self {
        let mut p = Pauli::identity(n);
        match c {
            Color::X => p.x.set(q, true),
            Color::Z => p.z.set(q, true),
            Color::Y => {
                p.x.set(q, true);
                p.z.set(q, true);
                p.k = 1;
            }
        }
        p
    }

    /// The bond check `σ^c_a σ^c_b`.
    pub fn check(n: usize, a: usize, b: usize, c: Color) -> Self {
        Pauli::from_sites(n, [(a, c), (b, c)], 1)
    }

    /// Parses strings such as `"+XIZ"`, `"-iYY"`, `"ZZ"`.
    pub fn parse(s: &str) -> Result<Self, EngineError> {
        let s = s.trim();
        let (mut phase, rest) = if let Some(r) = s.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (1, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else {
            (0, s)
        };
        let n = rest.chars().count();
        let mut p = Pauli::identity(n);
        for (q, ch) in rest.chars().enumerate() {
            match ch {
                'I' | '_' | '.' => {}
                'X' => p.x.set(q, true),
                'Z' => p.z.set(q, true),
                'Y' => {
                    p.x.set(q, true);
                    p.z.set(q, true);
                    phase += 1;
                }
                _ => return Err(EngineError::Parse(s.to_string())),
            }
        }
        p.k = phase & 3;
        Ok(p)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Raw exponent of `i` in the XZ-ordered form.
    #[inline]
    pub fn phase_exponent(&self) -> u8 {
        self.k
    }

    pub fn set_phase_exponent(&mut self, k: u8) {
        self.k = k & 3;
    }

    /// Exponent of `i` relative to the canonical (Y-containing) string.
    pub fn canonical_exponent(&self) -> u8 {
        let ny = (self.x.and_count(&self.z) & 3) as u8;
        (self.k + 4 - ny) & 3
    }

    pub fn is_hermitian(&self) -> bool {
        self.canonical_exponent() & 1 == 0
    }

    /// +1 or -1 for Hermitian operators, `None` otherwise.
    pub fn sign(&self) -> Option<i8> {
        match self.canonical_exponent() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn negate(&mut self) {
        self.k = (self.k + 2) & 3;
    }

    pub fn with_sign(mut self, s: i8) -> Self {
        let cur = self.canonical_exponent();
        let want = if s < 0 { 2 } else { 0 };
        self.k = (self.k + 4 + want - cur) & 3;
        self
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x.words().iter().zip(self.z.words()).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    pub fn site(&self, q: usize) -> Option<Color> {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => None,
            (true, false) => Some(Color::X),
            (true, true) => Some(Color::Y),
            (false, true) => Some(Color::Z),
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.x.get(q) || self.z.get(q)).collect()
    }

    /// Symplectic product: true when the operators anticommute.
    #[inline]
    pub fn anticommutes(&self, other: &Pauli) -> bool {
        let mut acc = 0u64;
        let (ax, az, bx, bz) = (self.x.words(), self.z.words(), other.x.words(), other.z.words());
        for i in 0..ax.len() {
            acc ^= (ax[i] & bz[i]) ^ (az[i] & bx[i]);
        }
        acc.count_ones() & 1 == 1
    }

    pub fn commutes(&self, other: &Pauli) -> Result<bool, EngineError> {
        if self.n() != other.n() {
            return Err(EngineError::SizeMismatch(self.n(), other.n()));
        }
        Ok(!self.anticommutes(other))
    }

    /// `self ← self · other`.
    #[inline]
    pub fn mul_assign(&mut self, other: &Pauli) {
        let cross = self.z.and_count(&other.x);
        self.k = ((self.k as usize + other.k as usize + 2 * cross) & 3) as u8;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn multiply(&self, other: &Pauli) -> Result<Pauli, EngineError> {
        if self.n() != other.n() {
            return Err(EngineError::SizeMismatch(self.n(), other.n()));
        }
        let mut r = self.clone();
        r.mul_assign(other);
        Ok(r)
    }

    /// Symplectic vector `(x | z)` of length `2n`.
    pub fn symplectic(&self) -> BitRow {
        let n = self.n();
        let mut r = BitRow::zeros(2 * n);
        for q in self.x.iter_ones() {
            r.set(q, true);
        }
        for q in self.z.iter_ones() {
            r.set(n + q, true);
        }
        r
    }

    pub fn from_symplectic(v: &BitRow) -> Pauli {
        let n = v.len() / 2;
        let mut p = Pauli::identity(n);
        for i in v.iter_ones() {
            if i < n {
                p.x.set(i, true);
            } else {
                p.z.set(i - n, true);
            }
        }
        p.with_sign(1)
    }

    pub fn to_label(&self) -> String {
        let mut s = String::with_capacity(self.n() + 2);
        s.push_str(match self.canonical_exponent() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        });
        for q in 0..self.n() {
            s.push(match self.site(q) {
                None => 'I',
                Some(Color::X) => 'X',
                Some(Color::Y) => 'Y',
                Some(Color::Z) => 'Z',
            });
        }
        s
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_label())
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({})", self.to_label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_products() {
        let x = Pauli::parse("X").unwrap();
        let z = Pauli::parse("Z").unwrap();
        let xz = x.multiply(&z).unwrap();
        assert_eq!(xz.to_label(), "-iY");
        let zx = z.multiply(&x).unwrap();
        assert_eq!(zx.to_label(), "+iY");
        let y = Pauli::parse("Y").unwrap();
        assert!(y.multiply(&y).unwrap().is_identity());
        assert_eq!(y.multiply(&y).unwrap().sign(), Some(1));
    }

    #[test]
    fn label_roundtrip() {
        for s in ["+XIZY", "-YYZ", "+iXY", "-iZ"] {
            assert_eq!(Pauli::parse(s).unwrap().to_label(), s);
        }
    }

    #[test]
    fn commutation() {
        let p = |s| Pauli::parse(s).unwrap();
        assert!(!p("XI").commutes(&p("ZI")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("X").commutes(&p("ZZ")).is_err());
    }
}
