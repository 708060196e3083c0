//! Dense statevector reference simulator, used as an oracle for the packed engine on few qubits.

use num_complex::Complex64;

use crate::Pauli;

const TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct StateVector {
    pub n: usize,
    pub amp: Vec<Complex64>,
}

fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn mask(bits: &kekule_core::BitRow) -> usize {
    bits.iter_ones().fold(0usize, |m, q| m | (1 << q))
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        assert!(n <= 16, "dense oracle limited to small systems");
        let mut amp = vec![Complex64::new(0.0, 0.0); 1 << n];
        amp[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amp }
    }

    /// `P|b> = i^k (-1)^{z·b} |b ⊕ x>`.
    pub fn apply_pauli(&self, p: &Pauli) -> StateVector {
        let (xm, zm) = (mask(&p.x), mask(&p.z));
        let ph = i_pow(p.phase_exponent());
        let mut out = vec![Complex64::new(0.0, 0.0); self.amp.len()];
        for (b, a) in self.amp.iter().enumerate() {
            let s = if (b & zm).count_ones() & 1 == 1 { -1.0 } else { 1.0 };
            out[b ^ xm] += ph * a * s;
        }
        StateVector { n: self.n, amp: out }
    }

    pub fn h(&mut self, q: usize) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for b in 0..self.amp.len() {
            if b & (1 << q) == 0 {
                let (a0, a1) = (self.amp[b], self.amp[b | 1 << q]);
                self.amp[b] = (a0 + a1) * r;
                self.amp[b | 1 << q] = (a0 - a1) * r;
            }
        }
    }

    pub fn s(&mut self, q: usize) {
        for b in 0..self.amp.len() {
            if b & (1 << q) != 0 {
                self.amp[b] *= Complex64::new(0.0, 1.0);
            }
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        for b in 0..self.amp.len() {
            if b & (1 << c) != 0 && b & (1 << t) == 0 {
                self.amp.swap(b, b | 1 << t);
            }
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn expectation(&self, p: &Pauli) -> f64 {
        self.inner(&self.apply_pauli(p)).re
    }

    /// Probability of outcome +1 for the Hermitian operator `p`.
    pub fn prob_plus(&self, p: &Pauli) -> f64 {
        0.5 * (1.0 + self.expectation(p))
    }

    /// Projects onto the `outcome` eigenspace of `p` and renormalizes. Returns the branch probability.
    pub fn project(&mut self, p: &Pauli, outcome: i8) -> f64 {
        let pv = self.apply_pauli(p);
        let s = outcome as f64;
        for (a, b) in self.amp.iter_mut().zip(&pv.amp) {
            *a = (*a + b * s) * 0.5;
        }
        let norm: f64 = self.amp.iter().map(|a| a.norm_sqr()).sum();
        if norm > TOL {
            let r = norm.sqrt();
            self.amp.iter_mut().for_each(|a| *a /= r);
        }
        norm
    }

    /// Reduced density matrix on `region` by explicit partial trace.
    pub fn reduced_density(&self, region: &[usize]) -> Vec<Vec<Complex64>> {
        let k = region.len();
        let rest: Vec<usize> = (0..self.n).filter(|q| !region.contains(q)).collect();
        let dim = 1 << k;
        let idx = |a: usize, b: usize| {
            let mut i = 0;
            for (j, &q) in region.iter().enumerate() {
                if a & (1 << j) != 0 {
                    i |= 1 << q;
                }
            }
            for (j, &q) in rest.iter().enumerate() {
                if b & (1 << j) != 0 {
                    i |= 1 << q;
                }
            }
            i
        };
        let mut rho = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for b in 0..1usize << rest.len() {
            for a1 in 0..dim {
                let v1 = self.amp[idx(a1, b)];
                if v1.norm_sqr() < 1e-30 {
                    continue;
                }
                for a2 in 0..dim {
                    rho[a1][a2] += v1 * self.amp[idx(a2, b)].conj();
                }
            }
        }
        rho
    }

    /// Entropy in bits from the reduced density matrix. Stabilizer states have a flat spectrum,
    /// so the entropy is `log2 rank`; flatness is asserted through the purity.
    pub fn entropy_bits(&self, region: &[usize]) -> usize {
        let rho = self.reduced_density(region);
        let r = complex_rank(rho.clone());
        let purity: f64 = (0..rho.len()).flat_map(|i| (0..rho.len()).map(move |j| (i, j))).map(|(i, j)| rho[i][j].norm_sqr()).sum();
        assert!((purity * r as f64 - 1.0).abs() < 1e-6, "spectrum not flat: purity {} rank {}", purity, r);
        assert!(r.is_power_of_two());
        r.trailing_zeros() as usize
    }
}

pub fn complex_rank(mut m: Vec<Vec<Complex64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let (mut best, mut bv) = (r, 0.0);
        for i in r..rows {
            let v = m[i][c].norm();
            if v > bv {
                best = i;
                bv = v;
            }
        }
        if bv < 1e-8 {
            continue;
        }
        m.swap(r, best);
        let piv = m[r][c];
        for i in r + 1..rows {
            let f = m[i][c] / piv;
            if f.norm() > 0.0 {
                for j in c..cols {
                    let t = m[r][j];
                    m[i][j] -= f * t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Full `2^n × 2^n` matrix of a Pauli operator (column `b` is `P|b>`).
pub fn pauli_matrix(p: &Pauli) -> Vec<Vec<Complex64>> {
    let n = p.n();
    let dim = 1 << n;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for b in 0..dim {
        let mut e = StateVector { n, amp: vec![Complex64::new(0.0, 0.0); dim] };
        e.amp[b] = Complex64::new(1.0, 0.0);
        let col = e.apply_pauli(p);
        for a in 0..dim {
            m[a][b] = col.amp[a];
        }
    }
    m
}

pub fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn max_diff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter().zip(b).flat_map(|(r, s)| r.iter().zip(s).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}
