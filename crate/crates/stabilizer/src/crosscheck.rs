//! Randomized programs executed side by side on the packed tableau and the dense oracle.

use kekule_core::Color;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dense::StateVector;
use crate::{Pauli, Tableau};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProgramReport {
    pub qubits: usize,
    pub measurements: usize,
    /// Random-branch measurements and how many of them returned +1.
    pub random: usize,
    pub random_plus: usize,
    /// Measurements where the tableau and the oracle disagreed on determinism or outcome.
    pub outcome_mismatches: usize,
    pub entropy_checks: usize,
    pub entropy_mismatches: usize,
    /// Final stabilizers whose oracle expectation was not +1.
    pub state_mismatches: usize,
}

fn random_pauli<R: Rng>(n: usize, rng: &mut R) -> Pauli {
    let w = rng.gen_range(1..=n.min(4));
    let mut qs: Vec<usize> = (0..n).collect();
    qs.shuffle(rng);
    let sites: Vec<(usize, Color)> = qs[..w].iter().map(|&q| (q, Color::from_index(rng.gen_range(0..3)))).collect();
    Pauli::from_sites(n, sites, if rng.gen_bool(0.5) { 1 } else { -1 })
}

fn random_gate<R: Rng>(t: &mut Tableau, s: &mut StateVector, rng: &mut R) {
    let n = t.n();
    match rng.gen_range(0..3) {
        0 => {
            let q = rng.gen_range(0..n);
            t.h(q);
            s.h(q);
        }
        1 => {
            let q = rng.gen_range(0..n);
            t.s(q);
            s.s(q);
        }
        _ if n > 1 => {
            let c = rng.gen_range(0..n);
            let mut d = rng.gen_range(0..n - 1);
            if d >= c {
                d += 1;
            }
            t.cnot(c, d);
            s.cnot(c, d);
        }
        _ => {}
    }
}

/// Runs one program of `steps` operations on `n` qubits.
pub fn run_program<R: Rng>(n: usize, steps: usize, rng: &mut R) -> ProgramReport {
    let mut t = Tableau::zero_state(n);
    let mut s = StateVector::zero(n);
    let mut rep = ProgramReport { qubits: n, ..Default::default() };
    for _ in 0..3 * n {
        random_gate(&mut t, &mut s, rng);
    }
    for _ in 0..steps {
        match rng.gen_range(0..10) {
            0..=3 => random_gate(&mut t, &mut s, rng),
            4..=8 => {
                let p = random_pauli(n, rng);
                let pp = s.prob_plus(&p);
                let o = t.measure(&p, rng).expect("hermitian check");
                rep.measurements += 1;
                let ok = if o.deterministic {
                    (pp - if o.value > 0 { 1.0 } else { 0.0 }).abs() < 1e-9
                } else {
                    rep.random += 1;
                    if o.value > 0 {
                        rep.random_plus += 1;
                    }
                    (pp - 0.5).abs() < 1e-9
                };
                if !ok {
                    rep.outcome_mismatches += 1;
                }
                s.project(&p, o.value);
            }
            _ if n > 1 => {
                let k = rng.gen_range(1..n);
                let mut qs: Vec<usize> = (0..n).collect();
                qs.shuffle(rng);
                let region = &qs[..k];
                rep.entropy_checks += 1;
                if t.entropy(region).unwrap() != s.entropy_bits(region) {
                    rep.entropy_mismatches += 1;
                }
            }
            _ => {}
        }
    }
    for g in t.stabilizers() {
        if (s.expectation(g) - 1.0).abs() > 1e-9 {
            rep.state_mismatches += 1;
        }
    }
    rep
}
