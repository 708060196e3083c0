use kekule_core::Color;
use kekule_lattice::operators::check;
use kekule_lattice::LatticeGraph;
use kekule_stabilizer::Pauli;

use crate::FloquetError;

/// Two-step string through `o`: the product of its bond operators of colors `a` and `b`.
fn hop(g: &LatticeGraph, o: usize, a: Color, b: Color) -> Result<Pauli, FloquetError> {
    let ba = g.bond_of_color(o, a).ok_or(FloquetError::NotTrivalent(o))?;
    let bb = g.bond_of_color(o, b).ok_or(FloquetError::NotTrivalent(o))?;
    let mut p = check(g, ba);
    p.mul_assign(&check(g, bb));
    Ok(p)
}

/// Phase λ in s1·s2·s3 = λ·s3·s2·s1 for the three strings meeting at `o`. A fermionic
/// excitation gives λ = −1.
pub fn tjunction_exchange_sign(g: &LatticeGraph, o: usize) -> Result<i8, FloquetError> {
    if g.incident(o).len() != 3 {
        return Err(FloquetError::NotTrivalent(o));
    }
    let s1 = hop(g, o, Color::X, Color::Y)?;
    let s2 = hop(g, o, Color::Y, Color::Z)?;
    let s3 = hop(g, o, Color::Z, Color::X)?;
    Ok(relative_phase(&[&s1, &s2, &s3], &[&s3, &s2, &s1]))
}

/// λ with Π(first) = λ·Π(second); both products must agree up to a sign.
pub fn relative_phase(first: &[&Pauli], second: &[&Pauli]) -> i8 {
    let n = first[0].n();
    let prod = |ops: &[&Pauli]| {
        let mut acc = Pauli::identity(n);
        for p in ops {
            acc.mul_assign(p);
        }
        acc
    };
    let (a, b) = (prod(first), prod(second));
    assert!(a.x == b.x && a.z == b.z, "products differ beyond a phase");
    let d = (a.phase_exponent() + 4 - b.phase_exponent()) % 4;
    match d {
        0 => 1,
        2 => -1,
        _ => panic!("relative phase is imaginary"),
    }
}
