//! The named lattice families.

use kekule_core::Color;

use crate::decorate::{decorate, ParentGraph};
use crate::template::{ColorRule, Template, TemplateBond, TemplatePlaquette};
use crate::LatticeError;

pub const KEKULE3D_CELL: &str = include_str!("../data/kekule3d.cell");

pub const NAMES: [&str; 7] =
    ["honeycomb_kitaev", "honeycomb_kekule", "square_octagon", "hyperhoneycomb", "kekule3d", "cubic_decorated", "honeycomb_kitaev_naive"];

pub fn template(name: &str) -> Result<Template, LatticeError> {
    match name {
        "honeycomb_kitaev" | "honeycomb_kitaev_naive" => Ok(honeycomb_kitaev()),
        "honeycomb_kekule" => Ok(honeycomb_kekule()),
        "square_octagon" => decorate(&ParentGraph::square(), "square_octagon"),
        "cubic_decorated" => decorate(&ParentGraph::cubic(), "cubic_decorated"),
        "hyperhoneycomb" => Ok(hyperhoneycomb()),
        "kekule3d" => Template::parse(KEKULE3D_CELL),
        _ => Err(LatticeError::UnknownLattice(name.to_string())),
    }
}

fn fixed(a: usize, b: usize, offset: [i32; 3], c: Color) -> TemplateBond {
    TemplateBond { a, b, offset, rule: ColorRule::Fixed(c) }
}

/// Two sites A = 0, B = 1. Bonds A(R)-B(R) z, A(R)-B(R-a1) x, A(R)-B(R-a2) y.
pub fn honeycomb_kitaev() -> Template {
    Template {
        name: "honeycomb_kitaev".into(),
        dim: 2,
        sites_per_cell: 2,
        parity_colors: false,
        bonds: vec![fixed(0, 1, [0, 0, 0], Color::Z), fixed(0, 1, [-1, 0, 0], Color::X), fixed(0, 1, [0, -1, 0], Color::Y)],
        plaquettes: vec![TemplatePlaquette {
            name: "hex".into(),
            kind: "hex".into(),
            verts: vec![(0, [0, 0, 0]), (1, [0, 0, 0]), (0, [1, 0, 0]), (1, [1, -1, 0]), (0, [1, -1, 0]), (1, [0, -1, 0])],
        }],
        volumes: vec![],
    }
}

/// Honeycomb with the Kekulé coloring: hexagon h(R) gets color (R1 - R2) mod 3 and every bond
/// takes the color absent from its two hexagons. The colored cell spans (1,1) and (0,3) in the
/// Bravais basis and holds three hexagons (six sites).
pub fn honeycomb_kekule() -> Template {
    // Bravais R -> (supercell n1, n2; slot s); site 2s is A, 2s + 1 is B
    let locate = |r: [i32; 2]| -> ([i32; 3], usize) {
        let d = r[1] - r[0];
        ([r[0], d.div_euclid(3), 0], d.rem_euclid(3) as usize)
    };
    let hex_color = |r: [i32; 2]| (r[0] - r[1]).rem_euclid(3) as usize;
    let mut bonds = Vec::new();
    for s in 0..3i32 {
        let r = [0, s];
        let d = hex_color(r);
        let (ca, sa) = locate(r);
        for (dr, shift) in [([0, 0], 2usize), ([-1, 0], 0), ([0, -1], 1)] {
            let rb = [r[0] + dr[0], r[1] + dr[1]];
            let (cb, sb) = locate(rb);
            let off = [cb[0] - ca[0], cb[1] - ca[1], 0];
            bonds.push(fixed(2 * sa, 2 * sb + 1, off, Color::from_index((d + shift) % 3)));
        }
    }
    let mut plaquettes = Vec::new();
    for s in 0..3i32 {
        let r = [0, s];
        let verts = [([0, 0], 0), ([0, 0], 1), ([1, 0], 0), ([1, -1], 1), ([1, -1], 0), ([0, -1], 1)]
            .iter()
            .map(|&(d, sub)| {
                let (c, slot) = locate([r[0] + d[0], r[1] + d[1]]);
                (2 * slot + sub, c)
            })
            .collect();
        plaquettes.push(TemplatePlaquette { name: format!("hex{}", s), kind: "hex".into(), verts });
    }
    Template {
        name: "honeycomb_kekule".into(),
        dim: 2,
        sites_per_cell: 6,
        parity_colors: false,
        bonds,
        plaquettes,
        volumes: vec![],
    }
}

/// Hyperhoneycomb in a four-site basis where every zigzag chain crosses the first-axis cut.
pub fn hyperhoneycomb() -> Template {
    let (a, b, c, d) = (0, 1, 2, 3);
    Template {
        name: "hyperhoneycomb".into(),
        dim: 3,
        sites_per_cell: 4,
        parity_colors: false,
        bonds: vec![
            fixed(a, b, [0, 0, 0], Color::X),
            fixed(b, a, [1, 0, 0], Color::Y),
            fixed(c, d, [0, 0, 0], Color::X),
            fixed(d, c, [1, 1, 0], Color::Y),
            fixed(b, c, [0, 0, 0], Color::Z),
            fixed(d, a, [1, 0, 1], Color::Z),
        ],
        plaquettes: vec![],
        volumes: vec![],
    }
}
