use std::fmt;

use kekule_core::Color;
use kekule_lattice::LatticeGraph;
use serde::Serialize;

use crate::FloquetError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundLabel {
    Z,
    X,
    Y,
    ZIntraEven,
    ZP2,
    YP2,
    ZInterEven,
}

impl RoundLabel {
    pub fn color(self) -> Color {
        match self {
            RoundLabel::X => Color::X,
            RoundLabel::Y | RoundLabel::YP2 => Color::Y,
            _ => Color::Z,
        }
    }

    /// Whether the round measures every bond of its color.
    pub fn is_full(self) -> bool {
        matches!(self, RoundLabel::X | RoundLabel::Y | RoundLabel::Z)
    }

    pub fn name(self) -> &'static str {
        match self {
            RoundLabel::Z => "z",
            RoundLabel::X => "x",
            RoundLabel::Y => "y",
            RoundLabel::ZIntraEven => "z_intra_even",
            RoundLabel::ZP2 => "z_p2",
            RoundLabel::YP2 => "y_p2",
            RoundLabel::ZInterEven => "z_inter_even",
        }
    }
}

impl fmt::Display for RoundLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Round {
    pub label: RoundLabel,
    /// Measured bonds in ascending id order, which is lexicographic in (cell, template bond).
    pub bonds: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    ThreeRound,
    TenRound,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "3round" | "3" => Ok(Variant::ThreeRound),
            "10round" | "10" => Ok(Variant::TenRound),
            _ => Err(format!("unknown schedule variant '{}'", s)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Schedule {
    pub variant: Variant,
    pub rounds: Vec<Round>,
}

impl Schedule {
    pub fn period(&self) -> usize {
        self.rounds.len()
    }

    /// Color of the last round; the code instant at which a cycle closes.
    pub fn closing_color(&self) -> Color {
        self.rounds.last().unwrap().label.color()
    }
}

fn label_pair(g: &LatticeGraph, bond: usize) -> (usize, usize) {
    let b = &g.bonds[bond];
    let (u, v) = (g.site_label(b.a) + 1, g.site_label(b.b) + 1);
    (u.min(v), u.max(v))
}

pub fn build_schedule(g: &LatticeGraph, variant: Variant) -> Result<Schedule, FloquetError> {
    let full = |c: Color| Round { label: RoundLabel::from_color(c), bonds: g.bonds_of_color(c) };
    let rounds = match variant {
        Variant::ThreeRound => vec![full(Color::Z), full(Color::X), full(Color::Y)],
        Variant::TenRound => {
            if g.name != "kekule3d" {
                return Err(FloquetError::Unsupported(format!("the 10-round schedule needs kekule3d, not {}", g.name)));
            }
            let even = |b: usize| g.parity(g.site_cell(g.bonds[b].a)) == 0;
            let select = |c: Color, keep: &dyn Fn(usize) -> bool| -> Vec<usize> { g.bonds_of_color(c).into_iter().filter(|&b| keep(b)).collect() };
            let intra = |b: usize| {
                let p = label_pair(g, b);
                p == (9, 21) || p == (10, 22) || ((p == (3, 4) || p == (15, 16)) && even(b))
            };
            let inter = |b: usize| {
                let p = label_pair(g, b);
                p == (11, 23) || p == (12, 24) || ((p == (5, 6) || p == (17, 18)) && even(b))
            };
            let mut p2 = vec![false; g.bonds.len()];
            for p in g.plaquettes.iter().filter(|p| p.kind == "p2") {
                for &b in &p.bonds {
                    p2[b] = true;
                }
            }
            let on_p2 = |b: usize| p2[b];
            vec![
                full(Color::Z),
                full(Color::X),
                full(Color::Y),
                Round { label: RoundLabel::ZIntraEven, bonds: select(Color::Z, &intra) },
                full(Color::X),
                Round { label: RoundLabel::ZP2, bonds: select(Color::Z, &on_p2) },
                Round { label: RoundLabel::YP2, bonds: select(Color::Y, &on_p2) },
                full(Color::X),
                Round { label: RoundLabel::ZInterEven, bonds: select(Color::Z, &inter) },
                full(Color::Y),
            ]
        }
    };
    Ok(Schedule { variant, rounds })
}

impl RoundLabel {
    fn from_color(c: Color) -> Self {
        match c {
            Color::X => RoundLabel::X,
            Color::Y => RoundLabel::Y,
            Color::Z => RoundLabel::Z,
        }
    }
}
