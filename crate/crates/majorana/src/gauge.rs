//! Bond variables u_ij = ±1, plaquette fluxes and the Lieb assignment.

use kekule_core::{gf2, BitRow};
use kekule_lattice::{LatticeGraph, Plaquette};
use serde::{Deserialize, Serialize};

use crate::MajoranaError;

/// Bonds of the 24-site cell that carry u_ij = −1 for i < j (1-based site labels).
pub const REFERENCE_NEGATIVE: [(usize, usize); 14] = [
    (1, 8),
    (2, 9),
    (3, 11),
    (6, 7),
    (6, 10),
    (8, 12),
    (13, 20),
    (14, 21),
    (15, 23),
    (18, 19),
    (18, 22),
    (20, 24),
    (9, 21),
    (11, 23),
];

/// Lieb flux of an even plaquette: +1 for perimeter 2 mod 4, −1 for 0 mod 4.
pub fn lieb_flux(perimeter: usize) -> Result<i8, MajoranaError> {
    match perimeter % 4 {
        2 => Ok(1),
        0 => Ok(-1),
        _ => Err(MajoranaError::OddPerimeter(perimeter)),
    }
}

/// How a loop of bond variables is turned into a flux.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FluxConvention {
    /// W_p = (−1)^{|p|/2} Π u along the boundary. On a bipartite graph this is Π u_ij with i
    /// always on the same sublattice, so uniform A → B signs on the honeycomb give W_p = +1.
    #[default]
    Sublattice,
    /// The plain product of u along the boundary.
    Oriented,
}

impl std::str::FromStr for FluxConvention {
    type Err = MajoranaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sublattice" => Ok(FluxConvention::Sublattice),
            "oriented" => Ok(FluxConvention::Oriented),
            _ => Err(MajoranaError::Unsupported(format!("unknown flux convention {}", s))),
        }
    }
}

/// Which flux each plaquette is expected to carry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluxAssignment {
    /// Flip the expected flux of every plaquette of kind p3.
    pub flip_p3: bool,
    pub convention: FluxConvention,
}

impl FluxAssignment {
    pub fn expected(&self, p: &Plaquette) -> Result<i8, MajoranaError> {
        let f = lieb_flux(p.perimeter())?;
        Ok(if self.flip_p3 && p.kind == "p3" { -f } else { f })
    }
}

/// One sign per bond of the graph, for the orientation `a → b` of that bond.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gauge {
    pub u: Vec<i8>,
}

impl Gauge {
    pub fn uniform(g: &LatticeGraph) -> Self {
        Gauge { u: vec![1; g.bonds.len()] }
    }

    /// The sign set above, extended to every cell by translation. Only defined for kekule3d.
    pub fn reference(g: &LatticeGraph) -> Result<Self, MajoranaError> {
        if g.name != "kekule3d" {
            return Err(MajoranaError::Unsupported(format!("reference gauge is defined for kekule3d, not {}", g.name)));
        }
        let u = g
            .bonds
            .iter()
            .map(|b| {
                let (i, j) = (g.site_label(b.a) + 1, g.site_label(b.b) + 1);
                let key = (i.min(j), i.max(j));
                let s = if REFERENCE_NEGATIVE.contains(&key) { -1 } else { 1 };
                if i <= j {
                    s
                } else {
                    -s
                }
            })
            .collect();
        Ok(Gauge { u })
    }

    /// u for traversing `bond` starting at `from`.
    pub fn oriented(&self, g: &LatticeGraph, bond: usize, from: usize) -> i8 {
        if g.bonds[bond].a == from {
            self.u[bond]
        } else {
            -self.u[bond]
        }
    }

    /// Product of oriented bond variables around the plaquette boundary.
    pub fn oriented_product(&self, g: &LatticeGraph, p: &Plaquette) -> i8 {
        p.bonds.iter().zip(&p.sites).map(|(&b, &s)| self.oriented(g, b, s)).product()
    }

    pub fn flux(&self, g: &LatticeGraph, p: &Plaquette, conv: FluxConvention) -> i8 {
        let w = self.oriented_product(g, p);
        match conv {
            FluxConvention::Oriented => w,
            FluxConvention::Sublattice if (p.perimeter() / 2) % 2 == 1 => -w,
            FluxConvention::Sublattice => w,
        }
    }

    /// Gauge transformation c_s → −c_s: every bond at `site` changes sign.
    pub fn flip_site(&mut self, g: &LatticeGraph, site: usize) {
        for &b in g.incident(site) {
            self.u[b] = -self.u[b];
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassFlux {
    pub name: String,
    pub kind: String,
    pub perimeter: usize,
    pub expected: i8,
    /// Distinct observed fluxes over all copies of the class.
    pub observed: Vec<i8>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FluxReport {
    pub classes: Vec<ClassFlux>,
}

impl FluxReport {
    pub fn mismatched(&self) -> Vec<String> {
        self.classes.iter().filter(|c| !c.ok).map(|c| c.name.clone()).collect()
    }

    pub fn all_ok(&self) -> bool {
        self.classes.iter().all(|c| c.ok)
    }
}

/// Flux of every plaquette, grouped by template class.
pub fn flux_report(g: &LatticeGraph, gauge: &Gauge, assign: FluxAssignment) -> Result<FluxReport, MajoranaError> {
    let mut classes: Vec<ClassFlux> = Vec::new();
    for p in &g.plaquettes {
        let f = gauge.flux(g, p, assign.convention);
        let expected = assign.expected(p)?;
        let c = match classes.iter_mut().position(|c| c.name == p.name) {
            Some(i) => &mut classes[i],
            None => {
                classes.push(ClassFlux { name: p.name.clone(), kind: p.kind.clone(), perimeter: p.perimeter(), expected, observed: vec![], ok: true });
                classes.last_mut().unwrap()
            }
        };
        if !c.observed.contains(&f) {
            c.observed.push(f);
            c.observed.sort();
        }
        c.ok &= f == expected;
    }
    Ok(FluxReport { classes })
}

/// The reference gauge, rejected unless it carries the assigned flux on every plaquette.
pub fn build_gauge(g: &LatticeGraph, assign: FluxAssignment) -> Result<Gauge, MajoranaError> {
    let gauge = Gauge::reference(g)?;
    let rep = flux_report(g, &gauge, assign)?;
    if !rep.all_ok() {
        return Err(MajoranaError::FluxMismatch(rep.mismatched()));
    }
    Ok(gauge)
}

/// A gauge with the assigned flux on every plaquette, found by flipping bonds of `start`.
pub fn solve_gauge(g: &LatticeGraph, start: &Gauge, assign: FluxAssignment) -> Result<Gauge, MajoranaError> {
    let nb = g.bonds.len();
    let mut eqs = Vec::with_capacity(g.plaquettes.len());
    let mut rhs = Vec::with_capacity(g.plaquettes.len());
    for p in &g.plaquettes {
        let mut row = BitRow::zeros(nb);
        for &b in &p.bonds {
            row.flip(b);
        }
        eqs.push(row);
        rhs.push(start.flux(g, p, assign.convention) != assign.expected(p)?);
    }
    let x = gf2::solve_system(nb, &eqs, &rhs).ok_or(MajoranaError::Inconsistent)?;
    let mut out = start.clone();
    for b in x.iter_ones() {
        out.u[b] = -out.u[b];
    }
    Ok(out)
}

/// The Lieb-sector gauge closest in construction to the reference: the reference sign set on
/// kekule3d, uniform signs elsewhere, then corrected plaquette by plaquette.
pub fn lieb_gauge(g: &LatticeGraph, assign: FluxAssignment) -> Result<Gauge, MajoranaError> {
    let start = if g.name == "kekule3d" { Gauge::reference(g)? } else { Gauge::uniform(g) };
    solve_gauge(g, &start, assign)
}
