use std::collections::BTreeMap;

use kekule_core::Color;
use serde::Serialize;

use crate::template::{add, Template};
use crate::LatticeError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub color: Color,
    /// Unwrapped cell of `b` minus cell of `a`.
    pub offset: [i32; 3],
    /// Index of the generating template bond, if known.
    pub template: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plaquette {
    pub id: usize,
    pub name: String,
    pub kind: String,
    pub cell: [usize; 3],
    /// Boundary sites in cyclic order; `bonds[i]` joins `sites[i]` and `sites[i + 1]`.
    pub sites: Vec<usize>,
    pub bonds: Vec<usize>,
    pub colors_used: Vec<Color>,
}

impl Plaquette {
    pub fn perimeter(&self) -> usize {
        self.bonds.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VolumeClass {
    Intra,
    Inter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeConstraint {
    pub id: usize,
    pub name: String,
    pub class: VolumeClass,
    pub cell: [usize; 3],
    pub plaquettes: Vec<usize>,
}

/// A periodic tricoordinated graph with colored bonds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGraph {
    pub name: String,
    /// Cells along each axis; 2d lattices have `dims[2] == 1`.
    pub dims: [usize; 3],
    pub dim: usize,
    pub sites_per_cell: usize,
    pub parity_colors: bool,
    pub bonds: Vec<Bond>,
    pub plaquettes: Vec<Plaquette>,
    pub volumes: Vec<VolumeConstraint>,
    incident: Vec<Vec<usize>>,
}

fn wrap(c: [i32; 3], dims: [usize; 3]) -> [usize; 3] {
    let mut o = [0usize; 3];
    for i in 0..3 {
        o[i] = c[i].rem_euclid(dims[i] as i32) as usize;
    }
    o
}

impl LatticeGraph {
    pub fn from_template(t: &Template, dims: [usize; 3]) -> Result<Self, LatticeError> {
        if dims.iter().any(|&d| d == 0) || (t.dim == 2 && dims[2] != 1) {
            return Err(LatticeError::Dims(format!("{:?} invalid for a {}d lattice", dims, t.dim)));
        }
        if t.parity_colors && (dims[0] % 2 == 1 || dims[1] % 2 == 1) {
            return Err(LatticeError::Dims("coloring inconsistent under periodic boundaries: L1 and L2 must be even".into()));
        }
        let nc = dims[0] * dims[1] * dims[2];
        let spc = t.sites_per_cell;
        let nbt = t.bonds.len();
        let mut g = LatticeGraph {
            name: t.name.clone(),
            dims,
            dim: t.dim,
            sites_per_cell: spc,
            parity_colors: t.parity_colors,
            bonds: Vec::with_capacity(nc * nbt),
            plaquettes: Vec::new(),
            volumes: Vec::new(),
            incident: Vec::new(),
        };
        for ci in 0..nc {
            let c = g.cell_coords(ci);
            for (k, tb) in t.bonds.iter().enumerate() {
                let cb = wrap(add(to_i(c), tb.offset), dims);
                g.bonds.push(Bond {
                    a: g.site_index(c, tb.a),
                    b: g.site_index(cb, tb.b),
                    color: tb.rule.color(c[0] + c[1]),
                    offset: tb.offset,
                    template: Some(k),
                });
            }
        }
        g.rebuild_incidence();
        let npt = t.plaquettes.len();
        for ci in 0..nc {
            let c = g.cell_coords(ci);
            for tp in &t.plaquettes {
                let m = tp.verts.len();
                let mut sites = Vec::with_capacity(m);
                let mut bonds = Vec::with_capacity(m);
                for i in 0..m {
                    let (u, cu) = tp.verts[i];
                    let (v, cv) = tp.verts[(i + 1) % m];
                    let d = crate::template::sub(cv, cu);
                    let found = t.find_bond(u, v, d);
                    if found.len() != 1 {
                        return Err(LatticeError::Template(format!("plaquette {}: ambiguous step {}->{}", tp.name, u + 1, v + 1)));
                    }
                    let (k, fwd) = found[0];
                    let owner = if fwd { add(to_i(c), cu) } else { add(to_i(c), cv) };
                    sites.push(g.site_index(wrap(add(to_i(c), cu), dims), u));
                    bonds.push(g.cell_index(wrap(owner, dims)) * nbt + k);
                }
                let mut colors: Vec<Color> = bonds.iter().map(|&b| g.bonds[b].color).collect();
                colors.sort();
                colors.dedup();
                g.plaquettes.push(Plaquette {
                    id: g.plaquettes.len(),
                    name: tp.name.clone(),
                    kind: tp.kind.clone(),
                    cell: c,
                    sites,
                    bonds,
                    colors_used: colors,
                });
            }
        }
        for ci in 0..nc {
            let c = g.cell_coords(ci);
            for tv in &t.volumes {
                let plaquettes = tv
                    .members
                    .iter()
                    .map(|&(p, d)| g.cell_index(wrap(add(to_i(c), d), dims)) * npt + p)
                    .collect();
                let class = if tv.class == "inter" { VolumeClass::Inter } else { VolumeClass::Intra };
                g.volumes.push(VolumeConstraint { id: g.volumes.len(), name: tv.name.clone(), class, cell: c, plaquettes });
            }
        }
        Ok(g)
    }

    fn rebuild_incidence(&mut self) {
        let mut inc = vec![Vec::with_capacity(3); self.n()];
        for (i, b) in self.bonds.iter().enumerate() {
            inc[b.a].push(i);
            inc[b.b].push(i);
        }
        self.incident = inc;
    }

    pub fn n(&self) -> usize {
        self.num_cells() * self.sites_per_cell
    }

    pub fn num_cells(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn cell_index(&self, c: [usize; 3]) -> usize {
        (c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]
    }

    pub fn cell_coords(&self, i: usize) -> [usize; 3] {
        let c2 = i % self.dims[2];
        let r = i / self.dims[2];
        [r / self.dims[1], r % self.dims[1], c2]
    }

    /// Global index of template site `s` in cell `c`. Cells are ordered with the first axis
    /// slowest, so a half cut along that axis is a prefix of the site range.
    pub fn site_index(&self, c: [usize; 3], s: usize) -> usize {
        self.cell_index(c) * self.sites_per_cell + s
    }

    pub fn site_cell(&self, site: usize) -> [usize; 3] {
        self.cell_coords(site / self.sites_per_cell)
    }

    pub fn site_label(&self, site: usize) -> usize {
        site % self.sites_per_cell
    }

    /// Cell parity `(n1 + n2) mod 2`.
    pub fn parity(&self, c: [usize; 3]) -> usize {
        (c[0] + c[1]) % 2
    }

    pub fn incident(&self, site: usize) -> &[usize] {
        &self.incident[site]
    }

    /// The bond of color `c` at `site`, if unique.
    pub fn bond_of_color(&self, site: usize, c: Color) -> Option<usize> {
        let v: Vec<usize> = self.incident[site].iter().copied().filter(|&b| self.bonds[b].color == c).collect();
        if v.len() == 1 {
            Some(v[0])
        } else {
            None
        }
    }

    pub fn other_end(&self, bond: usize, site: usize) -> usize {
        let b = &self.bonds[bond];
        if b.a == site {
            b.b
        } else {
            b.a
        }
    }

    /// Offset accumulated when traversing `bond` starting from `site`.
    pub fn step_offset(&self, bond: usize, site: usize) -> [i32; 3] {
        let b = &self.bonds[bond];
        if b.a == site {
            b.offset
        } else {
            crate::template::sub([0; 3], b.offset)
        }
    }

    pub fn bonds_of_color(&self, c: Color) -> Vec<usize> {
        (0..self.bonds.len()).filter(|&i| self.bonds[i].color == c).collect()
    }

    /// Copy with one bond recolored (fault injection for validation tests).
    pub fn recolored(&self, bond: usize, c: Color) -> Self {
        let mut g = self.clone();
        g.bonds[bond].color = c;
        for p in &mut g.plaquettes {
            if p.bonds.contains(&bond) {
                let mut cols: Vec<Color> = p.bonds.iter().map(|&b| g.bonds[b].color).collect();
                cols.sort();
                cols.dedup();
                p.colors_used = cols;
            }
        }
        g
    }

    /// Bond multiset of a volume constraint, reduced mod 2. Empty means exact cancellation.
    pub fn volume_residue(&self, v: &VolumeConstraint) -> Vec<usize> {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &v.plaquettes {
            for &b in &self.plaquettes[p].bonds {
                *count.entry(b).or_default() += 1;
            }
        }
        count.into_iter().filter(|&(_, k)| k % 2 == 1).map(|(b, _)| b).collect()
    }

    /// Instance fixture text. Site indices are global, plaquettes list their bond ids.
    pub fn to_fixture(&self) -> String {
        let mut s = String::new();
        s.push_str("lattice 1\n");
        s.push_str(&format!("name {}\n", self.name));
        s.push_str(&format!("dims {} {} {}\n", self.dims[0], self.dims[1], self.dims[2]));
        s.push_str(&format!("dim {}\n", self.dim));
        s.push_str(&format!("sites_per_cell {}\n", self.sites_per_cell));
        s.push_str(&format!("parity_colors {}\n", self.parity_colors as u8));
        for b in &self.bonds {
            let t = b.template.map_or("-".to_string(), |t| t.to_string());
            s.push_str(&format!("bond {} {} {} {} {} {} {}\n", b.a, b.b, b.color, b.offset[0], b.offset[1], b.offset[2], t));
        }
        for p in &self.plaquettes {
            let bonds: Vec<String> = p.bonds.iter().map(|b| b.to_string()).collect();
            s.push_str(&format!(
                "plaquette {} {} {} {} {} {} {}\n",
                p.name,
                p.kind,
                p.cell[0],
                p.cell[1],
                p.cell[2],
                p.sites[0],
                bonds.join(",")
            ));
        }
        for v in &self.volumes {
            let ps: Vec<String> = v.plaquettes.iter().map(|b| b.to_string()).collect();
            let class = match v.class {
                VolumeClass::Intra => "intra",
                VolumeClass::Inter => "inter",
            };
            s.push_str(&format!("volume {} {} {} {} {} {}\n", v.name, class, v.cell[0], v.cell[1], v.cell[2], ps.join(",")));
        }
        s
    }

    pub fn from_fixture(text: &str) -> Result<Self, LatticeError> {
        let err = |l: usize, m: &str| LatticeError::Fixture(format!("line {}: {}", l + 1, m));
        let mut g = LatticeGraph {
            name: String::new(),
            dims: [0; 3],
            dim: 0,
            sites_per_cell: 0,
            parity_colors: false,
            bonds: vec![],
            plaquettes: vec![],
            volumes: vec![],
            incident: vec![],
        };
        let mut pending: Vec<(usize, String, String, [usize; 3], usize, Vec<usize>)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.is_empty() || f[0].starts_with('#') {
                continue;
            }
            let u = |s: &str| s.parse::<usize>().map_err(|_| err(ln, &format!("bad integer {:?}", s)));
            let list = |s: &str| s.split(',').map(|x| x.parse::<usize>().map_err(|_| err(ln, "bad list"))).collect::<Result<Vec<_>, _>>();
            match f[0] {
                "lattice" => {
                    if f.get(1) != Some(&"1") {
                        return Err(err(ln, "unsupported fixture version"));
                    }
                }
                "name" if f.len() == 2 => g.name = f[1].to_string(),
                "dims" if f.len() == 4 => g.dims = [u(f[1])?, u(f[2])?, u(f[3])?],
                "dim" if f.len() == 2 => g.dim = u(f[1])?,
                "sites_per_cell" if f.len() == 2 => g.sites_per_cell = u(f[1])?,
                "parity_colors" if f.len() == 2 => g.parity_colors = u(f[1])? != 0,
                "bond" if f.len() == 8 => {
                    let off: Vec<i32> =
                        f[4..7].iter().map(|x| x.parse().map_err(|_| err(ln, "bad offset"))).collect::<Result<_, _>>()?;
                    g.bonds.push(Bond {
                        a: u(f[1])?,
                        b: u(f[2])?,
                        color: f[3].parse().map_err(|_| err(ln, "bad color"))?,
                        offset: [off[0], off[1], off[2]],
                        template: if f[7] == "-" { None } else { Some(u(f[7])?) },
                    });
                }
                "plaquette" if f.len() == 8 => {
                    pending.push((ln, f[1].into(), f[2].into(), [u(f[3])?, u(f[4])?, u(f[5])?], u(f[6])?, list(f[7])?))
                }
                "volume" if f.len() == 7 => {
                    let class = match f[2] {
                        "intra" => VolumeClass::Intra,
                        "inter" => VolumeClass::Inter,
                        _ => return Err(err(ln, "bad volume class")),
                    };
                    g.volumes.push(VolumeConstraint {
                        id: g.volumes.len(),
                        name: f[1].into(),
                        class,
                        cell: [u(f[3])?, u(f[4])?, u(f[5])?],
                        plaquettes: list(f[6])?,
                    });
                }
                _ => return Err(err(ln, "unrecognized record")),
            }
        }
        if g.sites_per_cell == 0 || g.dims.iter().any(|&d| d == 0) {
            return Err(LatticeError::Fixture("header incomplete".into()));
        }
        let n = g.n();
        if g.bonds.iter().any(|b| b.a >= n || b.b >= n) {
            return Err(LatticeError::Fixture("bond endpoint out of range".into()));
        }
        g.rebuild_incidence();
        for (ln, name, kind, cell, start, bonds) in pending {
            if bonds.iter().any(|&b| b >= g.bonds.len()) {
                return Err(err(ln, "plaquette bond out of range"));
            }
            let mut sites = vec![start];
            for &b in &bonds {
                let cur = *sites.last().unwrap();
                let bb = &g.bonds[b];
                if bb.a != cur && bb.b != cur {
                    return Err(err(ln, "plaquette bonds do not form a walk"));
                }
                sites.push(g.other_end(b, cur));
            }
            if sites.pop() != Some(start) {
                return Err(err(ln, "plaquette does not close"));
            }
            let mut colors: Vec<Color> = bonds.iter().map(|&b| g.bonds[b].color).collect();
            colors.sort();
            colors.dedup();
            g.plaquettes.push(Plaquette { id: g.plaquettes.len(), name, kind, cell, sites, bonds, colors_used: colors });
        }
        if g.volumes.iter().any(|v| v.plaquettes.iter().any(|&p| p >= g.plaquettes.len())) {
            return Err(LatticeError::Fixture("volume member out of range".into()));
        }
        Ok(g)
    }
}

fn to_i(c: [usize; 3]) -> [i32; 3] {
    [c[0] as i32, c[1] as i32, c[2] as i32]
}
