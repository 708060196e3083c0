//! Per-cell lattice templates and their text format.

use kekule_core::Color;

use crate::LatticeError;

/// How a template bond picks its color in a given cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorRule {
    Fixed(Color),
    /// Color depends on the parity `(n1 + n2) mod 2` of the cell holding site `a`.
    Parity { even: Color, odd: Color },
}

impl ColorRule {
    pub fn color(&self, parity: usize) -> Color {
        match *self {
            ColorRule::Fixed(c) => c,
            ColorRule::Parity { even, odd } => {
                if parity % 2 == 0 {
                    even
                } else {
                    odd
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateBond {
    pub a: usize,
    pub b: usize,
    /// Cell of `b` minus cell of `a`.
    pub offset: [i32; 3],
    pub rule: ColorRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplatePlaquette {
    pub name: String,
    pub kind: String,
    /// Boundary vertices as (site, cell offset from the plaquette's base cell).
    pub verts: Vec<(usize, [i32; 3])>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateVolume {
    pub name: String,
    pub class: String,
    /// Member plaquettes as (template plaquette index, translation).
    pub members: Vec<(usize, [i32; 3])>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub dim: usize,
    pub sites_per_cell: usize,
    pub parity_colors: bool,
    pub bonds: Vec<TemplateBond>,
    pub plaquettes: Vec<TemplatePlaquette>,
    pub volumes: Vec<TemplateVolume>,
}

pub(crate) fn add(a: [i32; 3], b: [i32; 3]) -> [i32; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn sub(a: [i32; 3], b: [i32; 3]) -> [i32; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl Template {
    /// Template bond joining (u at cell 0) to (v at `dv`), with its orientation (true if stored as u→v).
    pub fn find_bond(&self, u: usize, v: usize, dv: [i32; 3]) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, b) in self.bonds.iter().enumerate() {
            if b.a == u && b.b == v && b.offset == dv {
                out.push((i, true));
            } else if b.b == u && b.a == v && b.offset == sub([0; 3], dv) {
                out.push((i, false));
            }
        }
        out
    }

    /// Lifts a cycle given by site labels to explicit cell offsets, requiring a unique bond between
    /// consecutive sites and a closed walk.
    pub fn walk_cycle(&self, sites: &[usize]) -> Result<Vec<(usize, [i32; 3])>, LatticeError> {
        let mut cell = [0i32; 3];
        let mut out = Vec::with_capacity(sites.len());
        for i in 0..sites.len() {
            let (u, v) = (sites[i], sites[(i + 1) % sites.len()]);
            out.push((u, cell));
            let cands: Vec<[i32; 3]> = self
                .bonds
                .iter()
                .filter_map(|b| {
                    if b.a == u && b.b == v {
                        Some(b.offset)
                    } else if b.b == u && b.a == v {
                        Some(sub([0; 3], b.offset))
                    } else {
                        None
                    }
                })
                .collect();
            if cands.len() != 1 {
                return Err(LatticeError::Template(format!("{} bonds between sites {} and {}", cands.len(), u + 1, v + 1)));
            }
            cell = add(cell, cands[0]);
        }
        if cell != [0; 3] {
            return Err(LatticeError::Template(format!("cycle {:?} does not close", sites)));
        }
        Ok(out)
    }

    pub fn plaquette_index(&self, name: &str) -> Option<usize> {
        self.plaquettes.iter().position(|p| p.name == name)
    }

    /// Parses the cell template format. Site labels in the file are 1-based.
    pub fn parse(text: &str) -> Result<Template, LatticeError> {
        let err = |l: usize, m: &str| LatticeError::Template(format!("line {}: {}", l + 1, m));
        let mut t = Template {
            name: String::new(),
            dim: 0,
            sites_per_cell: 0,
            parity_colors: false,
            bonds: vec![],
            plaquettes: vec![],
            volumes: vec![],
        };
        let mut raw_plaq: Vec<(usize, String, String, Vec<usize>)> = Vec::new();
        let mut raw_vol: Vec<(usize, Vec<String>)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<i64>().map_err(|_| err(ln, &format!("bad number {:?}", s)));
            match f[0] {
                "version" => {
                    if f.get(1) != Some(&"1") {
                        return Err(err(ln, "unsupported version"));
                    }
                }
                "name" => t.name = f.get(1).ok_or_else(|| err(ln, "missing name"))?.to_string(),
                "dim" => t.dim = num(f.get(1).unwrap_or(&""))? as usize,
                "sites_per_cell" => t.sites_per_cell = num(f.get(1).unwrap_or(&""))? as usize,
                "parity_colors" => t.parity_colors = num(f.get(1).unwrap_or(&""))? != 0,
                "bond" => {
                    if f.len() != 8 {
                        return Err(err(ln, "bond needs a b color_even color_odd d1 d2 d3"));
                    }
                    let a = num(f[1])? as usize;
                    let b = num(f[2])? as usize;
                    if a == 0 || b == 0 {
                        return Err(err(ln, "site labels start at 1"));
                    }
                    let ce: Color = f[3].parse().map_err(|_| err(ln, "bad color"))?;
                    let co: Color = f[4].parse().map_err(|_| err(ln, "bad color"))?;
                    let rule = if ce == co { ColorRule::Fixed(ce) } else { ColorRule::Parity { even: ce, odd: co } };
                    let offset = [num(f[5])? as i32, num(f[6])? as i32, num(f[7])? as i32];
                    t.bonds.push(TemplateBond { a: a - 1, b: b - 1, offset, rule });
                }
                "plaquette" => {
                    if f.len() < 5 {
                        return Err(err(ln, "plaquette needs name type and at least two sites"));
                    }
                    let mut sites = Vec::new();
                    for s in &f[3..] {
                        sites.push(num(s)? as usize - 1);
                    }
                    raw_plaq.push((ln, f[1].to_string(), f[2].to_string(), sites));
                }
                "volume" => raw_vol.push((ln, f[1..].iter().map(|s| s.to_string()).collect())),
                other => return Err(err(ln, &format!("unknown record {:?}", other))),
            }
        }
        for (ln, name, kind, sites) in raw_plaq {
            let verts = t.walk_cycle(&sites).map_err(|e| err(ln, &e.to_string()))?;
            t.plaquettes.push(TemplatePlaquette { name, kind, verts });
        }
        for (ln, f) in raw_vol {
            if f.len() < 3 {
                return Err(err(ln, "volume needs name class members"));
            }
            let mut members = Vec::new();
            for m in &f[2..] {
                let (p, d) = m.split_once('@').ok_or_else(|| err(ln, "member must be name@d1,d2,d3"))?;
                let idx = t.plaquette_index(p).ok_or_else(|| err(ln, &format!("unknown plaquette {}", p)))?;
                let d: Vec<i32> = d.split(',').map(|x| x.parse().map_err(|_| err(ln, "bad translation"))).collect::<Result<_, _>>()?;
                if d.len() != 3 {
                    return Err(err(ln, "translation needs three components"));
                }
                members.push((idx, [d[0], d[1], d[2]]));
            }
            t.volumes.push(TemplateVolume { name: f[0].clone(), class: f[1].clone(), members });
        }
        if t.name.is_empty() || t.sites_per_cell == 0 || !(2..=3).contains(&t.dim) {
            return Err(LatticeError::Template("header incomplete".into()));
        }
        if t.bonds.iter().any(|b| b.a >= t.sites_per_cell || b.b >= t.sites_per_cell) {
            return Err(LatticeError::Template("site label exceeds sites_per_cell".into()));
        }
        Ok(t)
    }
}
