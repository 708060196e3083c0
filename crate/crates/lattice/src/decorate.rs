//! Parent-graph decoration: every parent edge becomes a y–z four-cycle and consecutive edge ends
//! around each parent vertex are joined by x bonds.

use kekule_core::Color;

use crate::template::{sub, ColorRule, Template, TemplateBond, TemplatePlaquette};
use crate::LatticeError;

/// A periodic parent graph with a cyclic order of edge ends at every vertex.
#[derive(Clone, Debug)]
pub struct ParentGraph {
    pub name: String,
    pub dim: usize,
    pub vertices: usize,
    /// (u, v, cell of v minus cell of u)
    pub edges: Vec<(usize, usize, [i32; 3])>,
    /// Per vertex, incident edge ends in cyclic order: (edge, true for the u end).
    pub rotation: Vec<Vec<(usize, bool)>>,
}

impl ParentGraph {
    /// Rotation system from planar positions (in cell units): ends sorted by outgoing angle.
    pub fn from_positions(name: &str, positions: &[[f64; 2]], edges: Vec<(usize, usize, [i32; 3])>) -> Self {
        let mut rot: Vec<Vec<(f64, usize, bool)>> = vec![Vec::new(); positions.len()];
        for (e, &(u, v, d)) in edges.iter().enumerate() {
            let pu = positions[u];
            let pv = [positions[v][0] + d[0] as f64, positions[v][1] + d[1] as f64];
            let (dx, dy) = (pv[0] - pu[0], pv[1] - pu[1]);
            rot[u].push((dy.atan2(dx), e, true));
            rot[v].push(((-dy).atan2(-dx), e, false));
        }
        let rotation = rot
            .into_iter()
            .map(|mut r| {
                r.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                r.into_iter().map(|(_, e, u)| (e, u)).collect()
            })
            .collect();
        ParentGraph { name: name.into(), dim: 2, vertices: positions.len(), edges, rotation }
    }

    pub fn square() -> Self {
        ParentGraph {
            name: "square".into(),
            dim: 2,
            vertices: 1,
            edges: vec![(0, 0, [1, 0, 0]), (0, 0, [0, 1, 0])],
            rotation: vec![vec![(0, true), (1, true), (0, false), (1, false)]],
        }
    }

    /// Simple cubic parent with the cyclic order (+x, +y, +z, -x, -y, -z). It has no planar embedding.
    pub fn cubic() -> Self {
        ParentGraph {
            name: "cubic".into(),
            dim: 3,
            vertices: 1,
            edges: vec![(0, 0, [1, 0, 0]), (0, 0, [0, 1, 0]), (0, 0, [0, 0, 1])],
            rotation: vec![vec![(0, true), (1, true), (2, true), (0, false), (1, false), (2, false)]],
        }
    }
}

// sites of edge e: 4e (u,L) 4e+1 (u,R) 4e+2 (v,L) 4e+3 (v,R); all four live in the cell of u
fn end_site(e: usize, u_end: bool, right: bool) -> usize {
    4 * e + if u_end { 0 } else { 2 } + right as usize
}

pub fn decorate(p: &ParentGraph, name: &str) -> Result<Template, LatticeError> {
    for (v, r) in p.rotation.iter().enumerate() {
        if r.is_empty() {
            return Err(LatticeError::Invalid(format!("parent vertex {} has degree 0", v)));
        }
    }
    let fixed = |c| ColorRule::Fixed(c);
    let mut bonds = Vec::new();
    let mut plaquettes = Vec::new();
    for e in 0..p.edges.len() {
        let s = |u, r| end_site(e, u, r);
        bonds.push(TemplateBond { a: s(true, false), b: s(true, true), offset: [0; 3], rule: fixed(Color::Y) });
        bonds.push(TemplateBond { a: s(true, true), b: s(false, false), offset: [0; 3], rule: fixed(Color::Z) });
        bonds.push(TemplateBond { a: s(false, false), b: s(false, true), offset: [0; 3], rule: fixed(Color::Y) });
        bonds.push(TemplateBond { a: s(false, true), b: s(true, false), offset: [0; 3], rule: fixed(Color::Z) });
        plaquettes.push(TemplatePlaquette {
            name: format!("edge{}", e),
            kind: "yz".into(),
            verts: vec![(s(true, false), [0; 3]), (s(true, true), [0; 3]), (s(false, false), [0; 3]), (s(false, true), [0; 3])],
        });
    }
    for (w, rot) in p.rotation.iter().enumerate() {
        // cell holding the sites of an edge end seen from vertex w at cell 0
        let cell = |&(e, u_end): &(usize, bool)| if u_end { [0; 3] } else { sub([0; 3], p.edges[e].2) };
        let d = rot.len();
        let mut verts = Vec::new();
        for k in 0..d {
            let h = rot[k];
            let h2 = rot[(k + 1) % d];
            let (a, ca) = (end_site(h.0, h.1, false), cell(&h));
            let (b, cb) = (end_site(h2.0, h2.1, true), cell(&h2));
            bonds.push(TemplateBond { a, b, offset: sub(cb, ca), rule: fixed(Color::X) });
            verts.push((end_site(h.0, h.1, true), ca));
            verts.push((a, ca));
        }
        plaquettes.push(TemplatePlaquette { name: format!("vertex{}", w), kind: "xy".into(), verts });
    }
    let mut t = Template {
        name: name.into(),
        dim: p.dim,
        sites_per_cell: 4 * p.edges.len(),
        parity_colors: false,
        bonds,
        plaquettes,
        volumes: vec![],
    };
    let faces = trace_faces(&t);
    for (i, verts) in faces.into_iter().enumerate() {
        t.plaquettes.push(TemplatePlaquette { name: format!("face{}", i), kind: "xz".into(), verts });
    }
    Ok(t)
}

/// Closed x–z walks of the cell template, one per translation class. Walks that do not close
/// in the cover (nonplanar parents) are skipped.
fn trace_faces(t: &Template) -> Vec<Vec<(usize, [i32; 3])>> {
    let spc = t.sites_per_cell;
    let step = |s: usize, c: Color| -> (usize, [i32; 3]) {
        for b in &t.bonds {
            if b.rule == ColorRule::Fixed(c) {
                if b.a == s {
                    return (b.b, b.offset);
                }
                if b.b == s {
                    return (b.a, sub([0; 3], b.offset));
                }
            }
        }
        unreachable!("every decorated site has one bond of each color")
    };
    let mut used = vec![false; spc];
    let mut out = Vec::new();
    for s0 in 0..spc {
        if used[s0] {
            continue;
        }
        let mut verts = vec![(s0, [0; 3])];
        let mut cell = [0i32; 3];
        let mut s = s0;
        let mut c = Color::Z;
        let mut closed = false;
        for _ in 0..4 * spc {
            let (nx, off) = step(s, c);
            cell = crate::template::add(cell, off);
            c = if c == Color::Z { Color::X } else { Color::Z };
            s = nx;
            if s == s0 && c == Color::Z && cell == [0; 3] {
                closed = true;
                break;
            }
            verts.push((s, cell));
        }
        for &(v, _) in &verts {
            used[v] = true;
        }
        if closed {
            out.push(verts);
        }
    }
    out
}
