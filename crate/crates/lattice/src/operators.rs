//! Pauli operators attached to lattice structures: bond checks, loop operators, logical lines
//! and membranes.

use std::collections::{HashMap, VecDeque};

use kekule_core::gf2::{self, EchelonBasis};
use kekule_core::{BitRow, Color};
use kekule_stabilizer::Pauli;

use crate::{LatticeError, LatticeGraph};

pub fn check(g: &LatticeGraph, bond: usize) -> Pauli {
    let b = &g.bonds[bond];
    Pauli::check(g.n(), b.a, b.b, b.color)
}

/// Loop operator of a closed bond cycle: the outer-leg Pauli at every visited site, sign +1.
/// Up to a phase this equals the product of the bond checks along the cycle.
pub fn loop_operator(g: &LatticeGraph, sites: &[usize], bonds: &[usize]) -> Pauli {
    let m = bonds.len();
    let mut factors = Vec::with_capacity(m);
    for i in 0..m {
        let prev = bonds[(i + m - 1) % m];
        let next = bonds[i];
        factors.push((sites[i], Color::third(g.bonds[prev].color, g.bonds[next].color)));
    }
    Pauli::from_sites(g.n(), factors, 1)
}

pub fn plaquette_operator(g: &LatticeGraph, p: usize) -> Pauli {
    let pl = &g.plaquettes[p];
    loop_operator(g, &pl.sites, &pl.bonds)
}

/// Product of the bond checks along the cycle, with its exact phase.
pub fn check_product(g: &LatticeGraph, bonds: &[usize]) -> Pauli {
    let mut acc = Pauli::identity(g.n());
    for &b in bonds {
        acc.mul_assign(&check(g, b));
    }
    acc
}

/// All z checks followed by all plaquette operators.
pub fn zz_and_plaquettes(g: &LatticeGraph) -> Vec<Pauli> {
    let mut v: Vec<Pauli> = g.bonds_of_color(Color::Z).into_iter().map(|b| check(g, b)).collect();
    v.extend((0..g.plaquettes.len()).map(|p| plaquette_operator(g, p)));
    v
}

/// Shortest simple cycle winding once around `axis`, as (sites, bonds) with `bonds[i]` leaving
/// `sites[i]`.
pub fn line_cycle(g: &LatticeGraph, axis: usize) -> Result<(Vec<usize>, Vec<usize>), LatticeError> {
    type Key = (usize, [i32; 3]);
    let mut target = [0i32; 3];
    target[axis] = 1;
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    // every winding cycle can be translated to pass through the first cell
    for s0 in 0..g.sites_per_cell {
        let start: Key = (s0, [0; 3]);
        let mut pred: HashMap<Key, (Key, usize)> = HashMap::new();
        let mut depth: HashMap<Key, usize> = HashMap::from([(start, 0)]);
        let mut q = VecDeque::from([start]);
        let mut hit = None;
        'bfs: while let Some(key) = q.pop_front() {
            let d = depth[&key];
            if best.as_ref().is_some_and(|(_, bs)| d + 1 >= bs.len()) {
                break;
            }
            let (s, w) = key;
            let cs = g.site_cell(s);
            for &b in g.incident(s) {
                let t = g.other_end(b, s);
                let off = g.step_offset(b, s);
                let ct = g.site_cell(t);
                let mut wt = w;
                for i in 0..3 {
                    wt[i] += (cs[i] as i32 + off[i] - ct[i] as i32).div_euclid(g.dims[i] as i32);
                }
                let next = (t, wt);
                if depth.contains_key(&next) || wt.iter().any(|x| x.abs() > 1) {
                    continue;
                }
                depth.insert(next, d + 1);
                pred.insert(next, (key, b));
                if next == (s0, target) {
                    hit = Some(next);
                    break 'bfs;
                }
                q.push_back(next);
            }
        }
        let Some(mut key) = hit else { continue };
        let mut sites = Vec::new();
        let mut bonds = Vec::new();
        while key != start {
            let (prev, b) = pred[&key];
            sites.push(prev.0);
            bonds.push(b);
            key = prev;
        }
        sites.reverse();
        bonds.reverse();
        let mut uniq = sites.clone();
        uniq.sort_unstable();
        uniq.dedup();
        if uniq.len() == sites.len() && best.as_ref().map_or(true, |(_, bs)| bonds.len() < bs.len()) {
            best = Some((sites, bonds));
        }
    }
    best.ok_or_else(|| LatticeError::Invalid(format!("no simple winding cycle along axis {}", axis)))
}

#[derive(Clone, Debug)]
pub struct LogicalSet {
    pub label: Color,
    /// Axis of each retained logical pair.
    pub axes: Vec<usize>,
    pub lines: Vec<Pauli>,
    pub line_bonds: Vec<Vec<usize>>,
    pub membranes: Vec<Pauli>,
}

/// Checks of color `label` together with all plaquette operators.
pub fn isg_at(g: &LatticeGraph, label: Color) -> Vec<Pauli> {
    let mut v: Vec<Pauli> = g.bonds_of_color(label).into_iter().map(|b| check(g, b)).collect();
    v.extend((0..g.plaquettes.len()).map(|p| plaquette_operator(g, p)));
    v
}

fn basis_of(ops: &[Pauli], n: usize) -> EchelonBasis {
    let mut b = EchelonBasis::new(2 * n, 0);
    for p in ops {
        b.insert(&p.symplectic());
    }
    b
}

/// Sites of bonds that cross the periodic seam perpendicular to `axis`.
fn seam_bonds(g: &LatticeGraph, axis: usize) -> Vec<usize> {
    (0..g.bonds.len())
        .filter(|&i| {
            let b = &g.bonds[i];
            let c = g.site_cell(b.a)[axis] as i32 + b.offset[axis];
            c < 0 || c >= g.dims[axis] as i32
        })
        .collect()
}

/// Line and membrane logical operators for the code whose stabilizer group is generated by the
/// checks of color `label` and the plaquettes. Lines that already lie in that group are dropped.
pub fn logical_operators(g: &LatticeGraph, label: Color) -> Result<LogicalSet, LatticeError> {
    let n = g.n();
    let isg = isg_at(g, label);
    let mut basis = basis_of(&isg, n);
    let isg_rank = basis.dim();
    let mut axes = Vec::new();
    let mut lines = Vec::new();
    let mut line_bonds = Vec::new();
    for axis in 0..g.dim {
        let (sites, bonds) = line_cycle(g, axis)?;
        let l = loop_operator(g, &sites, &bonds);
        if basis.insert(&l.symplectic()) {
            axes.push(axis);
            lines.push(l);
            line_bonds.push(bonds);
        }
    }
    if isg_rank + lines.len() != n {
        return Err(LatticeError::Invalid(format!(
            "stabilizer rank {} plus {} lines does not reach {} qubits",
            isg_rank,
            lines.len(),
            n
        )));
    }
    let mut membranes = Vec::new();
    for (k, &axis) in axes.iter().enumerate() {
        let m = membrane(g, label, &isg, &lines, &membranes, k, axis)?;
        membranes.push(m);
    }
    Ok(LogicalSet { label, axes, lines, line_bonds, membranes })
}

fn is_conjugate(m: &Pauli, commute: &[&[Pauli]], lines: &[Pauli], k: usize) -> bool {
    commute.iter().all(|set| set.iter().all(|s| !s.anticommutes(m))) && lines.iter().enumerate().all(|(j, l)| l.anticommutes(m) == (j == k))
}

fn membrane(
    g: &LatticeGraph,
    label: Color,
    isg: &[Pauli],
    lines: &[Pauli],
    prior: &[Pauli],
    k: usize,
    axis: usize,
) -> Result<Pauli, LatticeError> {
    let n = g.n();
    let seam = seam_bonds(g, axis);
    // substitution rule: one endpoint of every crossing bond carries the label's Pauli
    let direct = Pauli::from_sites(n, seam.iter().map(|&b| (g.bonds[b].a, label)), 1);
    if is_conjugate(&direct, &[isg, prior], lines, k) {
        return Ok(direct);
    }
    // otherwise solve for a conjugate supported near the seam, widening the slab if needed
    for width in 1..=g.dims[axis] {
        let support: Vec<usize> = (0..n)
            .filter(|&s| {
                let c = g.site_cell(s)[axis];
                c < width || c + width >= g.dims[axis]
            })
            .collect();
        let nv = 2 * support.len();
        let mut eqs = Vec::new();
        let mut rhs = Vec::new();
        let mut row_for = |o: &Pauli, want: bool| {
            let mut r = BitRow::zeros(nv);
            for (j, &q) in support.iter().enumerate() {
                // variable 2j is the x bit, 2j+1 the z bit of the unknown at q
                if o.z.get(q) {
                    r.set(2 * j, true);
                }
                if o.x.get(q) {
                    r.set(2 * j + 1, true);
                }
            }
            eqs.push(r);
            rhs.push(want);
        };
        for s in isg.iter().chain(prior) {
            row_for(s, false);
        }
        for (j, l) in lines.iter().enumerate() {
            row_for(l, j == k);
        }
        if let Some(x) = gf2::solve_system(nv, &eqs, &rhs) {
            let mut m = Pauli::identity(n);
            for (j, &q) in support.iter().enumerate() {
                if x.get(2 * j) {
                    m.x.set(q, true);
                }
                if x.get(2 * j + 1) {
                    m.z.set(q, true);
                }
            }
            let m = m.with_sign(1);
            debug_assert!(is_conjugate(&m, &[isg, prior], lines, k));
            return Ok(m);
        }
    }
    Err(LatticeError::Invalid(format!("no membrane conjugate to line {} at label {}", k, label)))
}

/// Loop operators of a fundamental cycle basis (BFS spanning forest).
pub fn cycle_basis_loops(g: &LatticeGraph) -> Vec<Pauli> {
    let n = g.n();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; g.bonds.len()];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut q = VecDeque::from([root]);
        while let Some(s) = q.pop_front() {
            for &b in g.incident(s) {
                let t = g.other_end(b, s);
                if depth[t] == usize::MAX {
                    depth[t] = depth[s] + 1;
                    parent[t] = Some((s, b));
                    tree[b] = true;
                    q.push_back(t);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (bi, b) in g.bonds.iter().enumerate() {
        if tree[bi] {
            continue;
        }
        // climb from both ends to the common ancestor
        let (mut u, mut v) = (b.a, b.b);
        let mut left = vec![(u, usize::MAX)];
        let mut right = vec![(v, usize::MAX)];
        while u != v {
            if depth[u] >= depth[v] {
                let (p, pb) = parent[u].unwrap();
                left.last_mut().unwrap().1 = pb;
                left.push((p, usize::MAX));
                u = p;
            } else {
                let (p, pb) = parent[v].unwrap();
                right.last_mut().unwrap().1 = pb;
                right.push((p, usize::MAX));
                v = p;
            }
        }
        // cycle: a -> ... -> lca <- ... <- b -> a
        let mut sites = Vec::new();
        let mut bonds = Vec::new();
        for &(s, pb) in &left[..left.len() - 1] {
            sites.push(s);
            bonds.push(pb);
        }
        sites.push(u);
        let rr: Vec<(usize, usize)> = right[..right.len() - 1].to_vec();
        for &(s, pb) in rr.iter().rev() {
            bonds.push(pb);
            sites.push(s);
        }
        bonds.push(bi);
        if b.a == b.b {
            continue;
        }
        out.push(loop_operator(g, &sites, &bonds));
    }
    out
}

/// Independent generators of the pure state stabilized by all z checks and by all loop
/// operators, offered in the order z checks, plaquettes, cycle basis.
pub fn loop_state_generators(g: &LatticeGraph) -> Result<Vec<Pauli>, LatticeError> {
    let n = g.n();
    let mut basis = EchelonBasis::new(2 * n, 0);
    let mut out = Vec::with_capacity(n);
    let mut offer = |p: Pauli, out: &mut Vec<Pauli>| {
        if out.len() < n && basis.insert(&p.symplectic()) {
            out.push(p);
        }
    };
    for p in zz_and_plaquettes(g) {
        offer(p, &mut out);
    }
    for p in cycle_basis_loops(g) {
        offer(p, &mut out);
    }
    if out.len() != n {
        return Err(LatticeError::Invalid(format!("loop state has rank {} < {}", out.len(), n)));
    }
    Ok(out)
}
