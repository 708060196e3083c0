use kekule_core::Color;
use kekule_lattice::decorate::{decorate, ParentGraph};
use kekule_lattice::{build_lattice, color_deletion_components, validate_coloring, LatticeGraph};
use proptest::prelude::*;

/// Periodic k x m grid with optional diagonals per square: 0 none, 1 rising, 2 falling.
fn grid_parent(k: usize, m: usize, diag: &[u8]) -> ParentGraph {
    let idx = |i: usize, j: usize| i * m + j;
    let mut pos = Vec::new();
    for i in 0..k {
        for j in 0..m {
            pos.push([i as f64 / k as f64, j as f64 / m as f64]);
        }
    }
    let wrap = |i: usize, n: usize| if i + 1 == n { (0, 1) } else { (i + 1, 0) };
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..m {
            let (i1, di) = wrap(i, k);
            let (j1, dj) = wrap(j, m);
            edges.push((idx(i, j), idx(i1, j), [di, 0, 0]));
            edges.push((idx(i, j), idx(i, j1), [0, dj, 0]));
            match diag[i * m + j] % 3 {
                1 => edges.push((idx(i, j), idx(i1, j1), [di, dj, 0])),
                2 => edges.push((idx(i1, j), idx(i, j1), [-di, dj, 0])),
                _ => {}
            }
        }
    }
    ParentGraph::from_positions("grid", &pos, edges)
}

fn check_decoration(p: &ParentGraph) -> Result<(), TestCaseError> {
    let t = decorate(p, "decorated").unwrap();
    let g = LatticeGraph::from_template(&t, [1, 1, 1]).unwrap();
    let v = p.vertices;
    let e = p.edges.len();
    prop_assert!(validate_coloring(&g).is_valid());
    prop_assert_eq!(g.n(), 4 * e);

    let dx = color_deletion_components(&g, Color::X).unwrap();
    prop_assert_eq!(dx.components.len(), e);
    for c in &dx.components {
        prop_assert_eq!(c.bonds.len(), 4);
        prop_assert!(c.is_finite());
        // all four sites belong to one parent edge
        prop_assert!(c.sites.iter().all(|&s| s / 4 == c.sites[0] / 4));
    }

    let dz = color_deletion_components(&g, Color::Z).unwrap();
    prop_assert_eq!(dz.components.len(), v);
    prop_assert_eq!(dz.noncontractible(), 0);

    // planar faces on the torus: V - E + F = 0
    let dy = color_deletion_components(&g, Color::Y).unwrap();
    prop_assert_eq!(dy.components.len(), e - v);
    prop_assert_eq!(dy.noncontractible(), 0);
    prop_assert_eq!(g.plaquettes.len(), v + e + (e - v));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn random_planar_parents_decorate_correctly(k in 1usize..4, m in 1usize..4, diag in proptest::collection::vec(0u8..3, 9)) {
        check_decoration(&grid_parent(k, m, &diag))?;
    }
}

#[test]
fn square_parent_gives_square_octagon() {
    let g = build_lattice("square_octagon", [3, 3, 1]).unwrap();
    assert!(validate_coloring(&g).is_valid());
    let mut by_len = std::collections::BTreeMap::new();
    for p in &g.plaquettes {
        *by_len.entry(p.perimeter()).or_insert(0) += 1;
    }
    // per cell: one square per parent edge, an octagon around the vertex and one in the face
    assert_eq!(by_len.into_iter().collect::<Vec<_>>(), vec![(4, 18), (8, 18)]);
}

#[test]
fn cubic_decoration_leaves_chains_after_y_deletion() {
    let g = build_lattice("cubic_decorated", [3, 3, 3]).unwrap();
    assert!(validate_coloring(&g).is_valid());
    let d = color_deletion_components(&g, Color::Y).unwrap();
    assert!(d.noncontractible() > 0);
}

#[test]
fn isolated_vertex_is_rejected() {
    let p = ParentGraph { name: "bad".into(), dim: 2, vertices: 2, edges: vec![(0, 0, [1, 0, 0])], rotation: vec![vec![(0, true), (0, false)], vec![]] };
    assert!(decorate(&p, "bad").is_err());
}
