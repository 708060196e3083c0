use kekule_core::Color;
use kekule_lattice::{build_lattice, LatticeGraph};
use kekule_monitored::components::{component_additivity, components};
use kekule_monitored::survival::logical_survival;
use kekule_monitored::sweep::dims_for;
use kekule_monitored::trajectory::half_cut;
use kekule_monitored::*;
use kekule_stabilizer::{Pauli, Tableau};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quick(point: SimplexPoint, init: InitialState, trajectories: usize) -> TrajectoryConfig {
    TrajectoryConfig { point, t_eq: 6.0, snapshots: 3, spacing: 1.0, trajectories, seed: 11, init }
}

// Bonds of color c with exactly one end inside the half cut.
fn crossing(g: &LatticeGraph, c: Color) -> usize {
    let m = half_cut(g);
    g.bonds.iter().filter(|b| b.color == c && ((b.a < m) != (b.b < m))).count()
}

#[test]
fn dimerized_limit_counts_cut_bonds() {
    let mut crossed = 0;
    for (name, dims) in [("honeycomb_kitaev", [4, 4, 1]), ("kekule3d", [2, 2, 2]), ("hyperhoneycomb", [2, 2, 2])] {
        let g = build_lattice(name, dims).unwrap();
        for c in Color::ALL {
            // A product state orthogonal to the measured checks; every bond of color c ends up a Bell pair.
            let other = if c == Color::Z { Color::X } else { Color::Z };
            let mut t = Trajectory::new(&g, SimplexPoint::corner(c), InitialState::Product(other), 3, 0).unwrap();
            t.advance(20.0);
            let want = crossing(&g, c);
            crossed += want;
            assert_eq!(t.half_entropy().unwrap(), want, "{} {}", name, c);
        }
    }
    assert!(crossed > 0);
}

#[test]
fn unmeasured_product_state_has_no_entanglement() {
    let g = build_lattice("kekule3d", [2, 2, 1]).unwrap();
    let t = Trajectory::new(&g, SimplexPoint::center(), InitialState::Product(Color::Y), 1, 0).unwrap();
    assert_eq!(t.half_entropy().unwrap(), 0);
    let cfg = TrajectoryConfig { t_eq: 0.0, snapshots: 1, ..quick(SimplexPoint::corner(Color::Y), InitialState::Product(Color::Y), 2) };
    // Measuring YY on a Y product state changes nothing.
    let cfg = TrajectoryConfig { t_eq: 5.0, ..cfg };
    assert_eq!(steady_state_entropy(&g, &cfg, 0).unwrap().mean, 0.0);
}

#[test]
fn code_states_are_full_rank() {
    for (name, dims) in [("kekule3d", [2, 2, 2]), ("honeycomb_kekule", [4, 4, 1])] {
        let g = build_lattice(name, dims).unwrap();
        for init in [InitialState::CodeLines, InitialState::CodeMembranes] {
            let t = Trajectory::new(&g, SimplexPoint::center(), init, 1, 0).unwrap();
            t.state.audit().unwrap();
        }
    }
    // Without a Kekule coloring there are no code logicals, only cycle-basis loops.
    let g = build_lattice("hyperhoneycomb", [2, 2, 2]).unwrap();
    Trajectory::new(&g, SimplexPoint::center(), InitialState::CodeLines, 1, 0).unwrap().state.audit().unwrap();
    assert!(Trajectory::new(&g, SimplexPoint::center(), InitialState::CodeMembranes, 1, 0).is_err());
}

#[test]
fn trajectories_are_reproducible() {
    let g = build_lattice("kekule3d", [2, 2, 1]).unwrap();
    let p = SimplexPoint::new(0.5, 0.25, 0.25).unwrap();
    let a = run_trajectory(&g, p, InitialState::CodeLines, 3.0, 9, 4).unwrap();
    let b = run_trajectory(&g, p, InitialState::CodeLines, 3.0, 9, 4).unwrap();
    let c = run_trajectory(&g, p, InitialState::CodeLines, 3.0, 9, 5).unwrap();
    assert!(a == b);
    assert!(a != c);
    let cfg = quick(p, InitialState::CodeLines, 3);
    let e1 = steady_state_entropy(&g, &cfg, 2).unwrap();
    let e2 = steady_state_entropy(&g, &cfg, 2).unwrap();
    assert_eq!(e1.mean.to_bits(), e2.mean.to_bits());
    assert_eq!(e1.samples, 3);
}

#[test]
fn generator_set_tracks_tableau() {
    // The same check sequence through both engines gives the same entropies.
    let g = build_lattice("honeycomb_kitaev", [3, 2, 1]).unwrap();
    let n = g.n();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gens: Vec<Pauli> = (0..n).map(|q| Pauli::single(n, q, Color::Z)).collect();
    let mut tab = Tableau::from_generators(n, gens.clone()).unwrap();
    let mut gs = kekule_stabilizer::GeneratorSet::from_generators(n, &gens).unwrap();
    for _ in 0..200 {
        let b = &g.bonds[rng.gen_range(0..g.bonds.len())];
        let out = tab.measure(&Pauli::check(n, b.a, b.b, b.color), &mut rng).unwrap();
        let _ = out;
        gs.measure_check(b.a, b.b, b.color);
        let region: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        assert_eq!(tab.entropy(&region).unwrap(), gs.entropy(&region).unwrap());
    }
    gs.audit().unwrap();
}

#[test]
fn equal_sizes_give_unit_ratio() {
    let cfg = quick(SimplexPoint::center(), InitialState::CodeLines, 2);
    let e = two_size_ratio("kekule3d", &cfg, 2, 2, 0).unwrap();
    assert_eq!(e.eta, 1.0);
}

#[test]
fn zero_entropy_is_an_error() {
    let cfg = quick(SimplexPoint::corner(Color::Y), InitialState::Product(Color::Y), 1);
    assert!(matches!(two_size_ratio("kekule3d", &cfg, 2, 4, 0), Err(MonitoredError::ZeroEntropy(2))));
}

#[test]
fn corners_obey_area_law() {
    for c in [Color::X, Color::Z] {
        let cfg = quick(SimplexPoint::corner(c), InitialState::CodeLines, 2);
        let e = two_size_ratio("kekule3d", &cfg, 2, 4, 0).unwrap();
        assert!((0.9..=1.1).contains(&e.eta), "{} corner eta {}", c, e.eta);
    }
    let cfg = quick(SimplexPoint::corner(Color::Y), InitialState::CodeLines, 2);
    let e = two_size_ratio("hyperhoneycomb", &cfg, 4, 8, 0).unwrap();
    assert!((0.9..=1.1).contains(&e.eta), "hyperhoneycomb y corner eta {}", e.eta);
}

#[test]
fn two_dimensional_sizes_scale_linearly() {
    assert_eq!(dims_for("honeycomb_kekule", 12).unwrap(), [12, 12, 1]);
    assert_eq!(dims_for("kekule3d", 4).unwrap(), [4, 4, 4]);
    let cfg = quick(SimplexPoint::corner(Color::X), InitialState::CodeLines, 2);
    let e = two_size_ratio("honeycomb_kekule", &cfg, 4, 8, 0).unwrap();
    assert!((0.9..=1.1).contains(&e.eta), "{}", e.eta);
}

#[test]
fn finite_components_on_kekule3d_edges() {
    let g = build_lattice("kekule3d", [2, 2, 2]).unwrap();
    for absent in Color::ALL {
        let comp = components(&g, absent);
        let k = comp.iter().max().unwrap() + 1;
        // Every component is a finite loop, far fewer sites than the system.
        let mut sizes = vec![0; k];
        for &c in &comp {
            sizes[c] += 1;
        }
        assert!(sizes.iter().all(|&s| s <= 12), "{} {:?}", absent, sizes);
    }
}

#[test]
fn edge_dynamics_are_component_additive() {
    let g = build_lattice("kekule3d", [2, 2, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for absent in Color::ALL {
        let comp = components(&g, absent);
        let init = InitialState::Product(absent);
        let st = run_trajectory(&g, SimplexPoint::on_edge(absent, 0.5), init, 8.0, 3, absent.index() as u64).unwrap();
        let half: Vec<usize> = (0..half_cut(&g)).collect();
        let a = component_additivity(&st, &half, &comp).unwrap();
        assert_eq!(a.whole, a.sum_over_components);
        // The z-deleted loops never straddle the first-axis cut.
        assert_eq!(a.whole > 0, absent != Color::Z);
        for _ in 0..20 {
            let region: Vec<usize> = (0..g.n()).filter(|_| rng.gen_bool(0.3)).collect();
            let a = component_additivity(&st, &region, &comp).unwrap();
            assert_eq!(a.whole, a.sum_over_components);
        }
    }
}

#[test]
fn kekule3d_edge_profile_is_flat() {
    let spec = SweepSpec { lattice: "kekule3d".into(), l_small: 2, l_large: 4, resolution: 1, config: quick(SimplexPoint::center(), InitialState::CodeLines, 2) };
    let scan = edge_scan(&spec, Color::Z, &[0.2, 0.5, 0.8], None).unwrap();
    for p in &scan.map.points {
        assert!((0.9..=1.1).contains(&p.eta.eta), "{:?} {}", p.point, p.eta.eta);
    }
}

#[test]
fn sweep_resumes_from_checkpoint() {
    let dir = std::env::temp_dir().join(format!("kekule-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.jsonl");
    let _ = std::fs::remove_file(&path);
    let spec = SweepSpec { lattice: "honeycomb_kekule".into(), l_small: 2, l_large: 4, resolution: 2, config: quick(SimplexPoint::center(), InitialState::CodeLines, 1) };
    let full = sweep_simplex(&spec, Some(&path)).unwrap();
    assert_eq!(full.points.len(), 6);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    // Drop the last two points and resume.
    std::fs::write(&path, lines[..5].join("\n") + "\n").unwrap();
    let resumed = sweep_simplex(&spec, Some(&path)).unwrap();
    assert_eq!(full.to_csv(), resumed.to_csv());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 7);
    let other = SweepSpec { resolution: 3, ..spec.clone() };
    assert!(matches!(sweep_simplex(&other, Some(&path)), Err(MonitoredError::Checkpoint(_))));
    assert!(full.to_csv().starts_with("px,py,pz,eta,stderr,nsamples,L1,L2\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn logical_loss_slows_with_size() {
    let p = SimplexPoint::new(0.8, 0.1, 0.1).unwrap();
    let small = build_lattice("kekule3d", [2, 2, 1]).unwrap();
    let large = build_lattice("kekule3d", [4, 4, 2]).unwrap();
    let a = logical_survival(&small, p, 40.0, 16, 1).unwrap();
    let b = logical_survival(&large, p, 40.0, 16, 1).unwrap();
    assert_eq!(a.logicals, 3);
    assert!(a.loss_rate > 0.0);
    assert!(b.loss_rate < a.loss_rate, "{} vs {}", a.loss_rate, b.loss_rate);
}

#[test]
fn simplex_points_validate() {
    assert!(SimplexPoint::new(0.5, 0.5, 0.1).is_err());
    assert!(SimplexPoint::new(-0.1, 0.6, 0.5).is_err());
    assert_eq!(simplex_grid(4).len(), 15);
    let e = SimplexPoint::on_edge(Color::Y, 0.25);
    assert_eq!((e.px, e.py, e.pz), (0.25, 0.0, 0.75));
}

proptest! {
    #[test]
    fn pick_follows_probabilities(a in 0.0f64..1.0, b in 0.0f64..1.0, u in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let p = SimplexPoint::new(lo, hi - lo, 1.0 - hi).unwrap_or(SimplexPoint::center());
        let c = p.pick(u);
        prop_assert!(p.prob(c) > 0.0 || u >= p.px + p.py);
        for g in simplex_grid(5) {
            prop_assert!((g.px + g.py + g.pz - 1.0).abs() < 1e-12);
        }
    }
}
