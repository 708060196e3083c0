use kekule_core::Color;
use kekule_floquet::protocol::{initial_state, run_round, Record};
use kekule_floquet::syndrome::{true_syndromes, Provenance};
use kekule_floquet::tjunction::relative_phase;
use kekule_floquet::*;
use kekule_lattice::build_lattice;
use kekule_lattice::operators::check;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn k3(dims: [usize; 3]) -> kekule_lattice::LatticeGraph {
    build_lattice("kekule3d", dims).unwrap()
}

#[test]
fn ten_round_schedule_shape() {
    let g = k3([2, 2, 1]);
    let s = build_schedule(&g, Variant::TenRound).unwrap();
    let sizes: Vec<usize> = s.rounds.iter().map(|r| r.bonds.len()).collect();
    assert_eq!(sizes, vec![48, 48, 48, 12, 48, 32, 32, 48, 12, 48]);
    let labels: Vec<&str> = s.rounds.iter().map(|r| r.label.name()).collect();
    assert_eq!(labels, ["z", "x", "y", "z_intra_even", "x", "z_p2", "y_p2", "x", "z_inter_even", "y"]);
    for r in &s.rounds {
        for &b in &r.bonds {
            assert_eq!(g.bonds[b].color, r.label.color());
        }
        for (i, &a) in r.bonds.iter().enumerate() {
            for &b in &r.bonds[..i] {
                assert!(!check(&g, a).anticommutes(&check(&g, b)));
            }
        }
        if r.label.is_full() {
            assert_eq!(r.bonds, g.bonds_of_color(r.label.color()));
        }
    }
    // intra round: per even cell the four listed pairs, per odd cell only the verticals
    let mut per_cell = std::collections::BTreeMap::new();
    for &b in &s.rounds[3].bonds {
        let bd = &g.bonds[b];
        let (u, v) = (g.site_label(bd.a) + 1, g.site_label(bd.b) + 1);
        per_cell.entry(g.site_cell(bd.a)).or_insert_with(Vec::new).push((u.min(v), u.max(v)));
    }
    for (c, mut pairs) in per_cell {
        pairs.sort();
        let want: Vec<(usize, usize)> =
            if g.parity(c) == 0 { vec![(3, 4), (9, 21), (10, 22), (15, 16)] } else { vec![(9, 21), (10, 22)] };
        assert_eq!(pairs, want, "cell {:?}", c);
    }
}

#[test]
fn ten_round_needs_kekule3d() {
    let g = build_lattice("honeycomb_kekule", [2, 2, 1]).unwrap();
    assert!(build_schedule(&g, Variant::TenRound).is_err());
    let s = build_schedule(&g, Variant::ThreeRound).unwrap();
    assert_eq!(s.rounds.iter().map(|r| r.label.color()).collect::<Vec<_>>(), vec![Color::Z, Color::X, Color::Y]);
}

#[test]
fn repeated_checks_after_full_round_are_deterministic() {
    let g = k3([2, 2, 1]);
    let s = build_schedule(&g, Variant::TenRound).unwrap();
    let (mut t, _) = initial_state(&g, Color::Y, LogicalInit::Z, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rec = Record::new(s.period());
    run_cycle(&mut t, &g, &s, 0, &mut rec, &mut rng).unwrap();
    run_round(&mut t, &g, &s, 1, 0, &mut rec, &mut rng).unwrap();
    assert_eq!(rec.len(), s.rounds.iter().map(|r| r.bonds.len()).sum::<usize>() + 48);
    for m in rec.round(1, 0).unwrap() {
        let o = t.measure(&check(&g, m.bond), &mut rng).unwrap();
        assert!(o.deterministic);
        assert_eq!(o.value, m.outcome);
    }
}

#[test]
fn kekule3d_logicals_survive_both_schedules() {
    let g = k3([2, 2, 1]);
    for variant in [Variant::ThreeRound, Variant::TenRound] {
        let s = build_schedule(&g, variant).unwrap();
        let mut z = None;
        let mut x = None;
        for init in [LogicalInit::Z, LogicalInit::X] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let r = verify_logical_preservation(&g, &s, init, 10, true, &mut rng).unwrap();
            assert_eq!(r.k, 3);
            assert!(r.identity_every_cycle, "{:?} {:?}: {:?}", variant, init, r.actions.last());
            assert_eq!(r.isg_failures, 0, "{:?} {:?}", variant, init);
            assert_eq!((r.min_rank, r.max_rank), (g.n() - 3, g.n() - 3));
            match init {
                LogicalInit::Z => z = Some(r),
                LogicalInit::X => x = Some(r),
            }
        }
        let to_rows = |a: &Vec<Vec<u8>>| -> Vec<kekule_core::BitRow> { a.iter().map(|r| kekule_core::BitRow::from_indices(r.len(), (0..r.len()).filter(|&i| r[i] == 1))).collect() };
        let m = protocol::automorphism(&to_rows(z.unwrap().actions.last().unwrap()), &to_rows(x.unwrap().actions.last().unwrap()));
        assert!(protocol::is_identity(&m));
    }
}

#[test]
fn honeycomb_kekule_three_round_has_period_two_action() {
    let g = build_lattice("honeycomb_kekule", [2, 2, 1]).unwrap();
    let s = build_schedule(&g, Variant::ThreeRound).unwrap();
    for init in [LogicalInit::Z, LogicalInit::X] {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = verify_logical_preservation(&g, &s, init, 6, true, &mut rng).unwrap();
        assert_eq!(r.k, 2);
        // outer logicals pick up inner ones on odd cycles and return after two
        let offset = if init == LogicalInit::Z { 0 } else { 2 };
        for (c, a) in r.actions.iter().enumerate() {
            let identity = a.iter().enumerate().all(|(i, row)| (0..4).all(|j| row[j] == (j == i + offset) as u8));
            assert_eq!(identity, init == LogicalInit::Z || c % 2 == 1, "cycle {} {:?}", c, a);
        }
        assert_eq!(r.isg_failures, 0);
    }
}

#[test]
fn naive_kitaev_cycle_collapses() {
    let g = build_lattice("honeycomb_kitaev_naive", [3, 3, 1]).unwrap();
    let s = build_schedule(&g, Variant::ThreeRound).unwrap();
    for init in [LogicalInit::Z, LogicalInit::X] {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let e = verify_logical_preservation(&g, &s, init, 3, false, &mut rng).unwrap_err();
        assert!(e.is_collapse(), "{}", e);
    }
}

fn random_signs(g: &kekule_lattice::LatticeGraph, seed: u64) -> Vec<i8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.plaquettes.len()).map(|_| if rng.gen() { 1 } else { -1 }).collect()
}

#[test]
fn ten_round_cycle_determines_every_syndrome() {
    for dims in [[2, 2, 1], [2, 2, 2]] {
        let g = k3(dims);
        let s = build_schedule(&g, Variant::TenRound).unwrap();
        let ex = SyndromeExtractor::new(&g, &s, ExtractorOptions::default()).unwrap();
        for seed in 0..3 {
            let signs = random_signs(&g, seed);
            let (mut t, _) = initial_state(&g, Color::Y, LogicalInit::Z, Some(&signs)).unwrap();
            let truth = true_syndromes(&g, &t).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let mut rec = Record::new(s.period());
            for c in 0..2 {
                run_cycle(&mut t, &g, &s, c, &mut rec, &mut rng).unwrap();
            }
            assert_eq!(true_syndromes(&g, &t).unwrap(), truth);
            let sr = ex.extract(&g, &rec, 1).unwrap();
            assert!(sr.undetermined().is_empty(), "{:?}", sr.undetermined());
            for (p, e) in sr.syndromes.iter().enumerate() {
                assert_eq!(Some(e.as_ref().unwrap().value), truth[p], "plaquette {} ({})", p, g.plaquettes[p].name);
            }
            assert!(!sr.redundancy.is_empty());
            assert!(sr.redundancy.iter().all(|r| r.product == 1));
            for e in sr.syndromes.iter().flatten() {
                if ["p1", "p3", "p5"].contains(&e.kind.as_str()) {
                    assert_eq!(e.provenance, Provenance::Direct, "{}", g.plaquettes[e.plaquette].name);
                }
            }
        }
    }
}

#[test]
fn three_round_record_leaves_gaps() {
    let g = k3([2, 2, 1]);
    let s = build_schedule(&g, Variant::ThreeRound).unwrap();
    let ex = SyndromeExtractor::new(&g, &s, ExtractorOptions::default()).unwrap();
    let (mut t, _) = initial_state(&g, Color::Y, LogicalInit::Z, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rec = Record::new(s.period());
    for c in 0..2 {
        run_cycle(&mut t, &g, &s, c, &mut rec, &mut rng).unwrap();
    }
    let sr = ex.extract(&g, &rec, 1).unwrap();
    let mut missing: Vec<&str> = sr.undetermined().iter().map(|&p| g.plaquettes[p].kind.as_str()).collect();
    missing.sort();
    missing.dedup();
    assert_eq!(missing, ["p2", "p4", "p6"]);
    assert!(ex.extract(&g, &rec, 5).is_err());
}

#[test]
fn tjunction_sign_is_fermionic() {
    for (name, dims) in [("kekule3d", [2, 2, 1]), ("honeycomb_kitaev", [2, 2, 1]), ("honeycomb_kekule", [1, 1, 1]), ("hyperhoneycomb", [2, 2, 2])] {
        let g = build_lattice(name, dims).unwrap();
        for o in 0..g.n() {
            assert_eq!(tjunction_exchange_sign(&g, o).unwrap(), -1, "{} site {}", name, o);
        }
    }
    let g = build_lattice("honeycomb_kitaev", [2, 2, 1]).unwrap();
    let a = check(&g, 0);
    let b = check(&g, 1);
    assert_eq!(relative_phase(&[&a, &a], &[&a, &a]), 1);
    assert_eq!(relative_phase(&[&a, &b], &[&b, &a]), if a.anticommutes(&b) { -1 } else { 1 });
}

#[test]
fn restricted_windows_fall_back_to_volumes() {
    let g = k3([2, 2, 1]);
    let s = build_schedule(&g, Variant::TenRound).unwrap();
    let free = SyndromeExtractor::new(&g, &s, ExtractorOptions::default()).unwrap();
    let ex = SyndromeExtractor::new(&g, &s, ExtractorOptions::ten_round()).unwrap();
    assert!(ex.formulas.iter().flatten().count() < free.formulas.iter().flatten().count());
    let (mut t, _) = initial_state(&g, Color::Y, LogicalInit::X, Some(&random_signs(&g, 4))).unwrap();
    let truth = true_syndromes(&g, &t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut rec = Record::new(s.period());
    for c in 0..2 {
        run_cycle(&mut t, &g, &s, c, &mut rec, &mut rng).unwrap();
    }
    let sr = ex.extract(&g, &rec, 1).unwrap();
    assert!(sr.undetermined().is_empty());
    for e in sr.syndromes.iter().flatten() {
        assert_eq!(Some(e.value), truth[e.plaquette]);
        if let Some((a, b)) = e.window {
            assert!(kekule_floquet::syndrome::ten_round_windows(&e.kind, a, b), "{} read from {}..{}", e.kind, a, b);
        }
    }
}
