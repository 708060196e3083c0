//! One line per acceptance criterion. Exits nonzero when any criterion fails.

use std::time::Instant;

use kekule_core::{rng, Color};
use kekule_floquet::syndrome::{true_syndromes, Provenance};
use kekule_floquet::{
    build_schedule, initial_state, run_cycle, tjunction_exchange_sign, verify_logical_preservation, ExtractorOptions, LogicalInit, Record,
    SyndromeExtractor, Variant,
};
use kekule_lattice::{build_lattice, plaquette_report, run_suite};
use kekule_majorana::gap::coupling_grid;
use kekule_majorana::{flux_report, gap, gap_map, gapless_window, lieb_gauge, supercell, BlochModel, Couplings, FluxAssignment, Gauge};
use kekule_monitored::components::{component_additivity, components};
use kekule_monitored::sweep::points_map;
use kekule_monitored::trajectory::half_cut;
use kekule_monitored::{edge_scan, run_trajectory, EtaEstimate, InitialState, SimplexPoint, SweepSpec, TrajectoryConfig};
use kekule_stabilizer::crosscheck::run_program;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

type Outcome = (bool, String);

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = build_lattice("kekule3d", [2, 2, 2]).unwrap();
    let suite = run_suite(&g).unwrap();
    let plaq = plaquette_report(&g).unwrap();
    let mut notes = Vec::new();
    let mut ok = suite.coloring.is_valid() && suite.noncommuting == 0;
    let want = [("p1", 2), ("p2", 4), ("p3", 2), ("p4", 4), ("p5", 4), ("p6", 4)];
    for (kind, n) in want {
        let got = plaq.kinds.iter().find(|k| k.kind == kind).map_or(0, |k| k.per_cell);
        if got != n {
            ok = false;
            notes.push(format!("{} has {} per cell", kind, got));
        }
    }
    ok &= plaq.local_independent_per_cell == 12 && plaq.volumes_per_cell == 8 && suite.volume_failures.is_empty();
    let parity = [(Color::X, vec![0]), (Color::Y, vec![1]), (Color::Z, vec![0, 1])];
    for (c, p) in parity {
        let l = suite.loop_summary(c);
        if l.noncontractible != 0 || l.unmatched != 0 || l.parities != p {
            ok = false;
            notes.push(format!("{} loops: {:?}", c, l));
        }
    }
    let kekule_time = start.elapsed();
    let h = run_suite(&build_lattice("hyperhoneycomb", [4, 4, 4]).unwrap()).unwrap();
    let nc: Vec<usize> = Color::ALL.iter().map(|&c| h.loop_summary(c).noncontractible).collect();
    ok &= h.coloring.is_valid() && nc.iter().all(|&k| k >= 1);
    notes.push(format!(
        "kekule3d (2,2,2): {} violations, {} independent + {} volumes per cell, torus rank {} in {:.2?}; hyperhoneycomb (4,4,4) noncontractible x/y/z = {:?}",
        suite.failures().len(),
        plaq.local_independent_per_cell,
        plaq.volumes_per_cell,
        plaq.rank,
        kekule_time,
        nc
    ));
    (ok, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut random, mut plus, mut outcome_bad, mut entropy_checks, mut entropy_bad, mut state_bad) = (0, 0, 0, 0, 0, 0);
    for i in 0..1000 {
        let n = 1 + i % 10;
        let r = run_program(n, 60, &mut rng);
        random += r.random;
        plus += r.random_plus;
        outcome_bad += r.outcome_mismatches;
        entropy_checks += r.entropy_checks;
        entropy_bad += r.entropy_mismatches;
        state_bad += r.state_mismatches;
    }
    let half = random as f64 / 2.0;
    let chi2 = (plus as f64 - half).powi(2) / half + ((random - plus) as f64 - half).powi(2) / half;
    let p = 1.0 - ChiSquared::new(1.0).unwrap().cdf(chi2);
    let ok = outcome_bad == 0 && entropy_bad == 0 && state_bad == 0 && p > 0.01;
    (
        ok,
        format!(
            "1000 programs: {} random outcomes ({} plus, chi2 p = {:.3}), {} outcome mismatches, {}/{} entropy mismatches, {} final-state mismatches",
            random, plus, p, outcome_bad, entropy_bad, entropy_checks, state_bad
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for dims in [[2, 2, 1], [4, 4, 6]] {
        let g = build_lattice("kekule3d", dims).unwrap();
        let n = g.n();
        for v in [Variant::ThreeRound, Variant::TenRound] {
            let s = build_schedule(&g, v).unwrap();
            for init in [LogicalInit::Z, LogicalInit::X] {
                let mut r = rng::stream(3, init as u64);
                let rep = verify_logical_preservation(&g, &s, init, 10, true, &mut r).unwrap();
                let good = rep.k == 3 && rep.identity_every_cycle && rep.isg_failures == 0 && rep.min_rank == n - 3 && rep.max_rank == n - 3;
                if !good {
                    ok = false;
                    notes.push(format!("{:?} {:?} {:?}: {:?}", dims, v, init, (rep.k, rep.identity_every_cycle, rep.isg_failures, rep.min_rank)));
                }
            }
        }
        notes.push(format!("kekule3d {:?} ({} qubits): identity on 3 logicals over 10 cycles, ISG rank n-3 at all code instants", dims, n));
    }
    let g = build_lattice("honeycomb_kitaev_naive", [3, 3, 1]).unwrap();
    let s = build_schedule(&g, Variant::ThreeRound).unwrap();
    let mut r = rng::stream(3, 9);
    let collapse = matches!(verify_logical_preservation(&g, &s, LogicalInit::Z, 3, false, &mut r), Err(e) if e.is_collapse());
    ok &= collapse;
    notes.push(format!("naive Kitaev coloring collapses: {}", collapse));
    (ok, notes.join("; "))
}

fn within(w: Option<(usize, usize)>, lo: usize, hi: usize) -> bool {
    matches!(w, Some((a, b)) if a >= lo && b <= hi)
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let (mut direct, mut inferred, mut checks) = (0, 0, 0);
    for dims in [[2, 2, 1], [2, 2, 2]] {
        let g = build_lattice("kekule3d", dims).unwrap();
        let s = build_schedule(&g, Variant::TenRound).unwrap();
        let ex = SyndromeExtractor::new(&g, &s, ExtractorOptions::ten_round()).unwrap();
        for seed in 0..4u64 {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let signs: Vec<i8> = (0..g.plaquettes.len()).map(|_| if r.gen() { 1 } else { -1 }).collect();
            let (mut t, _) = initial_state(&g, s.closing_color(), LogicalInit::Z, Some(&signs)).unwrap();
            let truth = true_syndromes(&g, &t).unwrap();
            let mut rec = Record::new(s.period());
            // The first cycle only supplies the round that cycle 1 windows may start in.
            for c in 0..2 {
                run_cycle(&mut t, &g, &s, c, &mut rec, &mut r).unwrap();
            }
            let sr = ex.extract(&g, &rec, 1).unwrap();
            if !sr.undetermined().is_empty() {
                ok = false;
                notes.push(format!("{:?} seed {}: {} undetermined", dims, seed, sr.undetermined().len()));
            }
            for e in sr.syndromes.iter().flatten() {
                let placed = match e.kind.as_str() {
                    "p1" | "p3" | "p5" => e.provenance == Provenance::Direct,
                    "p2" => e.provenance == Provenance::Direct && within(e.window, 5, 8),
                    _ => e.provenance == Provenance::VolumeInferred || within(e.window, 3, 5) || within(e.window, 8, 10),
                };
                if !placed || Some(e.value) != truth[e.plaquette] {
                    ok = false;
                    notes.push(format!("{} {:?} window {:?}", g.plaquettes[e.plaquette].name, e.provenance, e.window));
                }
            }
            direct += sr.count(Provenance::Direct);
            inferred += sr.count(Provenance::VolumeInferred);
            checks += sr.redundancy.len();
            ok &= !sr.redundancy.is_empty() && sr.redundancy.iter().all(|c| c.product == 1);
        }
    }
    notes.truncate(6);
    notes.push(format!("{} direct and {} volume-inferred syndromes match the true plaquette signs; {} redundancy products all +1", direct, inferred, checks));
    (ok, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut tested = 0;
    for (name, dims) in [("honeycomb_kitaev", [3, 3, 1]), ("honeycomb_kekule", [2, 2, 1]), ("kekule3d", [2, 2, 2]), ("hyperhoneycomb", [2, 2, 2])] {
        let g = build_lattice(name, dims).unwrap();
        for o in 0..g.n() {
            tested += 1;
            ok &= matches!(tjunction_exchange_sign(&g, o), Ok(-1));
        }
    }
    (ok, format!("exchange sign -1 at all {} vertices of 2 planar and 2 spatial lattices", tested))
}

fn monitored_spec(lattice: &str, l: (usize, usize), trajectories: usize) -> SweepSpec {
    let config = TrajectoryConfig {
        point: SimplexPoint::center(),
        t_eq: 20.0,
        snapshots: 4,
        spacing: 1.0,
        trajectories,
        seed: 6,
        init: InitialState::CodeLines,
    };
    SweepSpec { lattice: lattice.into(), l_small: l.0, l_large: l.1, resolution: 1, config }
}

fn etas(spec: &SweepSpec, pts: &[SimplexPoint]) -> Vec<EtaEstimate> {
    points_map(spec, pts, None).unwrap().points.into_iter().map(|p| p.eta).collect()
}

fn fmt_eta(e: &[EtaEstimate]) -> String {
    e.iter().map(|e| format!("{:.3}", e.eta)).collect::<Vec<_>>().join("/")
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    let corners = [SimplexPoint::corner(Color::X), SimplexPoint::corner(Color::Y), SimplexPoint::corner(Color::Z)];
    let area = |e: &EtaEstimate| (0.9..=1.1).contains(&e.eta);

    let k3 = monitored_spec("kekule3d", (4, 8), 8);
    let hh = monitored_spec("hyperhoneycomb", (8, 12), 8);
    let mut a = true;
    let mut b = true;
    for spec in [&k3, &hh] {
        let c = etas(spec, &corners);
        let m = etas(spec, &[SimplexPoint::center()])[0];
        a &= c.iter().all(area);
        b &= m.eta > 1.15;
        notes.push(format!("{} ({},{}): corners x/y/z {}, center {:.3} +- {:.3}", spec.lattice, spec.l_small, spec.l_large, fmt_eta(&c), m.eta, m.stderr));
    }

    // Edges: flat and exactly component-additive on kekule3d, midpoint peak on hyperhoneycomb.
    let mut c = true;
    let fr = [0.25, 0.5, 0.75];
    for absent in Color::ALL {
        let scan = edge_scan(&k3, absent, &fr, None).unwrap();
        let e: Vec<EtaEstimate> = scan.map.points.iter().map(|p| p.eta).collect();
        c &= e.iter().all(area);
        notes.push(format!("kekule3d edge without {}: {}", absent, fmt_eta(&e)));
    }
    let g = build_lattice("kekule3d", [4, 4, 4]).unwrap();
    let mut mism = 0;
    let mut r = ChaCha8Rng::seed_from_u64(66);
    for absent in Color::ALL {
        let comp = components(&g, absent);
        let st = run_trajectory(&g, SimplexPoint::on_edge(absent, 0.5), InitialState::Product(absent), 10.0, 6, absent.index() as u64).unwrap();
        let mut regions: Vec<Vec<usize>> = vec![(0..half_cut(&g)).collect()];
        regions.extend((0..30).map(|_| (0..g.n()).filter(|_| r.gen_bool(0.3)).collect()));
        for reg in regions {
            let ad = component_additivity(&st, &reg, &comp).unwrap();
            mism += (ad.whole != ad.sum_over_components) as usize;
        }
    }
    c &= mism == 0;
    notes.push(format!("kekule3d (4,4,4) component additivity: {} mismatches over 93 regions", mism));
    let hf: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let scan = edge_scan(&hh, Color::Z, &hf, None).unwrap();
    let e: Vec<EtaEstimate> = scan.map.points.iter().map(|p| p.eta).collect();
    let mid = e[5].eta;
    let peaked = (0.4..=0.6).contains(&scan.peak) && e[..3].iter().chain(&e[8..]).all(|x| x.eta < mid);
    c &= peaked;
    notes.push(format!("hyperhoneycomb edge without z: {} (peak at {})", fmt_eta(&e), scan.peak));

    // Planar Kekule coloring: corners and edges area law, critical only inside.
    let hk = monitored_spec("honeycomb_kekule", (12, 24), 8);
    let edge_pts: Vec<SimplexPoint> = Color::ALL.iter().flat_map(|&c| fr.iter().map(move |&f| SimplexPoint::on_edge(c, f))).collect();
    let ce = etas(&hk, &corners);
    let ee = etas(&hk, &edge_pts);
    let me = etas(&hk, &[SimplexPoint::center()])[0];
    let emax = ee.iter().map(|e| e.eta).fold(0.0, f64::max);
    let d = ce.iter().chain(&ee).all(area) && me.eta > emax;
    notes.push(format!("honeycomb_kekule (12,24): corners {}, edges {}, center {:.3}", fmt_eta(&ce), fmt_eta(&ee), me.eta));

    let parts = [("a", a), ("b", b), ("c", c), ("d", d)];
    let failed: Vec<&str> = parts.iter().filter(|p| !p.1).map(|p| p.0).collect();
    if !failed.is_empty() {
        notes.insert(0, format!("failing parts {:?}", failed));
    }
    (failed.is_empty(), notes.join("; "))
}

fn criterion_7() -> Outcome {
    let thr = 5e-3;
    let g = supercell("kekule3d").unwrap();
    let model = BlochModel::new(&g, &lieb_gauge(&g, FluxAssignment::default()).unwrap());
    let mut notes = Vec::new();
    let iso = gap(&model, &Couplings::isotropic(), 48).unwrap();
    let ends: Vec<f64> = [0.239, 0.411].iter().map(|&jz| gap(&model, &Couplings::on_line(jz), 48).unwrap().delta).collect();
    notes.push(format!("kekule3d k-grid 48: gap {:.3e} at the isotropic point, {:.3e} at Jz = 0.239, {:.3e} at Jz = 0.411", iso.delta, ends[0], ends[1]));
    let window = if iso.is_gapless(thr) { gapless_window(&model, 48, thr, 0.02, 0.0025).unwrap() } else { None };
    let w_ok = match window {
        Some(w) => {
            notes.push(format!("gapless window [{:.4}, {:.4}]", w.lower, w.upper));
            (w.lower - 0.239).abs() <= 0.02 && (w.upper - 0.411).abs() <= 0.02
        }
        None => {
            notes.push("no gapless window through the isotropic point".into());
            false
        }
    };
    // Simplex edges, corners included.
    let mut edge_min = f64::INFINITY;
    for c in Color::ALL {
        for i in 0..4 {
            let t = i as f64 / 4.0;
            let mut v = [0.0; 3];
            v[c.index()] = 0.0;
            v[(c.index() + 1) % 3] = t;
            v[(c.index() + 2) % 3] = 1.0 - t;
            edge_min = edge_min.min(gap(&model, &Couplings::normalized(v[0], v[1], v[2]).unwrap(), 24).unwrap().delta);
        }
    }
    notes.push(format!("smallest gap on the simplex edges {:.3e}", edge_min));
    let hk = supercell("honeycomb_kekule").unwrap();
    let m2 = BlochModel::new(&hk, &lieb_gauge(&hk, FluxAssignment::default()).unwrap());
    let res = 12;
    let map = gap_map(&m2, &coupling_grid(res), 48, thr).unwrap();
    let gl = map.gapless();
    let cell = 1.0 / res as f64 + 1e-9;
    let near = |j: &Couplings| (j.jx - 1.0 / 3.0).abs().max((j.jy - 1.0 / 3.0).abs()).max((j.jz - 1.0 / 3.0).abs()) <= cell;
    let local = !gl.is_empty() && gl.iter().all(near) && gl.iter().any(|j| j == &Couplings::isotropic() || near(j));
    notes.push(format!("honeycomb_kekule: {} gapless of {} grid points, all within one cell of the isotropic point: {}", gl.len(), map.points.len(), local));
    (w_ok && iso.is_gapless(thr) && edge_min >= thr && local, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let g = supercell("kekule3d").unwrap();
    let rep = flux_report(&g, &Gauge::reference(&g).unwrap(), FluxAssignment::default()).unwrap();
    let mut notes = vec![format!("reference signs: Lieb flux violated on {:?}", rep.mismatched())];
    let mut worst: f64 = 0.0;
    let mut r = ChaCha8Rng::seed_from_u64(8);
    for base in [Gauge::reference(&g).unwrap(), lieb_gauge(&g, FluxAssignment::default()).unwrap()] {
        let m0 = BlochModel::new(&g, &base);
        for _ in 0..8 {
            let mut flipped = base.clone();
            for _ in 0..r.gen_range(1..6) {
                flipped.flip_site(&g, r.gen_range(0..g.n()));
            }
            let m1 = BlochModel::new(&g, &flipped);
            let (a, b, c): (f64, f64, f64) = (r.gen(), r.gen(), r.gen());
            let j = Couplings::normalized(a / (a + b + c), b / (a + b + c), 1.0 - a / (a + b + c) - b / (a + b + c)).unwrap();
            let k = [r.gen(), r.gen(), r.gen()];
            for (x, y) in m0.spectrum(&j, k).iter().zip(m1.spectrum(&j, k)) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    notes.push(format!("largest spectral change under site flips {:.1e}", worst));
    (rep.all_ok() && worst < 1e-10, notes.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("lattice verification", criterion_1),
        ("engine oracle equivalence", criterion_2),
        ("Floquet logical preservation", criterion_3),
        ("syndrome completeness", criterion_4),
        ("T-junction sign", criterion_5),
        ("monitored phase structure", criterion_6),
        ("Majorana phase diagram", criterion_7),
        ("gauge and flux consistency", criterion_8),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let t = Instant::now();
        let (ok, detail) = f();
        println!("criterion {} ({}): {} [{:.1?}] {}", i + 1, name, if ok { "PASS" } else { "FAIL" }, t.elapsed(), detail);
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {:?}", failed);
        std::process::exit(1);
    }
}
