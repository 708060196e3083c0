use kekule_core::meta::Provenance;
use kekule_core::{rng, Color};
use kekule_floquet::{build_schedule, initial_state, run_cycle, verify_logical_preservation, ExtractorOptions, LogicalInit, Record, SyndromeExtractor, Variant};
use kekule_lattice::{build_lattice, run_suite, LatticeGraph};
use kekule_majorana::gap::{coupling_grid, DEFAULT_THRESHOLD};
use kekule_majorana::{flux_report, gap, gap_map, gapless_window, lieb_gauge, supercell, BlochModel, Couplings, FluxAssignment, Gauge};
use kekule_monitored::sweep::points_map;
use kekule_monitored::{edge_scan, sweep_simplex, InitialState, SimplexPoint, SweepSpec, TrajectoryConfig};
use serde::Serialize;
use serde_json::json;

use crate::output::{csv, fixture_hash, json as json_out, json_lines, write_out};
use crate::settings::Settings;
use crate::{DynamicsOpts, Failure, FermionCmd, FermionOpts, FloquetCmd, LatticeCmd, MonitoredCmd, Target};

fn default_dims(name: &str) -> Result<[usize; 3], Failure> {
    let t = kekule_lattice::families::template(name)?;
    Ok(match (t.dim, name) {
        (2, _) => [3, 3, 1],
        (_, "kekule3d") => [2, 2, 1],
        _ => [2, 2, 2],
    })
}

impl Target {
    fn resolve(&self, fallback: &str) -> Result<(String, [usize; 3]), Failure> {
        let name = self.lattice_flag.clone().or_else(|| self.name.clone()).unwrap_or_else(|| fallback.to_string());
        let d = self.dims_flag.clone().unwrap_or_else(|| self.dims.clone());
        let dims = match d.as_slice() {
            [] => default_dims(&name)?,
            [a, b] => [*a, *b, 1],
            [a, b, c] => [*a, *b, *c],
            _ => return Err(Failure::Input(format!("expected 2 or 3 dims, got {}", d.len()))),
        };
        Ok((name, dims))
    }

    fn build(&self, fallback: &str) -> Result<LatticeGraph, Failure> {
        let (name, dims) = self.resolve(fallback)?;
        Ok(build_lattice(&name, dims)?)
    }
}

pub fn lattice(cmd: LatticeCmd, _s: &Settings) -> Result<(), Failure> {
    match cmd {
        LatticeCmd::Validate { target, fixture, out } => {
            let g = match &fixture {
                Some(p) => LatticeGraph::from_fixture(&std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {}", p.display(), e)))?)?,
                None => target.build("kekule3d")?,
            };
            let report = run_suite(&g)?;
            let failures = report.failures();
            let cfg = json!({ "command": "lattice validate", "lattice": g.name, "dims": g.dims, "fixture": fixture });
            let prov = Provenance::new(&cfg, vec![], Some(fixture_hash(&g)));
            write_out(out.as_deref(), &json_out(&prov, &json!({ "violations": failures.len(), "failures": failures, "report": report })))?;
            if failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("{} invariant violations", failures.len())))
            }
        }
        LatticeCmd::Export { target, out } => {
            let g = target.build("kekule3d")?;
            write_out(out.as_deref(), &g.to_fixture())?;
            Ok(())
        }
    }
}

fn parse_init(s: &str) -> Result<LogicalInit, Failure> {
    match s {
        "z" | "Z" => Ok(LogicalInit::Z),
        "x" | "X" => Ok(LogicalInit::X),
        _ => Err(Failure::Input(format!("unknown logical initialization {:?}", s))),
    }
}

fn collapse_or_input(e: kekule_floquet::FloquetError) -> Failure {
    if e.is_collapse() {
        Failure::Verification(format!("logical collapse: {}", e))
    } else {
        Failure::Input(e.to_string())
    }
}

pub fn floquet(cmd: FloquetCmd, s: &Settings) -> Result<(), Failure> {
    match cmd {
        FloquetCmd::Run { target, schedule, cycles, init, seed, out, syndromes } => {
            let g = target.build("kekule3d")?;
            let variant: Variant = schedule.parse().map_err(Failure::Input)?;
            let init = parse_init(&init)?;
            let cycles = cycles.unwrap_or(s.cycles);
            let seed = seed.unwrap_or(s.seed);
            let sched = build_schedule(&g, variant)?;
            let (mut t, _) = initial_state(&g, sched.closing_color(), init, None)?;
            let mut record = Record::new(sched.period());
            let mut r = rng::stream(seed, 0);
            for c in 0..cycles {
                run_cycle(&mut t, &g, &sched, c, &mut record, &mut r).map_err(collapse_or_input)?;
            }
            let cfg = json!({ "command": "floquet run", "lattice": g.name, "dims": g.dims, "schedule": variant, "cycles": cycles, "init": init });
            let prov = Provenance::new(&cfg, vec![seed], Some(fixture_hash(&g)));
            write_out(out.as_deref(), &csv(&prov, &format!("cycle round bond outcome\n{}", record.to_text())))?;
            if let Some(p) = syndromes {
                if cycles < 2 {
                    return Err(Failure::Input("syndrome extraction needs at least two cycles".into()));
                }
                let opts = if variant == Variant::TenRound { ExtractorOptions::ten_round() } else { ExtractorOptions::default() };
                let ex = SyndromeExtractor::new(&g, &sched, opts)?;
                let syn = ex.extract(&g, &record, cycles - 1)?;
                write_out(Some(&p), &csv(&prov, &syn.to_text()))?;
            }
            Ok(())
        }
        FloquetCmd::Verify { target, schedule, cycles, seed, out } => {
            let g = target.build("kekule3d")?;
            let cycles = cycles.unwrap_or(s.cycles);
            let seed = seed.unwrap_or(s.seed);
            let variants: Vec<Variant> = match &schedule {
                Some(v) => vec![v.parse().map_err(Failure::Input)?],
                None if g.name == "kekule3d" => vec![Variant::ThreeRound, Variant::TenRound],
                None => vec![Variant::ThreeRound],
            };
            let mut reports = Vec::new();
            let mut bad = Vec::new();
            for (vi, &v) in variants.iter().enumerate() {
                let sched = build_schedule(&g, v)?;
                for (ii, init) in [LogicalInit::Z, LogicalInit::X].into_iter().enumerate() {
                    let mut r = rng::stream(seed, (2 * vi + ii) as u64);
                    let rep = verify_logical_preservation(&g, &sched, init, cycles, true, &mut r).map_err(collapse_or_input)?;
                    if !rep.identity_every_cycle || rep.isg_failures > 0 {
                        bad.push(format!("{:?}/{:?}", v, init));
                    }
                    reports.push(json!({ "schedule": v, "report": rep }));
                }
            }
            let cfg = json!({ "command": "floquet verify", "lattice": g.name, "dims": g.dims, "schedules": variants, "cycles": cycles });
            let prov = Provenance::new(&cfg, vec![seed], Some(fixture_hash(&g)));
            write_out(out.as_deref(), &json_out(&prov, &json!({ "identity": bad.is_empty(), "runs": reports })))?;
            if bad.is_empty() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("non-identity logical action or ISG mismatch for {}", bad.join(", "))))
            }
        }
    }
}

fn parse_state(s: &str) -> Result<InitialState, Failure> {
    Ok(match s {
        "lines" => InitialState::CodeLines,
        "membranes" => InitialState::CodeMembranes,
        _ => match s.strip_prefix("product-") {
            Some(c) => InitialState::Product(c.parse()?),
            None => return Err(Failure::Input(format!("unknown initial state {:?}", s))),
        },
    })
}

fn spec(o: &DynamicsOpts, s: &Settings, resolution: usize) -> Result<SweepSpec, Failure> {
    if o.sizes[0] >= o.sizes[1] {
        return Err(Failure::Input("--sizes needs L1 < L2".into()));
    }
    let config = TrajectoryConfig {
        point: SimplexPoint::center(),
        t_eq: o.t_eq.unwrap_or(s.t_eq),
        snapshots: o.snapshots.unwrap_or(s.snapshots),
        spacing: o.spacing.unwrap_or(s.spacing),
        trajectories: o.trajectories.unwrap_or(s.trajectories),
        seed: o.seed.unwrap_or(s.seed),
        init: parse_state(&o.init)?,
    };
    Ok(SweepSpec { lattice: o.lattice.clone(), l_small: o.sizes[0], l_large: o.sizes[1], resolution, config })
}

fn emit_map<T: Serialize>(o: &DynamicsOpts, prov: &Provenance, map: &kekule_monitored::PhaseMap, extra: T) -> Result<(), Failure> {
    let text = match o.format.as_str() {
        "csv" => csv(prov, &map.to_csv()),
        "jsonl" | "json-lines" => {
            let mut s = json_lines(prov, map.points.iter());
            s.push_str(&serde_json::to_string(&extra)?);
            s.push('\n');
            s
        }
        f => return Err(Failure::Input(format!("unknown format {:?}", f))),
    };
    write_out(o.out.as_deref(), &text)?;
    Ok(())
}

fn dynamics_prov(command: &str, spec: &SweepSpec, extra: serde_json::Value) -> Provenance {
    let cfg = json!({ "command": command, "spec": spec, "extra": extra });
    // Fixture hash of the smaller lattice; the larger one follows from the same generator.
    let fx = kekule_monitored::sweep::dims_for(&spec.lattice, spec.l_small)
        .ok()
        .and_then(|d| build_lattice(&spec.lattice, d).ok())
        .map(|g| fixture_hash(&g));
    Provenance::new(&cfg, vec![spec.config.seed], fx)
}

pub fn monitored(cmd: MonitoredCmd, s: &Settings) -> Result<(), Failure> {
    match cmd {
        MonitoredCmd::Sweep { opts, grid } => {
            let sp = spec(&opts, s, grid)?;
            let map = sweep_simplex(&sp, opts.checkpoint.as_deref())?;
            let prov = dynamics_prov("monitored sweep", &sp, json!({}));
            emit_map(&opts, &prov, &map, json!({ "points": map.points.len() }))
        }
        MonitoredCmd::Edge { opts, absent, fractions } => {
            let absent: Color = absent.parse()?;
            let fr = fractions.unwrap_or_else(|| (0..=10).map(|i| i as f64 / 10.0).collect());
            let sp = spec(&opts, s, fr.len())?;
            let scan = edge_scan(&sp, absent, &fr, opts.checkpoint.as_deref())?;
            let prov = dynamics_prov("monitored edge", &sp, json!({ "absent": absent, "fractions": fr }));
            emit_map(&opts, &prov, &scan.map, json!({ "absent": absent, "peak": scan.peak }))
        }
        MonitoredCmd::Point { opts, p } => {
            let pt = SimplexPoint::new(p[0], p[1], p[2])?;
            let sp = spec(&opts, s, 1)?;
            let map = points_map(&sp, &[pt], opts.checkpoint.as_deref())?;
            let prov = dynamics_prov("monitored point", &sp, json!({ "p": p }));
            emit_map(&opts, &prov, &map, json!({ "eta": map.points[0].eta }))
        }
    }
}

struct FermionSetup {
    graph: LatticeGraph,
    model: BlochModel,
    threshold: f64,
    assign: FluxAssignment,
}

fn fermion_setup(o: &FermionOpts, s: &Settings) -> Result<FermionSetup, Failure> {
    let graph = supercell(&o.lattice)?;
    let assign = FluxAssignment { flip_p3: o.flip_p3, convention: o.convention.parse()? };
    let gauge = gauge_for(o, &graph, assign)?;
    let model = BlochModel::new(&graph, &gauge);
    let threshold = o.threshold.unwrap_or(if s.threshold > 0.0 { s.threshold } else { DEFAULT_THRESHOLD });
    Ok(FermionSetup { graph, model, threshold, assign })
}

fn gauge_for(o: &FermionOpts, g: &LatticeGraph, assign: FluxAssignment) -> Result<Gauge, Failure> {
    Ok(match o.gauge.as_str() {
        "lieb" => lieb_gauge(g, assign)?,
        "reference" => Gauge::reference(g)?,
        "uniform" => Gauge::uniform(g),
        x => return Err(Failure::Input(format!("unknown gauge {:?}", x))),
    })
}

fn fermion_prov(command: &str, o: &FermionOpts, f: &FermionSetup, extra: serde_json::Value) -> Provenance {
    let cfg = json!({
        "command": command,
        "lattice": o.lattice,
        "gauge": o.gauge,
        "assignment": f.assign,
        "threshold": f.threshold,
        "extra": extra,
    });
    Provenance::new(&cfg, vec![], Some(fixture_hash(&f.graph)))
}

pub fn fermion(cmd: FermionCmd, s: &Settings) -> Result<(), Failure> {
    match cmd {
        FermionCmd::Gap { opts, j, grid } => {
            let f = fermion_setup(&opts, s)?;
            let j = Couplings::normalized(j[0], j[1], j[2])?;
            let res = grid.unwrap_or(s.kgrid);
            let r = gap(&f.model, &j, res)?;
            let prov = fermion_prov("fermion gap", &opts, &f, json!({ "J": j, "grid": res }));
            write_out(opts.out.as_deref(), &json_out(&prov, &json!({ "J": j, "gap": r, "gapless": r.is_gapless(f.threshold) })))?;
            Ok(())
        }
        FermionCmd::Map { opts, grid, kgrid } => {
            let f = fermion_setup(&opts, s)?;
            let kres = kgrid.unwrap_or(s.kgrid);
            let map = gap_map(&f.model, &coupling_grid(grid), kres, f.threshold)?;
            let prov = fermion_prov("fermion map", &opts, &f, json!({ "grid": grid, "kgrid": kres }));
            write_out(opts.out.as_deref(), &csv(&prov, &map.to_csv()))?;
            Ok(())
        }
        FermionCmd::Window { opts, kgrid, step, tol } => {
            let f = fermion_setup(&opts, s)?;
            let kres = kgrid.unwrap_or(s.kgrid);
            let w = gapless_window(&f.model, kres, f.threshold, step, tol)?;
            let prov = fermion_prov("fermion window", &opts, &f, json!({ "kgrid": kres, "step": step, "tol": tol }));
            write_out(opts.out.as_deref(), &json_out(&prov, &json!({ "isotropic_gapless": w.is_some(), "window": w })))?;
            Ok(())
        }
        FermionCmd::Flux { opts } => {
            let graph = supercell(&opts.lattice)?;
            let assign = FluxAssignment { flip_p3: opts.flip_p3, convention: opts.convention.parse()? };
            let gauge = gauge_for(&opts, &graph, assign)?;
            let rep = flux_report(&graph, &gauge, assign)?;
            let cfg = json!({ "command": "fermion flux", "lattice": opts.lattice, "gauge": opts.gauge, "assignment": assign });
            let prov = Provenance::new(&cfg, vec![], Some(fixture_hash(&graph)));
            write_out(opts.out.as_deref(), &json_out(&prov, &json!({ "mismatched": rep.mismatched(), "report": rep })))?;
            if rep.all_ok() {
                Ok(())
            } else {
                Err(Failure::Verification(format!("flux differs from the Lieb rule on {:?}", rep.mismatched())))
            }
        }
    }
}
