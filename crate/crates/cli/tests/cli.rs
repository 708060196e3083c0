use std::path::PathBuf;
use std::process::{Command, Output};

fn kekule(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kekule")).args(args).env_remove("KEKULE_SEED").output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("kekule-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_reports_no_violations() {
    let o = kekule(&["lattice", "validate", "kekule3d", "2", "2", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["violations"], 0);
    assert_eq!(v["provenance"]["tool"], "kekule");
    assert!(v["provenance"]["fixture_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn export_round_trips_and_mutation_fails_validation() {
    let p = scratch("hk.fixture");
    let o = kekule(&["lattice", "export", "honeycomb_kekule", "4", "4", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&p).unwrap();
    let g = kekule_lattice::LatticeGraph::from_fixture(&text).unwrap();
    assert_eq!(g.to_fixture(), text);
    assert_eq!(kekule(&["lattice", "validate", "--fixture", p.to_str().unwrap()]).status.code(), Some(0));

    // Recolor one bond so that two bonds of the same color meet.
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let i = lines.iter().position(|l| l.starts_with("bond ")).unwrap();
    let mut f: Vec<String> = lines[i].split(' ').map(String::from).collect();
    f[3] = if f[3] == "x" { "y".into() } else { "x".into() };
    lines[i] = f.join(" ");
    std::fs::write(&p, lines.join("\n") + "\n").unwrap();
    let o = kekule(&["lattice", "validate", "--fixture", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn floquet_verify_and_naive_collapse() {
    let o = kekule(&["floquet", "verify", "kekule3d", "2", "2", "1", "--cycles", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identity"], true);
    assert_eq!(v["runs"].as_array().unwrap().len(), 4);

    let o = kekule(&["floquet", "run", "--schedule", "3round", "--lattice", "honeycomb_kitaev_naive"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("logical collapse"));
}

#[test]
fn same_seed_gives_identical_records() {
    let run = |seed: &str| stdout(&kekule(&["floquet", "run", "kekule3d", "--schedule", "10round", "--cycles", "2", "--seed", seed]));
    let a = run("4");
    assert_eq!(a, run("4"));
    let body = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(String::from).collect::<Vec<_>>();
    assert_ne!(body(&a), body(&run("5")));
    assert!(a.contains("# seeds=4"));
}

#[test]
fn syndromes_written_next_to_record() {
    let p = scratch("syn.txt");
    let o = kekule(&["floquet", "run", "kekule3d", "--schedule", "10round", "--cycles", "2", "--syndromes", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = std::fs::read_to_string(&p).unwrap();
    let rows = s.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 20 * 4);
}

#[test]
fn monitored_point_corner_is_area_law() {
    let o = kekule(&["monitored", "point", "--p", "0", "0", "1", "--trajectories", "2", "--t-eq", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# tool=kekule"));
    let row = s.lines().last().unwrap();
    let eta: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((0.9..=1.1).contains(&eta), "{}", row);
}

#[test]
fn monitored_checkpoint_rejects_other_config() {
    let cp = scratch("sweep.ckpt");
    let _ = std::fs::remove_file(&cp);
    let args = |seed: &'static str| {
        vec!["monitored", "sweep", "--lattice", "honeycomb_kekule", "--sizes", "2", "4", "--grid", "2", "--trajectories", "1", "--t-eq", "2", "--seed", seed]
    };
    let mut a = args("1");
    a.extend(["--checkpoint", cp.to_str().unwrap()]);
    let first = kekule(&a);
    assert_eq!(first.status.code(), Some(0));
    let again = kekule(&a);
    assert_eq!(stdout(&first), stdout(&again));
    let mut b = args("2");
    b.extend(["--checkpoint", cp.to_str().unwrap()]);
    assert_eq!(kekule(&b).status.code(), Some(2));
}

#[test]
fn edge_profile_as_json_lines() {
    let o = kekule(&[
        "monitored", "edge", "--absent", "z", "--lattice", "hyperhoneycomb", "--fractions", "0.5", "--trajectories", "1", "--t-eq", "2", "--format", "jsonl",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<serde_json::Value> = s.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0]["provenance"]["seeds"].is_array());
    assert_eq!(lines[2]["absent"], "z");
}

#[test]
fn fermion_gap_examples() {
    let o = kekule(&["fermion", "gap", "--J", "1", "0", "0", "--grid", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["gap"]["delta"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["gapless"], false);
    assert_eq!(kekule(&["fermion", "gap", "--J", "1", "1", "1"]).status.code(), Some(2));
}

#[test]
fn fermion_map_and_flux() {
    let o = kekule(&["fermion", "map", "--lattice", "honeycomb_kekule", "--grid", "3", "--kgrid", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 1 + 10);
    assert_eq!(kekule(&["fermion", "flux"]).status.code(), Some(0));
    assert_eq!(kekule(&["fermion", "flux", "--gauge", "reference"]).status.code(), Some(1));
}

#[test]
fn config_file_and_environment() {
    let p = scratch("run.conf");
    std::fs::write(&p, "seed = 9\n").unwrap();
    let o = kekule(&["--config", p.to_str().unwrap(), "floquet", "run", "kekule3d", "--cycles", "1"]);
    assert!(stdout(&o).contains("# seeds=9"));
    let o = Command::new(env!("CARGO_BIN_EXE_kekule")).args(["floquet", "run", "kekule3d", "--cycles", "1"]).env("KEKULE_SEED", "11").output().unwrap();
    assert!(stdout(&o).contains("# seeds=11"));
    std::fs::write(&p, "nonsense = 1\n").unwrap();
    assert_eq!(kekule(&["--config", p.to_str().unwrap(), "lattice", "validate"]).status.code(), Some(2));
}
