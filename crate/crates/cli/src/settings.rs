//! Run defaults. Each key can be set in a `key = value` config file, overridden by an
//! environment variable `KEKULE_<KEY>` (upper case), and finally by a command-line flag.
//!
//! | key            | default | used by                      |
//! |----------------|---------|------------------------------|
//! | seed           | 1       | floquet, monitored           |
//! | threads        | 0 (all) | every command                |
//! | cycles         | 10      | floquet                      |
//! | t_eq           | 20      | monitored                    |
//! | snapshots      | 8       | monitored                    |
//! | spacing        | 1       | monitored                    |
//! | trajectories   | 10      | monitored                    |
//! | kgrid          | 48      | fermion                      |
//! | threshold      | 0.005   | fermion                      |

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

pub const KEYS: [&str; 9] = ["seed", "threads", "cycles", "t_eq", "snapshots", "spacing", "trajectories", "kgrid", "threshold"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub threads: usize,
    pub cycles: usize,
    pub t_eq: f64,
    pub snapshots: usize,
    pub spacing: f64,
    pub trajectories: usize,
    pub kgrid: usize,
    pub threshold: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 1, threads: 0, cycles: 10, t_eq: 20.0, snapshots: 8, spacing: 1.0, trajectories: 10, kgrid: 48, threshold: 5e-3 }
    }
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.trim().parse().map_err(|_| format!("bad value {:?} for {}", v, key))
}

impl Settings {
    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "seed" => self.seed = parse(key, v)?,
            "threads" => self.threads = parse(key, v)?,
            "cycles" => self.cycles = parse(key, v)?,
            "t_eq" => self.t_eq = parse(key, v)?,
            "snapshots" => self.snapshots = parse(key, v)?,
            "spacing" => self.spacing = parse(key, v)?,
            "trajectories" => self.trajectories = parse(key, v)?,
            "kgrid" => self.kgrid = parse(key, v)?,
            "threshold" => self.threshold = parse(key, v)?,
            _ => return Err(format!("unknown config key {:?}", key)),
        }
        Ok(())
    }

    pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, String> {
        let mut out = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(out)
    }

    /// Defaults, then the config file, then the environment.
    pub fn load(config: Option<&Path>, env: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        let mut s = Settings::default();
        if let Some(p) = config {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {}", p.display(), e))?;
            for (k, v) in Self::parse_file(&text)? {
                s.set(&k, &v)?;
            }
        }
        for k in KEYS {
            if let Some(v) = env(&format!("KEKULE_{}", k.to_ascii_uppercase())) {
                s.set(k, &v)?;
            }
        }
        Ok(s)
    }
}
