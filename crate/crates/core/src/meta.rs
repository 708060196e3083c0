//! Provenance stamped into every output artifact.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of a config value through its canonical JSON encoding.
pub fn config_hash<T: Serialize>(cfg: &T) -> String {
    let s = serde_json::to_vec(cfg).expect("config serializes");
    sha256_hex(&s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub seeds: Vec<u64>,
    pub fixture_hash: Option<String>,
}

impl Provenance {
    pub fn new<T: Serialize>(cfg: &T, seeds: Vec<u64>, fixture_hash: Option<String>) -> Self {
        Provenance {
            tool: "kekule".into(),
            version: VERSION.into(),
            config_hash: config_hash(cfg),
            seeds,
            fixture_hash,
        }
    }

    /// Comment lines for the head of a CSV file.
    pub fn csv_header(&self) -> String {
        let mut s = format!("# tool={} version={}\n# config_hash={}\n", self.tool, self.version, self.config_hash);
        let seeds: Vec<String> = self.seeds.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("# seeds={}\n", seeds.join(",")));
        if let Some(h) = &self.fixture_hash {
            s.push_str(&format!("# fixture_hash={}\n", h));
        }
        s
    }
}
