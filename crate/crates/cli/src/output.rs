use std::io::Write;
use std::path::Path;

use kekule_core::meta::{sha256_hex, Provenance};
use kekule_lattice::LatticeGraph;
use serde::Serialize;

pub fn fixture_hash(g: &LatticeGraph) -> String {
    sha256_hex(g.to_fixture().as_bytes())
}

pub fn write_out(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let out = std::io::stdout();
            let mut lock = out.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}

/// CSV body with provenance comment lines in front.
pub fn csv(prov: &Provenance, body: &str) -> String {
    let mut s = prov.csv_header();
    s.push_str(body);
    s
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    provenance: &'a Provenance,
    #[serde(flatten)]
    data: &'a T,
}

/// Pretty JSON object with a `provenance` field next to the payload fields.
pub fn json<T: Serialize>(prov: &Provenance, data: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { provenance: prov, data }).expect("serializable");
    s.push('\n');
    s
}

/// JSON lines: the provenance object first, then one line per record.
pub fn json_lines<T: Serialize>(prov: &Provenance, rows: impl IntoIterator<Item = T>) -> String {
    let mut s = serde_json::to_string(&serde_json::json!({ "provenance": prov })).expect("serializable");
    s.push('\n');
    for r in rows {
        s.push_str(&serde_json::to_string(&r).expect("serializable"));
        s.push('\n');
    }
    s
}
