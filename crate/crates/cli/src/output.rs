//! CSV and manifest writers. Everything written here is a pure function of the
//! inputs, so repeated runs give byte-identical files.

use std::path::{Path, PathBuf};

use kerrline::table::Table;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Shortest round-trip form; plain notation for moderate magnitudes,
/// exponent form otherwise.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !x.is_finite() || (1e-4..1e7).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Collects artifacts for one run and writes them under `dir`.
pub struct Artifacts {
    dir: PathBuf,
    written: Vec<(String, String)>,
}

impl Artifacts {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
        Ok(Artifacts {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn put(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, &bytes).map_err(|e| CliError::output(&path, e))?;
        self.written.push((name.to_string(), sha256_hex(&bytes)));
        Ok(())
    }

    pub fn rows(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::output(Path::new(name), std::io::Error::other(e));
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::output(Path::new(name), e.into_error()))?;
        self.put(name, bytes)
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        let rows: Vec<Vec<String>> = table
            .rows
            .iter()
            .map(|r| r.iter().map(|&v| fmt_f64(v)).collect())
            .collect();
        self.rows(name, &table.header, &rows)
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
        bytes.push(b'\n');
        self.put(name, bytes)
    }

    /// Writes `manifest.json` listing every artifact written so far.
    pub fn finish(mut self, mut manifest: Map<String, Value>) -> Result<PathBuf, CliError> {
        let files: Vec<Value> = self
            .written
            .iter()
            .map(|(name, hash)| json!({"file": name, "sha256": hash}))
            .collect();
        manifest.insert("artifacts".into(), Value::Array(files));
        self.json("manifest.json", &Value::Object(manifest))?;
        Ok(self.dir.join("manifest.json"))
    }
}

pub fn constants_json() -> (Value, String) {
    let table = kerrline::constants::table();
    let mut map = Map::new();
    for (name, value) in &table {
        map.insert((*name).to_string(), json!(value));
    }
    let value = Value::Object(map);
    let hash = sha256_hex(serde_json::to_string(&value).expect("serializable").as_bytes());
    (value, hash)
}
