//! CSV output with a manifest hash header and a JSON sidecar.

use nucleoq::{Error, Result};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const TOOL: &str = "nucleoq";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Scientific notation with six significant digits.
pub fn num(v: f64) -> String {
    if v == 0.0 {
        return "0.00000e0".into();
    }
    format!("{v:.5e}")
}

/// Inputs that fully determine an output file.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub dataset_hash: String,
    pub config: Value,
    /// Extra results worth recording next to the table (e.g. crossovers).
    pub notes: Value,
}

impl RunManifest {
    pub fn new(command: &str, dataset_hash: &str, config: impl Serialize) -> Self {
        RunManifest {
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            dataset_hash: dataset_hash.into(),
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            notes: Value::Null,
        }
    }

    /// SHA-256 over the canonical JSON of the inputs. No clock involved,
    /// so equal inputs always give the same hash.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("manifest serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, manifest_hash: &str) -> Result<Vec<u8>> {
        let mut buf = format!("# {TOOL} {VERSION} manifest sha256:{manifest_hash}\n").into_bytes();
        {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::CRLF)
                .from_writer(&mut buf);
            let io = |e: csv::Error| Error::Io {
                path: "csv".into(),
                message: e.to_string(),
            };
            w.write_record(&self.header).map_err(io)?;
            for r in &self.rows {
                w.write_record(r).map_err(io)?;
            }
            w.flush().map_err(|e| Error::Io {
                path: "csv".into(),
                message: e.to_string(),
            })?;
        }
        Ok(buf)
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes the CSV (or prints it for "-") and, for files, the manifest
/// sidecar `<out>.manifest.json`.
pub fn write(out: &Path, table: &Table, manifest: &RunManifest) -> Result<()> {
    let hash = manifest.hash();
    let bytes = table.render(&hash)?;
    let io = |p: &Path, e: std::io::Error| Error::Io {
        path: p.display().to_string(),
        message: e.to_string(),
    };
    if out.as_os_str() == "-" {
        std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| io(out, e))?;
        return Ok(());
    }
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    }
    std::fs::write(out, &bytes).map_err(|e| io(out, e))?;
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let doc = json!({
        "manifest_sha256": hash,
        "manifest": manifest,
        "timestamp_unix": stamp,
        "deterministic": true,
        "rng": "none",
    });
    let side = sidecar(out);
    let text = serde_json::to_string_pretty(&doc).expect("manifest serializes") + "\n";
    std::fs::write(&side, text).map_err(|e| io(&side, e))?;
    Ok(())
}
