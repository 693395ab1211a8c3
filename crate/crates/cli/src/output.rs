//! Output delivery. Payloads go to stdout unless a path is given; file
//! writes are atomic (same-directory temp, then rename) and come with a run
//! manifest sibling recording command, parameters, and derived statistics.

use anyhow::{Context, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Serialize)]
struct Versions {
    library: &'static str,
    cli: &'static str,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    parameters: &'a BTreeMap<String, String>,
    input: Option<&'a str>,
    output: String,
    versions: Versions,
    statistics: &'a BTreeMap<String, u64>,
    timing_ms: u128,
}

/// One command's audit trail, accumulated while it runs.
pub struct Emission {
    command: &'static str,
    parameters: BTreeMap<String, String>,
    input: Option<String>,
    statistics: BTreeMap<String, u64>,
    started: Instant,
}

impl Emission {
    pub fn new(command: &'static str) -> Self {
        Emission {
            command,
            parameters: BTreeMap::new(),
            input: None,
            statistics: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn input(&mut self, path: &Path) {
        self.input = Some(path.display().to_string());
    }

    pub fn stat(&mut self, key: &str, value: u64) {
        self.statistics.insert(key.to_string(), value);
    }

    /// Prints the payload, or writes it to `out` with the manifest beside it.
    pub fn deliver(&self, out: Option<&Path>, payload: &str) -> Result<()> {
        let path = match out {
            None => {
                print!("{payload}");
                return Ok(());
            }
            Some(p) => p,
        };
        write_atomic(path, payload.as_bytes())?;
        let manifest = RunManifest {
            command: self.command,
            parameters: &self.parameters,
            input: self.input.as_deref(),
            output: path.display().to_string(),
            versions: Versions {
                library: dirseg::VERSION,
                cli: env!("CARGO_PKG_VERSION"),
            },
            statistics: &self.statistics,
            timing_ms: self.started.elapsed().as_millis(),
        };
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        write_atomic(&manifest_path(path), text.as_bytes())
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let name = out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{name}.manifest.json"))
}

/// Readers never observe a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .with_context(|| format!("{} has no file name", path.display()))?;
    let tmp = path.with_file_name(format!("{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("moving into place at {}", path.display()))
}
