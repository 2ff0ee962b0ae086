//! Output bookkeeping and run manifests.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub config_digest: String,
    pub tool_version: String,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub started_unix: f64,
    pub finished_unix: f64,
}

/// SHA-256 over `key=value` lines in key order.
pub fn config_digest(config: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    for (k, v) in config {
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

/// Collects the resolved configuration and every file written by a command.
pub struct Run {
    command: String,
    config: BTreeMap<String, String>,
    outputs: Vec<String>,
    warnings: Vec<String>,
    started: f64,
}

impl Run {
    pub fn new(command: &str) -> Self {
        Run {
            command: command.to_string(),
            config: BTreeMap::new(),
            outputs: Vec::new(),
            warnings: Vec::new(),
            started: unix_now(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.to_string(), value.to_string());
    }

    pub fn warn(&mut self, message: String) {
        eprintln!("warning: {message}");
        self.warnings.push(message);
    }

    fn track(&mut self, path: &Path) {
        let p = path.display().to_string();
        if !self.outputs.contains(&p) {
            self.outputs.push(p);
        }
    }

    pub fn write(&mut self, path: &Path, bytes: &[u8]) -> CliResult<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
        self.track(path);
        Ok(())
    }

    pub fn append(&mut self, path: &Path, bytes: &[u8]) -> CliResult<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CliError::io(path, e))?;
        f.write_all(bytes).map_err(|e| CliError::io(path, e))?;
        self.track(path);
        Ok(())
    }

    /// Writes the manifest to `path` and returns it.
    pub fn finish(self, path: &Path) -> CliResult<RunManifest> {
        let manifest = RunManifest {
            command: self.command,
            config_digest: config_digest(&self.config),
            config: self.config,
            tool_version: TOOL_VERSION.to_string(),
            outputs: self.outputs,
            warnings: self.warnings,
            started_unix: self.started,
            finished_unix: unix_now(),
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::io(path, e))?;
        Ok(manifest)
    }
}

pub fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Other(format!("csv: {e}")))
}

pub fn json_line<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

/// `<file>.manifest.json` next to a single-file output.
pub fn sibling_manifest(file: &Path) -> PathBuf {
    let mut name = file.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    file.with_file_name(name)
}
