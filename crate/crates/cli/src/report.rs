//! Machine-readable run reports. The layout is described in docs/report.md.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const REPORT_FILE: &str = "report.json";
pub const TIMING_FILE: &str = "timing.json";

/// Everything needed to replay a run. Holds nothing that varies between
/// identical runs, so re-runs write identical bytes.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config_hash: String,
    pub seeds: BTreeMap<String, u64>,
    pub settings: Value,
    pub metrics: Value,
    pub outputs: Vec<String>,
}

/// SHA-256 over the command name and its merged settings.
pub fn config_hash(command: &str, settings: &Value) -> String {
    let canonical = json!({ "command": command, "settings": settings }).to_string();
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl RunReport {
    pub fn new<S: Serialize>(command: &str, settings: &S) -> Result<Self, CliError> {
        let settings = serde_json::to_value(settings)?;
        Ok(Self {
            command: command.into(),
            config_hash: config_hash(command, &settings),
            seeds: BTreeMap::new(),
            settings,
            metrics: Value::Null,
            outputs: Vec::new(),
        })
    }

    pub fn seed(mut self, name: &str, value: u64) -> Self {
        self.seeds.insert(name.into(), value);
        self
    }

    /// Writes `report.json` and the `timing.json` sidecar into `dir`.
    pub fn write(&self, dir: &Path, wall: Duration, workers: usize) -> Result<(), CliError> {
        std::fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(dir.join(REPORT_FILE), text)?;
        let timing = json!({
            "command": self.command,
            "config_hash": self.config_hash,
            "wall_seconds": wall.as_secs_f64(),
            "workers": workers,
        });
        std::fs::write(dir.join(TIMING_FILE), format!("{timing:#}\n"))?;
        Ok(())
    }
}
