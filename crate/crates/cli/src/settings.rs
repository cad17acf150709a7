//! Per-command settings: defaults, then the config file, then flags.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EncodeSettings {
    pub ansatz: String,
    pub layers: usize,
    /// Images are resized to `2^n x 2^n`.
    pub n: usize,
    pub split: String,
    /// Seeded random subset size; all images when absent.
    pub subset: Option<usize>,
    pub seed: u64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub early_stop: Option<f64>,
    /// `all` or `none`.
    pub final_layer: String,
}

impl Default for EncodeSettings {
    fn default() -> Self {
        Self {
            ansatz: "sparse".into(),
            layers: 3,
            n: 5,
            split: "train".into(),
            subset: None,
            seed: 0,
            learning_rate: 0.03,
            epochs: 10_000,
            early_stop: None,
            final_layer: "all".into(),
        }
    }
}

/// Where classifier inputs come from.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSettings {
    pub exact: String,
    pub encoded: Option<PathBuf>,
    pub n: usize,
    pub subset: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSettings {
    /// `frqi`, `amplitude` or `neqr:<q>`; ignored when `encoded` is set.
    pub exact: String,
    /// Manifest directory written by `encode`.
    pub encoded: Option<PathBuf>,
    pub n: usize,
    /// Seeded random subset size; everything when absent.
    pub subset: Option<usize>,
    /// Classifier ansatz, or `none` to train only the head.
    pub ansatz: String,
    pub layers: usize,
    pub m: usize,
    pub k: usize,
    pub readout_layer: bool,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub scale: f64,
    pub seed: u64,
    /// Two-phase schedule with a parameter kick between phases.
    pub perturb: bool,
}

macro_rules! input_of {
    ($t:ty) => {
        impl $t {
            pub fn input(&self) -> InputSettings {
                InputSettings {
                    exact: self.exact.clone(),
                    encoded: self.encoded.clone(),
                    n: self.n,
                    subset: self.subset,
                }
            }
        }
    };
}

input_of!(TrainSettings);
input_of!(EvalSettings);

impl Default for TrainSettings {
    fn default() -> Self {
        Self {
            exact: "frqi".into(),
            encoded: None,
            n: 5,
            subset: None,
            ansatz: "sparse".into(),
            layers: 2,
            m: 4,
            k: 10,
            readout_layer: false,
            learning_rate: 8e-4,
            epochs: 200,
            batch_size: 80,
            scale: 128.0,
            seed: 0,
            perturb: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalSettings {
    /// `frqi`, `amplitude` or `neqr:<q>`; ignored when `encoded` is set.
    pub exact: String,
    /// Manifest directory written by `encode`.
    pub encoded: Option<PathBuf>,
    pub n: usize,
    /// Seeded random subset size; everything when absent.
    pub subset: Option<usize>,
    pub model: Option<PathBuf>,
    pub shots: Option<u64>,
    pub depolarize: f64,
    pub seed: u64,
    /// Train only the head on exact marginals, then evaluate it.
    pub baseline_postprocess_only: bool,
    /// Head training used by the baseline.
    pub train: TrainSettings,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            exact: "frqi".into(),
            encoded: None,
            n: 5,
            subset: None,
            model: None,
            shots: None,
            depolarize: 0.0,
            seed: 0,
            baseline_postprocess_only: false,
            train: TrainSettings {
                ansatz: "none".into(),
                ..TrainSettings::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExportSettings {
    pub manifest: PathBuf,
    pub basis: String,
}

impl Default for ExportSettings {
    fn default() -> Self {
        Self {
            manifest: PathBuf::from("out/encode"),
            basis: "logical".into(),
        }
    }
}

/// Loads the `[section]` table of a TOML config file as JSON.
pub fn config_section(path: Option<&Path>, section: &str) -> Result<Map<String, Value>, CliError> {
    let Some(path) = path else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("reading config {}: {e}", path.display())))?;
    let table: toml::Table = toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let value = serde_json::to_value(table).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(value
        .get(section)
        .and_then(Value::as_object)
        .cloned()
        .unwrap_or_default())
}

fn overlay(base: &mut Map<String, Value>, top: Map<String, Value>) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(Value::Object(b)), Value::Object(t)) => overlay(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// `defaults <- file <- flags`, where `flags` holds only what was given.
pub fn merge<S: Default + Serialize + DeserializeOwned>(
    file: Map<String, Value>,
    flags: Map<String, Value>,
) -> Result<S, CliError> {
    let Value::Object(mut merged) =
        serde_json::to_value(S::default()).map_err(|e| CliError::Usage(e.to_string()))?
    else {
        unreachable!("settings serialize to objects");
    };
    overlay(&mut merged, file);
    overlay(&mut merged, flags);
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Usage(format!("settings: {e}")))
}
