//! `frqi`: compress images into FRQI circuits, train and evaluate
//! classifiers on them, and export the circuits as QASM.

mod commands;
mod report;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or settings: exit 2.
    Usage(String),
    /// Anything that failed while running: exit 1.
    Runtime(String),
}

impl From<frqi_core::Error> for CliError {
    fn from(e: frqi_core::Error) -> Self {
        match e {
            frqi_core::Error::Validation(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "frqi",
    version,
    about = "Variational FRQI image compression and classification"
)]
pub struct Cli {
    /// Directory holding the four Fashion-MNIST archives.
    #[arg(
        long,
        global = true,
        env = "FRQI_DATA_DIR",
        default_value = "data/fashion-mnist"
    )]
    pub data_dir: PathBuf,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, env = "FRQI_WORKERS")]
    pub workers: Option<usize>,
    /// TOML file with `[encode]`, `[train]`, `[eval]` and `[export]` tables.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Download the dataset archives.
    Fetch(FetchArgs),
    /// Compress images into circuit parameters.
    Encode(EncodeArgs),
    /// Train a classifier.
    Train(TrainArgs),
    /// Evaluate a classifier, or the post-processing-only baseline.
    Eval(EvalArgs),
    /// Write one QASM file per encoded image.
    Export(ExportArgs),
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long, default_value = frqi_core::data_io::DEFAULT_BASE_URL)]
    pub base_url: String,
    #[arg(long, default_value_t = 3)]
    pub attempts: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct EncodeArgs {
    /// sparse, general or 2d_sequential.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[arg(long = "lr")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub early_stop: Option<f64>,
    /// all or none.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_layer: Option<String>,
    /// Download the dataset first if it is missing.
    #[arg(long)]
    #[serde(skip)]
    pub fetch: bool,
    #[arg(long, default_value = "out/encode")]
    #[serde(skip)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct InputArgs {
    /// Exact input states: frqi, amplitude or neqr:<q>.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Compressed inputs from an `encode` output directory.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub encoded: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct HeadArgs {
    /// Classifier ansatz, or none.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    /// Measured qubits.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub readout_layer: bool,
    #[arg(long = "lr")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epochs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_size: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub perturb: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub head: HeadArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "out/train")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Model written by `train`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub depolarize: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub baseline_postprocess_only: bool,
    /// Baseline head training; `--m` and friends.
    #[command(flatten)]
    pub head: HeadArgs,
    /// Training subset for the baseline.
    #[arg(long)]
    pub train_subset: Option<usize>,
    #[arg(long, default_value = "out/eval")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// logical (u3, cx) or native (rz, sx, x, cx).
    #[arg(long, value_parser = ["logical", "native"])]
    pub basis: Option<String>,
    #[arg(long, default_value = "out/qasm")]
    pub out: PathBuf,
}

/// Serializes the flags that were actually given.
pub fn given<T: Serialize>(args: &T) -> Map<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
