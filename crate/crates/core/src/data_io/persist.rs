//! Encoded datasets on disk: `manifest.json` plus `params.bin`.
//!
//! `params.bin` is the 8-byte magic `FRQIPARM`, a version byte, then every
//! record's parameters as little-endian `f64`, record-major.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::idx::Split;
use crate::ansatz::AnsatzConfig;
use crate::error::{Error, Result};

pub const PARAMS_MAGIC: &[u8; 8] = b"FRQIPARM";
pub const PARAMS_VERSION: u8 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PARAMS_FILE: &str = "params.bin";

/// One compressed image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedRecord {
    pub index: usize,
    pub label: u8,
    pub ansatz: AnsatzConfig,
    pub params: Vec<f64>,
    pub fidelity: f64,
    pub seed: u64,
}

/// Per-image seed derived from the run's master seed.
pub fn image_seed(master_seed: u64, index: usize) -> u64 {
    master_seed ^ index as u64
}

/// Records sharing one dataset split and one ansatz.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSet {
    pub dataset: String,
    pub split: Split,
    pub ansatz: AnsatzConfig,
    pub master_seed: u64,
    /// Free-form optimizer settings recorded for replay.
    pub settings: serde_json::Value,
    pub records: Vec<EncodedRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestRecord {
    index: usize,
    label: u8,
    seed: u64,
    fidelity: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    format_version: u32,
    dataset: String,
    split: Split,
    ansatz: AnsatzConfig,
    seed_policy: String,
    master_seed: u64,
    settings: serde_json::Value,
    num_records: usize,
    params_per_record: usize,
    params_file: String,
    records: Vec<ManifestRecord>,
}

const SEED_POLICY: &str = "master_seed xor image index";

pub fn save_encoded(set: &EncodedSet, dir: &Path) -> Result<()> {
    let per = params_per_record(&set.ansatz)?;
    for r in &set.records {
        if r.ansatz != set.ansatz {
            return Err(Error::validation(format!(
                "record {} uses a different ansatz than the set",
                r.index
            )));
        }
        if r.params.len() != per {
            return Err(Error::validation(format!(
                "record {} has {} parameters, ansatz needs {per}",
                r.index,
                r.params.len()
            )));
        }
    }
    std::fs::create_dir_all(dir)?;
    let manifest = Manifest {
        format_version: 1,
        dataset: set.dataset.clone(),
        split: set.split,
        ansatz: set.ansatz.clone(),
        seed_policy: SEED_POLICY.into(),
        master_seed: set.master_seed,
        settings: set.settings.clone(),
        num_records: set.records.len(),
        params_per_record: per,
        params_file: PARAMS_FILE.into(),
        records: set
            .records
            .iter()
            .map(|r| ManifestRecord {
                index: r.index,
                label: r.label,
                seed: r.seed,
                fidelity: r.fidelity,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(dir.join(MANIFEST_FILE), text)?;

    let mut bin = Vec::with_capacity(9 + 8 * per * set.records.len());
    bin.extend_from_slice(PARAMS_MAGIC);
    bin.push(PARAMS_VERSION);
    for r in &set.records {
        for p in &r.params {
            bin.extend_from_slice(&p.to_le_bytes());
        }
    }
    std::fs::write(dir.join(PARAMS_FILE), bin)?;
    Ok(())
}

fn params_per_record(ansatz: &AnsatzConfig) -> Result<usize> {
    Ok(crate::ansatz::build::<f64>(ansatz)?.num_params())
}

pub fn load_encoded(dir: &Path) -> Result<EncodedSet> {
    let text = std::fs::read_to_string(dir.join(MANIFEST_FILE))?;
    let m: Manifest = serde_json::from_str(&text)?;
    if m.records.len() != m.num_records {
        return Err(Error::Integrity(format!(
            "manifest lists {} records but declares {}",
            m.records.len(),
            m.num_records
        )));
    }
    let per = params_per_record(&m.ansatz)?;
    if per != m.params_per_record {
        return Err(Error::Integrity(format!(
            "ansatz has {per} parameters but the manifest declares {}",
            m.params_per_record
        )));
    }
    let bin = std::fs::read(dir.join(&m.params_file))?;
    if bin.len() < 9 || &bin[..8] != PARAMS_MAGIC {
        return Err(Error::Integrity(
            "params file lacks the FRQIPARM magic".into(),
        ));
    }
    if bin[8] != PARAMS_VERSION {
        return Err(Error::Integrity(format!(
            "unsupported params version {}",
            bin[8]
        )));
    }
    let body = &bin[9..];
    let want = 8 * per * m.num_records;
    if body.len() != want {
        return Err(Error::Integrity(format!(
            "params file holds {} bytes, manifest implies {want}",
            body.len()
        )));
    }
    let floats: Vec<f64> = body
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes")))
        .collect();
    let records = m
        .records
        .into_iter()
        .enumerate()
        .map(|(i, r)| EncodedRecord {
            index: r.index,
            label: r.label,
            ansatz: m.ansatz.clone(),
            params: floats[i * per..(i + 1) * per].to_vec(),
            fidelity: r.fidelity,
            seed: r.seed,
        })
        .collect();
    Ok(EncodedSet {
        dataset: m.dataset,
        split: m.split,
        ansatz: m.ansatz,
        master_seed: m.master_seed,
        settings: m.settings,
        records,
    })
}
