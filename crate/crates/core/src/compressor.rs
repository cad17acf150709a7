//! Per-image variational compression of FRQI states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build, AnsatzConfig};
use crate::data_io::{image_seed, EncodedRecord, LabeledDataset};
use crate::encodings::{frqi_state, preprocess, FlatImage};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{gradient, run_circuit, Circuit, StateVector, TerminalCost};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamConfig {
    pub fn with_lr(learning_rate: f64) -> Self {
        Self {
            learning_rate,
            ..Self::default()
        }
    }
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub m: Vec<T>,
    pub v: Vec<T>,
    /// Number of steps taken so far.
    pub t: u64,
}

impl<T: Real> AdamState<T> {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![T::zero(); len],
            v: vec![T::zero(); len],
            t: 0,
        }
    }
}

/// One bias-corrected Adam update, in place.
pub fn adam_step<T: Real>(
    params: &mut [T],
    grads: &[T],
    state: &mut AdamState<T>,
    cfg: &AdamConfig,
) -> Result<()> {
    if params.len() != grads.len() || state.m.len() != params.len() {
        return Err(Error::validation(format!(
            "Adam shapes differ: {} params, {} grads, {} moments",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
        return Err(Error::Numeric(format!(
            "gradient of parameter {i} is {}",
            grads[i]
        )));
    }
    state.t += 1;
    let (b1, b2) = (T::lit(cfg.beta1), T::lit(cfg.beta2));
    let (lr, eps) = (T::lit(cfg.learning_rate), T::lit(cfg.eps));
    let t = state.t as i32;
    let c1 = T::one() - b1.powi(t);
    let c2 = T::one() - b2.powi(t);
    for (((p, &g), m), v) in params
        .iter_mut()
        .zip(grads)
        .zip(state.m.iter_mut())
        .zip(state.v.iter_mut())
    {
        *m = b1 * *m + (T::one() - b1) * g;
        *v = b2 * *v + (T::one() - b2) * g * g;
        let mh = *m / c1;
        let vh = *v / c2;
        *p -= lr * mh / (vh.sqrt() + eps);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressConfig {
    pub ansatz: AnsatzConfig,
    pub learning_rate: f64,
    pub epochs: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub master_seed: u64,
    /// Stop once the infidelity drops below this value.
    #[serde(default)]
    pub early_stop: Option<f64>,
}

impl CompressConfig {
    pub fn new(ansatz: AnsatzConfig, master_seed: u64) -> Self {
        Self {
            ansatz,
            learning_rate: 0.03,
            epochs: 10_000,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            master_seed,
            early_stop: None,
        }
    }

    pub fn adam(&self) -> AdamConfig {
        AdamConfig {
            learning_rate: self.learning_rate,
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(Error::validation("learning rate must be positive"));
        }
        self.ansatz.validate()?;
        if self.ansatz.kind.is_hierarchical() {
            return Err(Error::validation(
                "compression needs a non-hierarchical ansatz",
            ));
        }
        Ok(())
    }
}

/// `count` parameters uniform on `[0, 1)`.
pub fn uniform_init<T: Real>(count: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| T::lit(rng.random::<f64>())).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressOutcome<T> {
    pub params: Vec<T>,
    pub fidelity: T,
    pub initial_fidelity: T,
    pub epochs_run: usize,
}

/// Fits `circuit` applied to `|0...0>` to `target`.
pub fn compress_state<T: Real>(
    circuit: &Circuit<T>,
    target: &StateVector<T>,
    cfg: &CompressConfig,
    seed: u64,
) -> Result<CompressOutcome<T>> {
    if circuit.num_qubits() != target.num_qubits() {
        return Err(Error::validation(format!(
            "ansatz has {} qubits but the target has {}",
            circuit.num_qubits(),
            target.num_qubits()
        )));
    }
    let zero = StateVector::zero_state(circuit.num_qubits())?;
    let cost = TerminalCost::Infidelity {
        target: target.clone(),
    };
    let adam = cfg.adam();
    let mut params = uniform_init::<T>(circuit.num_params(), seed);
    let mut state = AdamState::new(params.len());
    let mut initial = None;
    let mut epochs_run = 0;
    for _ in 0..cfg.epochs {
        let (loss, grad) = gradient(circuit, &params, &zero, &cost)?;
        initial.get_or_insert(T::one() - loss);
        if cfg.early_stop.is_some_and(|tol| loss.as_f64() < tol) {
            break;
        }
        adam_step(&mut params, &grad, &mut state, &adam)?;
        epochs_run += 1;
    }
    let fidelity = run_circuit(circuit, &params, &zero)?.fidelity(target)?;
    Ok(CompressOutcome {
        params,
        fidelity,
        initial_fidelity: initial.unwrap_or(fidelity),
        epochs_run,
    })
}

/// Compresses one preprocessed image.
pub fn encode_image<T: Real>(
    x: &FlatImage<T>,
    cfg: &CompressConfig,
    seed: u64,
) -> Result<EncodedRecord> {
    encode_labeled(x, 0, 0, cfg, seed).map(|(r, _)| r)
}

fn encode_labeled<T: Real>(
    x: &FlatImage<T>,
    index: usize,
    label: u8,
    cfg: &CompressConfig,
    seed: u64,
) -> Result<(EncodedRecord, T)> {
    cfg.validate()?;
    let width = 2 * x.n + 1;
    if cfg.ansatz.num_qubits != width {
        return Err(Error::validation(format!(
            "ansatz has {} qubits but the image needs {width}",
            cfg.ansatz.num_qubits
        )));
    }
    let circuit = build::<T>(&cfg.ansatz)?.circuit;
    let target = frqi_state(x)?;
    let out = compress_state(&circuit, &target, cfg, seed)?;
    Ok((
        EncodedRecord {
            index,
            label,
            ansatz: cfg.ansatz.clone(),
            params: out.params.iter().map(|p| p.as_f64()).collect(),
            fidelity: out.fidelity.as_f64(),
            seed,
        },
        out.initial_fidelity,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityStats {
    pub mean: f64,
    pub percentile_25: f64,
    pub percentile_75: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// Percentile of a sorted sample with linear interpolation between ranks.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn fidelity_stats_of(values: &[f64]) -> Result<FidelityStats> {
    if values.is_empty() {
        return Err(Error::validation("no fidelities to summarize"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(FidelityStats {
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        percentile_25: percentile(&sorted, 0.25),
        percentile_75: percentile(&sorted, 0.75),
        min: sorted[0],
        max: sorted[sorted.len() - 1],
        count: sorted.len(),
    })
}

pub fn fidelity_stats(records: &[EncodedRecord]) -> Result<FidelityStats> {
    fidelity_stats_of(&records.iter().map(|r| r.fidelity).collect::<Vec<_>>())
}

/// Runs `f` over `0..count` on a pool of `workers` threads, keeping order.
pub fn run_jobs<R, F>(count: usize, workers: usize, f: F) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(usize) -> Result<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::validation(format!("worker pool: {e}")))?;
    pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                f(i).map_err(|e| Error::Job {
                    index: i,
                    source: Box::new(e),
                })
            })
            .collect()
    })
}

/// Compresses every image of `data` after resizing to `2^n x 2^n`.
pub fn encode_dataset<T: Real>(
    data: &LabeledDataset<T>,
    n: usize,
    cfg: &CompressConfig,
    workers: usize,
) -> Result<(Vec<EncodedRecord>, FidelityStats)> {
    cfg.validate()?;
    let records = run_jobs(data.len(), workers, |i| {
        let x = preprocess(&data.images[i], n)?;
        let index = data.indices[i];
        let seed = image_seed(cfg.master_seed, index);
        encode_labeled(&x, index, data.labels[i], cfg, seed).map(|(r, _)| r)
    })?;
    let stats = fidelity_stats(&records)?;
    Ok((records, stats))
}

/// Like [`encode_dataset`] but also returns each image's fidelity at
/// initialization.
pub fn encode_dataset_with_initial<T: Real>(
    data: &LabeledDataset<T>,
    n: usize,
    cfg: &CompressConfig,
    workers: usize,
) -> Result<Vec<(EncodedRecord, f64)>> {
    cfg.validate()?;
    run_jobs(data.len(), workers, |i| {
        let x = preprocess(&data.images[i], n)?;
        let index = data.indices[i];
        let seed = image_seed(cfg.master_seed, index);
        encode_labeled(&x, index, data.labels[i], cfg, seed).map(|(r, f)| (r, f.as_f64()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adam_zero_gradient_is_noop() {
        let mut p = vec![0.3f64, -1.2];
        let mut s = AdamState::new(2);
        adam_step(&mut p, &[0.0, 0.0], &mut s, &AdamConfig::with_lr(0.1)).unwrap();
        assert_eq!(p, vec![0.3, -1.2]);
    }

    #[test]
    fn adam_first_step_closed_form() {
        let mut p = vec![1.0f64];
        let mut s = AdamState::new(1);
        let cfg = AdamConfig::with_lr(0.03);
        adam_step(&mut p, &[1.0], &mut s, &cfg).unwrap();
        // m_hat = 1, v_hat = 1
        assert!((p[0] - (1.0 - 0.03 / (1.0 + 1e-8))).abs() < 1e-15);
    }

    #[test]
    fn adam_elementwise() {
        let cfg = AdamConfig::with_lr(0.01);
        let mut both = vec![0.5f64, 0.5];
        let mut s = AdamState::new(2);
        let mut solo = vec![0.5f64];
        let mut s1 = AdamState::new(1);
        for k in 0..5 {
            let g = (k as f64).sin();
            adam_step(&mut both, &[g, 3.0], &mut s, &cfg).unwrap();
            adam_step(&mut solo, &[g], &mut s1, &cfg).unwrap();
        }
        assert_eq!(both[0], solo[0]);
    }

    #[test]
    fn adam_rejects_nan() {
        let mut p = vec![0.0f64; 3];
        let mut s = AdamState::new(3);
        let err = adam_step(
            &mut p,
            &[0.0, f64::NAN, 0.0],
            &mut s,
            &AdamConfig::default(),
        );
        match err {
            Err(Error::Numeric(m)) => assert!(m.contains("parameter 1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stats_examples() {
        let s = fidelity_stats_of(&[0.9, 1.0]).unwrap();
        assert!((s.mean - 0.95).abs() < 1e-15);
        let s = fidelity_stats_of(&[0.7; 5]).unwrap();
        assert_eq!(
            (s.min, s.percentile_25, s.percentile_75, s.max),
            (0.7, 0.7, 0.7, 0.7)
        );
        let v: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let s = fidelity_stats_of(&v).unwrap();
        assert!((s.percentile_25 - 0.25).abs() < 1e-12);
        assert!((s.percentile_75 - 0.75).abs() < 1e-12);
        assert!(fidelity_stats_of(&[]).is_err());
    }

    #[test]
    fn zero_epochs_keeps_initialization() {
        let x = FlatImage::new(vec![0.2f64, 0.4, 0.6, 0.8]).unwrap();
        let mut cfg = CompressConfig::new(AnsatzConfig::sparse(3, 1), 5);
        cfg.epochs = 0;
        let r = encode_image(&x, &cfg, 11).unwrap();
        assert_eq!(r.params, uniform_init::<f64>(r.params.len(), 11));
        assert!((0.0..=1.0).contains(&r.fidelity));
    }

    #[test]
    fn width_mismatch() {
        let x = FlatImage::new(vec![0.0f64; 16]).unwrap();
        let cfg = CompressConfig::new(AnsatzConfig::sparse(3, 1), 5);
        assert!(encode_image(&x, &cfg, 0).is_err());
    }
}
