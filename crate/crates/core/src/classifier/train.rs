use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{BoundModel, ClassifierConfig, ClassifierHead, ClassifierModel, InputSource};
use crate::compressor::{adam_step, run_jobs, uniform_init, AdamConfig, AdamState};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::sim::adjoint::{marginal_cogradient, marginal_loss, MarginalLoss};
use crate::sim::gradient_with;

/// Learning-rate phases with a Gaussian kick to every parameter between
/// consecutive phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbSchedule {
    /// `(learning_rate, epochs)` per phase.
    pub phases: Vec<(f64, usize)>,
    pub sigma: f64,
}

impl Default for PerturbSchedule {
    fn default() -> Self {
        Self {
            phases: vec![(1e-3, 100), (1e-4, 100)],
            sigma: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    /// Mean per-sample loss of every epoch.
    pub epoch_loss: Vec<f64>,
}

struct SampleGrad {
    loss: f64,
    theta: Vec<f64>,
    head: Vec<f64>,
}

fn head_gradient(ml: &MarginalLoss<f64>) -> Vec<f64> {
    let cols = ml.probs.len();
    let mut g = Vec::with_capacity(ml.dscores.len() * (cols + 1));
    for &gi in &ml.dscores {
        g.extend(ml.probs.iter().map(|&p| gi * p));
    }
    g.extend_from_slice(&ml.dscores);
    g
}

/// Per-sample loss and gradients. With `features` the circuit is skipped.
fn sample_grad<T: Real>(
    bound: &BoundModel<T>,
    data: &dyn InputSource<T>,
    features: Option<&[Vec<f64>]>,
    i: usize,
    scale: f64,
) -> Result<SampleGrad> {
    let head = &bound.model.head;
    let label = data.label(i);
    if let Some(f) = features {
        let ml = marginal_loss(&f[i], &head.a, &head.b, label, scale)?;
        return Ok(SampleGrad {
            loss: ml.loss,
            theta: Vec::new(),
            head: head_gradient(&ml),
        });
    }
    let input = data.state(i)?;
    let mut kept = None;
    let (loss, grad) = gradient_with(
        &bound.circuit,
        &bound.theta,
        &input,
        &bound.projections,
        |out| {
            let probs: Vec<f64> = out
                .marginal_probs_on(&bound.measured)?
                .into_iter()
                .map(|p| p.as_f64())
                .collect();
            let ml = marginal_loss(&probs, &head.a, &head.b, label, scale)?;
            let dp: Vec<T> = ml.dprobs.iter().map(|&d| T::lit(d)).collect();
            let lam: Vec<C<T>> = marginal_cogradient(out, &bound.measured, &dp);
            let loss = T::lit(ml.loss);
            kept = Some(ml);
            Ok((loss, lam))
        },
    )?;
    let ml = kept.expect("cost evaluated");
    Ok(SampleGrad {
        loss: loss.as_f64(),
        theta: grad.iter().map(|g| g.as_f64()).collect(),
        head: head_gradient(&ml),
    })
}

/// Exact marginals of every sample when no circuit parameters are trained.
fn precompute_features<T: Real>(
    bound: &BoundModel<T>,
    data: &dyn InputSource<T>,
    workers: usize,
) -> Result<Vec<Vec<f64>>> {
    run_jobs(data.len(), workers, |i| {
        bound.probabilities(&data.state(i)?)
    })
}

/// `sum_{(x,y) in batch} [lse(C s~) - C s~_y]` at the model's parameters.
pub fn loss_batch<T: Real>(
    model: &ClassifierModel,
    data: &dyn InputSource<T>,
    batch: &[usize],
    scale: f64,
) -> Result<f64> {
    let bound = BoundModel::<T>::new(model.clone())?;
    let mut total = 0.0;
    for &i in batch {
        let probs = bound.probabilities(&data.state(i)?)?;
        let ml = marginal_loss(&probs, &model.head.a, &model.head.b, data.label(i), scale)?;
        total += ml.loss;
    }
    if !total.is_finite() {
        return Err(Error::Numeric(format!("batch loss is {total}")));
    }
    Ok(total)
}

/// The model training starts from: uniform circuit parameters and a head
/// drawn from a seed stream of its own.
pub fn initial_model<T: Real>(
    cfg: &ClassifierConfig,
    num_qubits: usize,
) -> Result<ClassifierModel> {
    let theta_len = match &cfg.ansatz {
        Some(a) => crate::ansatz::build::<T>(a)?.num_params(),
        None => 0,
    };
    let theta = uniform_init::<f64>(theta_len, cfg.master_seed);
    let head = ClassifierHead::init(cfg.m, cfg.k, cfg.head_init, cfg.master_seed ^ HEAD_STREAM)?;
    Ok(ClassifierModel {
        num_qubits,
        ansatz: cfg.ansatz.clone(),
        theta,
        head,
    })
}

const HEAD_STREAM: u64 = 0x4845_4144;
const SHUFFLE_STREAM: u64 = 0x5348_5546;
const KICK_STREAM: u64 = 0x4b49_434b;

/// Mini-batch Adam over circuit parameters and head jointly.
pub fn train_classifier<T: Real>(
    data: &dyn InputSource<T>,
    cfg: &ClassifierConfig,
    workers: usize,
) -> Result<(ClassifierModel, TrainTrace)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::validation("empty training set"));
    }
    if cfg.batch_size > data.len() {
        return Err(Error::validation(format!(
            "batch size {} exceeds the {} training samples",
            cfg.batch_size,
            data.len()
        )));
    }
    if let Some(i) = (0..data.len()).find(|&i| data.label(i) >= cfg.k) {
        return Err(Error::validation(format!(
            "sample {i} has label {} outside 0..{}",
            data.label(i),
            cfg.k
        )));
    }
    let mut model = initial_model::<T>(cfg, data.num_qubits())?;
    let mut bound = BoundModel::<T>::new(model.clone())?;
    let features = if bound.circuit.num_params() == 0 {
        Some(precompute_features(&bound, data, workers)?)
    } else {
        None
    };

    let phases = match &cfg.schedule {
        Some(s) => s.phases.clone(),
        None => vec![(cfg.learning_rate, cfg.epochs)],
    };
    let n_theta = model.theta.len();
    let mut flat: Vec<f64> = model
        .theta
        .iter()
        .copied()
        .chain(model.head.to_flat())
        .collect();
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.master_seed ^ SHUFFLE_STREAM);
    let mut kick_rng = ChaCha8Rng::seed_from_u64(cfg.master_seed ^ KICK_STREAM);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut trace = TrainTrace {
        epoch_loss: Vec::new(),
    };

    for (phase, &(lr, epochs)) in phases.iter().enumerate() {
        if phase > 0 {
            let sigma = cfg.schedule.as_ref().map_or(0.0, |s| s.sigma);
            let kick = Normal::new(0.0, sigma)
                .map_err(|e| Error::validation(format!("perturbation: {e}")))?;
            for v in flat.iter_mut() {
                *v += kick.sample(&mut kick_rng);
            }
        }
        let adam = AdamConfig::with_lr(lr);
        let mut state = AdamState::<f64>::new(flat.len());
        for _ in 0..epochs {
            order.shuffle(&mut shuffle_rng);
            let mut epoch_loss = 0.0;
            for batch in order.chunks(cfg.batch_size) {
                model.theta.copy_from_slice(&flat[..n_theta]);
                model.head.set_flat(&flat[n_theta..]);
                bound.model.head = model.head.clone();
                for (t, &v) in bound.theta.iter_mut().zip(&model.theta) {
                    *t = T::lit(v);
                }
                let grads = run_jobs(batch.len(), workers, |j| {
                    sample_grad(&bound, data, features.as_deref(), batch[j], cfg.scale)
                })?;
                let mut g = vec![0.0; flat.len()];
                for s in &grads {
                    epoch_loss += s.loss;
                    for (acc, v) in g.iter_mut().zip(s.theta.iter().chain(&s.head)) {
                        *acc += v;
                    }
                }
                adam_step(&mut flat, &g, &mut state, &adam)?;
            }
            trace.epoch_loss.push(epoch_loss / data.len() as f64);
        }
    }
    model.theta.copy_from_slice(&flat[..n_theta]);
    model.head.set_flat(&flat[n_theta..]);
    Ok((model, trace))
}

/// Trains only the head on the last-`m` marginals of the inputs and reports
/// test accuracy.
pub fn baseline_postprocess_only<T: Real>(
    m: usize,
    train: &dyn InputSource<T>,
    test: &dyn InputSource<T>,
    cfg: &ClassifierConfig,
    workers: usize,
) -> Result<(f64, ClassifierModel)> {
    let mut cfg = cfg.clone();
    cfg.ansatz = None;
    cfg.m = m;
    let (model, _) = train_classifier(train, &cfg, workers)?;
    let acc = super::accuracy(&model, test, &super::EvalConfig::exact(), workers)?;
    Ok((acc, model))
}
