use serde::{Deserialize, Serialize};

use super::metrics::{depolarize, spread_of_counts, wilson_interval};
use super::{argmax, BoundModel, ClassifierModel, InputSource};
use crate::compressor::run_jobs;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{sample_counts, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// `None` reads exact marginals.
    pub shots: Option<u64>,
    pub depolarize_lambda: f64,
    pub seed: u64,
}

impl EvalConfig {
    pub fn exact() -> Self {
        Self {
            shots: None,
            depolarize_lambda: 0.0,
            seed: 0,
        }
    }

    pub fn with_shots(shots: u64, depolarize_lambda: f64, seed: u64) -> Self {
        Self {
            shots: Some(shots),
            depolarize_lambda,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.depolarize_lambda) {
            return Err(Error::validation(format!(
                "depolarizing strength {} outside [0, 1]",
                self.depolarize_lambda
            )));
        }
        if self.shots == Some(0) {
            return Err(Error::validation("shots must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountVector {
    /// Probabilities, or integer counts when sampling.
    pub raw: Vec<f64>,
    /// Head output.
    pub post: Vec<f64>,
}

/// Runs one input through the model. `seed` drives the shot sampling.
pub fn classify_forward<T: Real>(
    bound: &BoundModel<T>,
    input: &StateVector<T>,
    eval: &EvalConfig,
    seed: u64,
) -> Result<(CountVector, usize)> {
    eval.validate()?;
    let mut probs = bound.probabilities(input)?;
    if eval.depolarize_lambda > 0.0 {
        probs = depolarize(&probs, eval.depolarize_lambda)?;
    }
    let (raw, freq) = match eval.shots {
        None => (probs.clone(), probs),
        Some(shots) => {
            let total: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= total);
            let counts = sample_counts(&probs, shots, seed)?;
            let raw: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            // the head was trained on probabilities
            let freq = raw.iter().map(|c| c / shots as f64).collect();
            (raw, freq)
        }
    };
    let post = bound.model.head.apply(&freq);
    let class = argmax(&post);
    Ok((CountVector { raw, post }, class))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub correct: u64,
    pub total: u64,
    pub wilson_95: (f64, f64),
    /// Spread of the raw vectors.
    pub spread: f64,
    pub predictions: Vec<usize>,
    #[serde(skip)]
    pub counts: Vec<CountVector>,
}

/// Classifies every input. Sample `i` is drawn with seed `eval.seed ^ i`.
pub fn evaluate<T: Real>(
    model: &ClassifierModel,
    data: &dyn InputSource<T>,
    eval: &EvalConfig,
    workers: usize,
) -> Result<EvalReport> {
    eval.validate()?;
    if data.is_empty() {
        return Err(Error::validation("accuracy of an empty dataset"));
    }
    let bound = BoundModel::<T>::new(model.clone())?;
    let out = run_jobs(data.len(), workers, |i| {
        classify_forward(&bound, &data.state(i)?, eval, eval.seed ^ i as u64)
    })?;
    let total = out.len() as u64;
    let correct = out
        .iter()
        .enumerate()
        .filter(|(i, (_, c))| *c == data.label(*i))
        .count() as u64;
    let raws: Vec<Vec<f64>> = out.iter().map(|(cv, _)| cv.raw.clone()).collect();
    let spread = spread_of_counts(&raws)?;
    let (counts, predictions) = out.into_iter().unzip();
    Ok(EvalReport {
        accuracy: correct as f64 / total as f64,
        correct,
        total,
        wilson_95: wilson_interval(correct, total, 0.95)?,
        spread,
        predictions,
        counts,
    })
}

/// Fraction of correct predictions.
pub fn accuracy<T: Real>(
    model: &ClassifierModel,
    data: &dyn InputSource<T>,
    eval: &EvalConfig,
    workers: usize,
) -> Result<f64> {
    Ok(evaluate(model, data, eval, workers)?.accuracy)
}
