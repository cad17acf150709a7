//! Evaluation metrics and noise emulation on outcome distributions.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// 97.5% quantile of the standard normal.
pub const Z_95: f64 = 1.959964;

/// Wilson score interval for `successes` out of `trials` at critical value `z`.
pub fn wilson_interval_z(successes: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::validation(format!(
            "Wilson interval needs 0 <= successes <= trials, trials >= 1 (got {successes}/{trials})"
        )));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Ok(((centre - half).max(0.0), (centre + half).min(1.0)))
}

/// Wilson interval at the given two-sided confidence level.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    let z = if (confidence - 0.95).abs() < 1e-12 {
        Z_95
    } else {
        normal_quantile(0.5 + confidence / 2.0)?
    };
    wilson_interval_z(successes, trials, z)
}

fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::validation(format!("quantile of {p}")));
    }
    Ok(Normal::standard().inverse_cdf(p))
}

/// Mean Euclidean distance of each vector to the centroid of the set.
pub fn spread_of_counts(vectors: &[Vec<f64>]) -> Result<f64> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::validation("spread of an empty set"))?;
    let dim = first.len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::validation("count vectors differ in length"));
    }
    let n = vectors.len() as f64;
    let mut centroid = vec![0.0; dim];
    for v in vectors {
        for (c, x) in centroid.iter_mut().zip(v) {
            *c += x;
        }
    }
    centroid.iter_mut().for_each(|c| *c /= n);
    let total: f64 = vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(&centroid)
                .map(|(x, c)| (x - c) * (x - c))
                .sum::<f64>()
                .sqrt()
        })
        .sum();
    Ok(total / n)
}

/// Global depolarizing channel on an outcome distribution.
pub fn depolarize(probs: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::validation(format!(
            "depolarizing strength {lambda} outside [0, 1]"
        )));
    }
    let u = 1.0 / probs.len() as f64;
    Ok(probs
        .iter()
        .map(|&p| (1.0 - lambda) * p + lambda * u)
        .collect())
}
