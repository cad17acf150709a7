use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Multinomial draw of `shots` outcomes from `probs`.
///
/// Drawn as a chain of conditional binomials in index order, so the result
/// depends only on `(probs, shots, seed)`.
pub fn sample_counts<T: Real>(probs: &[T], shots: u64, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::validation("shots must be at least 1"));
    }
    if probs.is_empty() {
        return Err(Error::validation("empty probability vector"));
    }
    let mut clean = Vec::with_capacity(probs.len());
    for (i, &p) in probs.iter().enumerate() {
        let p = p.as_f64();
        if !p.is_finite() || p < -1e-12 {
            return Err(Error::validation(format!("probability {i} is {p}")));
        }
        clean.push(p.max(0.0));
    }
    let total: f64 = clean.iter().sum();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::validation(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; clean.len()];
    let mut left = shots;
    let mut mass = total;
    let last = clean.len() - 1;
    for (i, &p) in clean.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i == last {
            counts[i] = left;
            break;
        }
        let q = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = if q == 0.0 {
            0
        } else if q == 1.0 {
            left
        } else {
            Binomial::new(left, q)
                .expect("valid binomial")
                .sample(&mut rng)
        };
        counts[i] = k;
        left -= k;
        mass -= p;
    }
    Ok(counts)
}
