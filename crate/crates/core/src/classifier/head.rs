use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trainable affine post-processing `s~ = A s + b` of a `2^m` outcome
/// distribution into `k` class scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierHead {
    /// `k` rows of `2^m` weights.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub m: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum HeadInit {
    /// Identity on the upper-left corner plus Gaussian noise on
    /// every entry of `A` and `b`.
    IdentityCorner { sigma: f64 },
    /// Every entry uniform on `[0, 1)`.
    Uniform,
}

impl Default for HeadInit {
    fn default() -> Self {
        HeadInit::IdentityCorner { sigma: 0.01 }
    }
}

impl ClassifierHead {
    fn check_shape(m: usize, k: usize) -> Result<()> {
        if k < 2 || m == 0 || m > 24 {
            return Err(Error::validation(format!(
                "head needs k >= 2 classes and 1 <= m <= 24 qubits (got k={k}, m={m})"
            )));
        }
        Ok(())
    }

    /// `A[i][j] = delta_ij`, `b = 0`. Rows past `2^m` stay zero.
    pub fn identity_corner(m: usize, k: usize) -> Result<Self> {
        Self::check_shape(m, k)?;
        let cols = 1 << m;
        let a = (0..k)
            .map(|i| (0..cols).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Ok(Self {
            a,
            b: vec![0.0; k],
            m,
            k,
        })
    }

    pub fn init(m: usize, k: usize, how: HeadInit, seed: u64) -> Result<Self> {
        let mut head = Self::identity_corner(m, k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match how {
            HeadInit::IdentityCorner { sigma } => {
                let noise = Normal::new(0.0, sigma)
                    .map_err(|e| Error::validation(format!("head noise: {e}")))?;
                for v in head.a.iter_mut().flatten().chain(head.b.iter_mut()) {
                    *v += noise.sample(&mut rng);
                }
            }
            HeadInit::Uniform => {
                let u = Uniform::new(0.0, 1.0).expect("valid range");
                for v in head.a.iter_mut().flatten().chain(head.b.iter_mut()) {
                    *v = u.sample(&mut rng);
                }
            }
        }
        Ok(head)
    }

    pub fn from_parts(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        let k = a.len();
        let cols = a.first().map_or(0, Vec::len);
        if !cols.is_power_of_two() || b.len() != k || a.iter().any(|r| r.len() != cols) {
            return Err(Error::validation(
                "head matrix is ragged or does not match the bias",
            ));
        }
        let m = cols.trailing_zeros() as usize;
        Self::check_shape(m, k)?;
        if a.iter().flatten().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::validation("head has non-finite entries"));
        }
        Ok(Self { a, b, m, k })
    }

    pub fn outcomes(&self) -> usize {
        1 << self.m
    }

    pub fn num_params(&self) -> usize {
        self.k * (self.outcomes() + 1)
    }

    /// `A s + b`.
    pub fn apply(&self, s: &[f64]) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, &b)| row.iter().zip(s).map(|(a, x)| a * x).sum::<f64>() + b)
            .collect()
    }

    /// Flattened `[A row-major, b]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.a.iter().flatten().chain(&self.b).copied().collect()
    }

    pub fn set_flat(&mut self, flat: &[f64]) {
        let cols = self.outcomes();
        for (i, row) in self.a.iter_mut().enumerate() {
            row.copy_from_slice(&flat[i * cols..(i + 1) * cols]);
        }
        self.b.copy_from_slice(&flat[self.k * cols..]);
    }
}

/// Index of the largest score; ties go to the smallest index.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}
