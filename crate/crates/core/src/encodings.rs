//! Image preprocessing and exact image states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::sim::StateVector;

/// Row-major grayscale image with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Image<T> {
    pub width: usize,
    pub height: usize,
    pub values: Vec<T>,
}

impl<T: Real> Image<T> {
    pub fn new(width: usize, height: usize, values: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 || values.len() != width * height {
            return Err(Error::validation(format!(
                "{width}x{height} image cannot hold {} values",
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn at(&self, r: usize, c: usize) -> T {
        self.values[r * self.width + c]
    }
}

/// Pixel values of a `2^n x 2^n` image in snake order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatImage<T> {
    pub n: usize,
    pub values: Vec<T>,
}

impl<T: Real> FlatImage<T> {
    /// Wraps `4^n` values that are already in traversal order.
    pub fn new(values: Vec<T>) -> Result<Self> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() || !len.trailing_zeros().is_multiple_of(2) {
            return Err(Error::validation(format!(
                "{len} values is not a power of four"
            )));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize / 2,
            values,
        })
    }
}

/// Source coordinate sampled by output pixel `dst`, with half-pixel centres.
fn source_coord(dst: usize, src_size: usize, dst_size: usize) -> f64 {
    let scale = src_size as f64 / dst_size as f64;
    ((dst as f64 + 0.5) * scale - 0.5).clamp(0.0, (src_size - 1) as f64)
}

fn axis_weights(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    (0..dst)
        .map(|d| {
            let x = source_coord(d, src, dst);
            let i0 = x.floor() as usize;
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, x - i0 as f64)
        })
        .collect()
}

/// Bilinear resize to `target x target`.
pub fn rescale_bilinear<T: Real>(img: &Image<T>, target: usize) -> Result<Image<T>> {
    if target == 0 {
        return Err(Error::validation("target size must be at least 1"));
    }
    if img.width == target && img.height == target {
        return Ok(img.clone());
    }
    let rows = axis_weights(img.height, target);
    let cols = axis_weights(img.width, target);
    let mut values = Vec::with_capacity(target * target);
    for &(r0, r1, wr) in &rows {
        for &(c0, c1, wc) in &cols {
            let p = |r: usize, c: usize| img.at(r, c).as_f64();
            let top = p(r0, c0) * (1.0 - wc) + p(r0, c1) * wc;
            let bottom = p(r1, c0) * (1.0 - wc) + p(r1, c1) * wc;
            let v = top * (1.0 - wr) + bottom * wr;
            values.push(T::lit(v.clamp(0.0, 1.0)));
        }
    }
    Image::new(target, target, values)
}

/// Even rows left to right, odd rows right to left.
pub fn snake_flatten<T: Real>(img: &Image<T>) -> Result<FlatImage<T>> {
    let side = img.width;
    if img.height != side || !side.is_power_of_two() {
        return Err(Error::validation(format!(
            "snake flatten needs a square power-of-two image, got {}x{}",
            img.width, img.height
        )));
    }
    let mut values = Vec::with_capacity(side * side);
    for r in 0..side {
        let row = &img.values[r * side..(r + 1) * side];
        if r % 2 == 0 {
            values.extend_from_slice(row);
        } else {
            values.extend(row.iter().rev());
        }
    }
    FlatImage::new(values)
}

/// Inverse of [`snake_flatten`].
pub fn snake_unflatten<T: Real>(flat: &FlatImage<T>) -> Image<T> {
    let side = 1usize << flat.n;
    let mut values = Vec::with_capacity(side * side);
    for r in 0..side {
        let row = &flat.values[r * side..(r + 1) * side];
        if r % 2 == 0 {
            values.extend_from_slice(row);
        } else {
            values.extend(row.iter().rev());
        }
    }
    Image {
        width: side,
        height: side,
        values,
    }
}

/// Resize to `2^n x 2^n` and flatten.
pub fn preprocess<T: Real>(img: &Image<T>, n: usize) -> Result<FlatImage<T>> {
    snake_flatten(&rescale_bilinear(img, 1 << n)?)
}

fn check_unit_range<T: Real>(x: &FlatImage<T>) -> Result<()> {
    let tol = T::lit(1e-12);
    for (j, &v) in x.values.iter().enumerate() {
        if !(v >= -tol && v <= T::one() + tol) {
            return Err(Error::validation(format!(
                "pixel {j} has value {v} outside [0, 1]"
            )));
        }
    }
    Ok(())
}

/// FRQI state on `2n + 1` qubits; the color qubit is the last one.
pub fn frqi_state<T: Real>(x: &FlatImage<T>) -> Result<StateVector<T>> {
    check_unit_range(x)?;
    let norm = T::one() / T::lit((1u64 << x.n) as f64);
    let mut amps = Vec::with_capacity(2 * x.values.len());
    for &v in &x.values {
        let angle = T::FRAC_PI_2() * v.max(T::zero()).min(T::one());
        let (s, co) = angle.sin_cos();
        amps.push(C::new(norm * co, T::zero()));
        amps.push(C::new(norm * s, T::zero()));
    }
    StateVector::from_amplitudes(amps)
}

/// Pixel values as normalized amplitudes on `2n` qubits.
pub fn amplitude_state<T: Real>(x: &FlatImage<T>) -> Result<StateVector<T>> {
    let norm = x.values.iter().map(|&v| v * v).sum::<T>().sqrt();
    if norm <= T::lit(1e-12) {
        return Err(Error::ZeroNorm);
    }
    if x.values.len() < 2 {
        return Err(Error::validation(
            "amplitude encoding needs at least 2 pixels",
        ));
    }
    StateVector::from_amplitudes(
        x.values
            .iter()
            .map(|&v| C::new(v / norm, T::zero()))
            .collect(),
    )
}

/// `round(x * (2^q - 1))`, halves away from zero.
pub fn neqr_level<T: Real>(x: T, q: usize) -> usize {
    let top = ((1usize << q) - 1) as f64;
    (x.as_f64().clamp(0.0, 1.0) * top).round() as usize
}

/// NEQR state on `2n + q` qubits with a `q`-bit color register.
pub fn neqr_state<T: Real>(x: &FlatImage<T>, q: usize) -> Result<StateVector<T>> {
    if !(1..=8).contains(&q) {
        return Err(Error::validation(format!(
            "NEQR color register of {q} qubits outside 1..=8"
        )));
    }
    check_unit_range(x)?;
    let positions = x.values.len();
    let mut amps = vec![C::new(T::zero(), T::zero()); positions << q];
    let amp = T::one() / T::lit((1u64 << x.n) as f64);
    for (j, &v) in x.values.iter().enumerate() {
        amps[(j << q) + neqr_level(v, q)] = C::new(amp, T::zero());
    }
    StateVector::from_amplitudes(amps)
}

/// Which exact state an image maps to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingKind {
    Frqi,
    Amplitude,
    Neqr(usize),
}

impl EncodingKind {
    pub fn num_qubits(self, n: usize) -> usize {
        match self {
            EncodingKind::Frqi => 2 * n + 1,
            EncodingKind::Amplitude => 2 * n,
            EncodingKind::Neqr(q) => 2 * n + q,
        }
    }

    pub fn encode<T: Real>(self, x: &FlatImage<T>) -> Result<StateVector<T>> {
        match self {
            EncodingKind::Frqi => frqi_state(x),
            EncodingKind::Amplitude => amplitude_state(x),
            EncodingKind::Neqr(q) => neqr_state(x, q),
        }
    }
}

impl std::fmt::Display for EncodingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EncodingKind::Frqi => write!(f, "frqi"),
            EncodingKind::Amplitude => write!(f, "amplitude"),
            EncodingKind::Neqr(q) => write!(f, "neqr:{q}"),
        }
    }
}

impl std::str::FromStr for EncodingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frqi" => Ok(EncodingKind::Frqi),
            "amplitude" => Ok(EncodingKind::Amplitude),
            _ => {
                let q = s
                    .strip_prefix("neqr:")
                    .and_then(|q| q.parse::<usize>().ok())
                    .ok_or_else(|| {
                        Error::validation(format!(
                            "unknown encoding {s:?} (expected frqi, amplitude or neqr:<q>)"
                        ))
                    })?;
                if !(1..=8).contains(&q) {
                    return Err(Error::validation(format!("neqr:{q} outside 1..=8")));
                }
                Ok(EncodingKind::Neqr(q))
            }
        }
    }
}
