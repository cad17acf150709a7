use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 24;

/// Dense pure state over `num_qubits` qubits.
///
/// Basis index `i` has qubit 0 as its most significant bit and qubit
/// `num_qubits - 1` as its least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amps: Vec<C<T>>,
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "register of {n} qubits outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl<T: Real> StateVector<T> {
    /// `|0...0>` on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        check_width(n)?;
        let mut amps = vec![C::zero(); 1 << n];
        amps[0] = C::new(T::one(), T::zero());
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    /// Wraps an amplitude vector, checking its length is a power of two and
    /// its norm is one within `1e-8`.
    pub fn from_amplitudes(amps: Vec<C<T>>) -> Result<Self> {
        let state = Self::from_amplitudes_unnormalized(amps)?;
        let defect = (state.norm_sqr() - T::one()).abs();
        if defect > T::lit(1e-8) {
            return Err(Error::validation(format!(
                "amplitudes not normalized (|norm^2 - 1| = {defect:e})"
            )));
        }
        Ok(state)
    }

    pub(crate) fn from_amplitudes_unnormalized(amps: Vec<C<T>>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::validation(format!(
                "amplitude vector length {len} is not a power of two >= 2"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_width(n)?;
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::from_amplitudes(values.iter().map(|&v| C::new(v, T::zero())).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C<T>] {
        &self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C<T>] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::validation(format!(
                "dimension mismatch: {} vs {} qubits",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        self.check_same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(C::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|<self|other>|^2`, clamped into `[0, 1]`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        let f = self.inner(other)?.norm_sqr();
        Ok(f.max(T::zero()).min(T::one()))
    }

    /// Distribution of the last `m` qubits; qubit `N - m` is the most
    /// significant bit of the outcome index.
    pub fn marginal_probs(&self, m: usize) -> Result<Vec<T>> {
        if m == 0 || m > self.num_qubits {
            return Err(Error::validation(format!(
                "cannot marginalize onto the last {m} of {} qubits",
                self.num_qubits
            )));
        }
        let width = 1usize << m;
        let mut out = vec![T::zero(); width];
        for chunk in self.amps.chunks_exact(width) {
            for (o, a) in out.iter_mut().zip(chunk) {
                *o += a.norm_sqr();
            }
        }
        Ok(out)
    }

    /// Distribution of an arbitrary ordered qubit list; the first listed
    /// qubit is the most significant bit of the outcome index.
    pub fn marginal_probs_on(&self, qubits: &[usize]) -> Result<Vec<T>> {
        let n = self.num_qubits;
        if qubits.is_empty() {
            return Err(Error::validation("empty measured-qubit list"));
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitIndex {
                    index: q,
                    num_qubits: n,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::validation(format!("qubit {q} listed twice")));
            }
        }
        let suffix = qubits.len() <= n && qubits.iter().copied().eq(n - qubits.len()..n);
        if suffix {
            return self.marginal_probs(qubits.len());
        }
        let mut out = vec![T::zero(); 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut j = 0;
            for &q in qubits {
                j = (j << 1) | ((i >> (n - 1 - q)) & 1);
            }
            out[j] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Projects `qubit` onto `|0>` and renormalizes, returning the
    /// pre-projection probability of that outcome.
    pub fn project_zero(&mut self, qubit: usize) -> Result<T> {
        let n = self.num_qubits;
        if qubit >= n {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: n,
            });
        }
        let stride = 1usize << (n - 1 - qubit);
        let mut p0 = T::zero();
        for chunk in self.amps.chunks_exact(2 * stride) {
            p0 += chunk[..stride].iter().map(|a| a.norm_sqr()).sum::<T>();
        }
        if p0 < T::lit(1e-12) {
            return Err(Error::DegenerateProjection {
                qubit,
                probability: p0.as_f64(),
            });
        }
        let inv = T::one() / p0.sqrt();
        for chunk in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = chunk.split_at_mut(stride);
            lo.iter_mut().for_each(|a| *a = *a * inv);
            hi.iter_mut().for_each(|a| *a = C::zero());
        }
        Ok(p0)
    }
}

pub fn zero_state<T: Real>(n: usize) -> Result<StateVector<T>> {
    StateVector::zero_state(n)
}

pub fn fidelity<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<T> {
    a.fidelity(b)
}

pub fn marginal_probs<T: Real>(state: &StateVector<T>, m: usize) -> Result<Vec<T>> {
    state.marginal_probs(m)
}

/// Returns the projected copy together with the outcome probability.
pub fn project_zero<T: Real>(state: &StateVector<T>, qubit: usize) -> Result<(StateVector<T>, T)> {
    let mut out = state.clone();
    let p = out.project_zero(qubit)?;
    Ok((out, p))
}
