#![allow(dead_code)]

use frqi_core::linalg::{Mat2, Mat4};
use frqi_core::sim::{Circuit, StateVector};
use frqi_core::C;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
fn haar<const D: usize>(rng: &mut ChaCha8Rng) -> [[C<f64>; D]; D] {
    let z = DMatrix::<C<f64>>::from_fn(D, D, |_, _| {
        C::new(
            StandardNormal.sample(&mut *rng),
            StandardNormal.sample(&mut *rng),
        )
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let fix = DMatrix::from_diagonal(&r.diagonal().map(|d| d / d.norm()));
    let u = q * fix;
    std::array::from_fn(|i| std::array::from_fn(|j| u[(i, j)]))
}

pub fn haar2(rng: &mut ChaCha8Rng) -> Mat2<f64> {
    haar::<2>(rng)
}

pub fn haar4(rng: &mut ChaCha8Rng) -> Mat4<f64> {
    haar::<4>(rng)
}

pub fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector<f64> {
    let amps: Vec<C<f64>> = (0..1usize << n)
        .map(|_| {
            C::new(
                StandardNormal.sample(&mut *rng),
                StandardNormal.sample(&mut *rng),
            )
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Random mix of Euler, Cartan, CNOT and fixed gates on `n` qubits.
pub fn random_circuit(n: usize, gates: usize, rng: &mut ChaCha8Rng) -> Circuit<f64> {
    let mut c = Circuit::new(n);
    for _ in 0..gates {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        match rng.random_range(0..4) {
            0 => {
                c.push_euler(a);
            }
            1 => {
                c.push_cartan(a, b);
            }
            2 => c.push_cnot(a, b),
            _ => c.push_fixed1q(a, haar2(rng)).unwrap(),
        }
    }
    c
}

pub fn random_params(count: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(-3.0..3.0)).collect()
}
