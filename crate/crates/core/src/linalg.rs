//! Small dense complex matrices used for gate kernels.
//!
//! Two-qubit matrices act on `|a b>` with the first listed qubit `a` as the
//! most significant bit of the 4-dimensional index.

use crate::scalar::{c, Real, C};
use num_traits::Zero;

pub type Mat<T, const D: usize> = [[C<T>; D]; D];
pub type Mat2<T> = Mat<T, 2>;
pub type Mat4<T> = Mat<T, 4>;

pub fn zeros<T: Real, const D: usize>() -> Mat<T, D> {
    [[C::zero(); D]; D]
}

pub fn identity<T: Real, const D: usize>() -> Mat<T, D> {
    let mut m = zeros::<T, D>();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn matmul<T: Real, const D: usize>(a: &Mat<T, D>, b: &Mat<T, D>) -> Mat<T, D> {
    let mut out = zeros::<T, D>();
    for i in 0..D {
        for k in 0..D {
            let aik = a[i][k];
            if aik.is_zero() {
                continue;
            }
            for j in 0..D {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn dagger<T: Real, const D: usize>(a: &Mat<T, D>) -> Mat<T, D> {
    let mut out = zeros::<T, D>();
    for i in 0..D {
        for j in 0..D {
            out[j][i] = a[i][j].conj();
        }
    }
    out
}

pub fn scale<T: Real, const D: usize>(a: &Mat<T, D>, s: C<T>) -> Mat<T, D> {
    let mut out = *a;
    out.iter_mut().flatten().for_each(|z| *z *= s);
    out
}

pub fn kron<T: Real>(a: &Mat2<T>, b: &Mat2<T>) -> Mat4<T> {
    let mut out = zeros::<T, 4>();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Largest elementwise deviation of `a^† a` from the identity.
pub fn unitarity_defect<T: Real, const D: usize>(a: &Mat<T, D>) -> T {
    let prod = matmul(&dagger(a), a);
    let id = identity::<T, D>();
    let mut worst = T::zero();
    for i in 0..D {
        for j in 0..D {
            worst = worst.max((prod[i][j] - id[i][j]).norm());
        }
    }
    worst
}

pub fn is_unitary<T: Real, const D: usize>(a: &Mat<T, D>, tol: T) -> bool {
    unitarity_defect(a) <= tol
}

/// Distance between `a` and `b` after removing the best global phase.
///
/// Uses `min_phi ||a - e^{i phi} b||_max` with `phi` taken from the trace
/// overlap, which is exact when the two agree up to phase.
pub fn phase_distance<T: Real, const D: usize>(a: &Mat<T, D>, b: &Mat<T, D>) -> T {
    let mut overlap = C::<T>::zero();
    for i in 0..D {
        for j in 0..D {
            overlap += b[i][j].conj() * a[i][j];
        }
    }
    let phase = if overlap.norm() > T::zero() {
        overlap.unscale(overlap.norm())
    } else {
        C::new(T::one(), T::zero())
    };
    let mut worst = T::zero();
    for i in 0..D {
        for j in 0..D {
            worst = worst.max((a[i][j] - phase * b[i][j]).norm());
        }
    }
    worst
}

pub fn det2<T: Real>(a: &Mat2<T>) -> C<T> {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub mod pauli {
    use super::*;

    pub fn i2<T: Real>() -> Mat2<T> {
        identity()
    }

    pub fn x<T: Real>() -> Mat2<T> {
        [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
    }

    pub fn y<T: Real>() -> Mat2<T> {
        [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]
    }

    pub fn z<T: Real>() -> Mat2<T> {
        [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
    }
}

/// Common fixed gates.
pub mod gates {
    use super::*;

    pub fn hadamard<T: Real>() -> Mat2<T> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
    }

    /// `sqrt(X)` as defined by the `sx` gate of `qelib1.inc`.
    pub fn sx<T: Real>() -> Mat2<T> {
        [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]]
    }

    /// CNOT with control on the first (most significant) qubit.
    pub fn cnot<T: Real>() -> Mat4<T> {
        let mut m = zeros::<T, 4>();
        m[0][0] = c(1.0, 0.0);
        m[1][1] = c(1.0, 0.0);
        m[2][3] = c(1.0, 0.0);
        m[3][2] = c(1.0, 0.0);
        m
    }

    pub fn rz<T: Real>(theta: T) -> Mat2<T> {
        let half = theta / T::lit(2.0);
        let mut m = zeros::<T, 2>();
        m[0][0] = C::new(half.cos(), -half.sin());
        m[1][1] = C::new(half.cos(), half.sin());
        m
    }

    pub fn ry<T: Real>(theta: T) -> Mat2<T> {
        let half = theta / T::lit(2.0);
        let (s, co) = half.sin_cos();
        [
            [C::new(co, T::zero()), C::new(-s, T::zero())],
            [C::new(s, T::zero()), C::new(co, T::zero())],
        ]
    }

    /// `u3(theta, phi, lambda)` of `qelib1.inc`.
    pub fn u3<T: Real>(theta: T, phi: T, lambda: T) -> Mat2<T> {
        let half = theta / T::lit(2.0);
        let (s, co) = half.sin_cos();
        [
            [C::new(co, T::zero()), -crate::scalar::cis(lambda) * s],
            [
                crate::scalar::cis(phi) * s,
                crate::scalar::cis(phi + lambda) * co,
            ],
        ]
    }
}
