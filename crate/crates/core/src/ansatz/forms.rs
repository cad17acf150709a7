//! Parameterized gate matrices and their analytic parameter derivatives.
//!
//! Every trainable angle enters through a single-parameter exponential
//! `exp(-i t P / 2)` with `P` a Pauli string, so derivatives are exact and
//! cheap: `d/dt exp(-i t P / 2) = (-i P / 2) exp(-i t P / 2)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gates, identity, kron, matmul, pauli, scale, Mat2, Mat4};
use crate::scalar::{c, Real, C};

/// Number of parameters of a single-qubit Euler gate.
pub const EULER_PARAMS: usize = 3;
/// Number of parameters of a two-qubit Cartan-form gate.
pub const CARTAN_PARAMS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateParamForm {
    /// `Rz(a) Ry(b) Rz(c)`.
    Euler1Q,
    /// `exp(-i/2 (t1 X + t2 Y + t3 Z))`.
    AxisAngle1Q,
    /// `(U1 (x) U2) exp(-i/2 (tx XX + ty YY + tz ZZ)) (U3 (x) U4)`.
    ///
    /// Parameter layout follows application order: `[0..3]` U3 and
    /// `[3..6]` U4 (applied first, on the first and second qubit), `[6..9]`
    /// the core angles `tx, ty, tz`, then `[9..12]` U1 and `[12..15]` U2.
    Cartan2Q,
}

impl GateParamForm {
    pub fn num_params(self) -> usize {
        match self {
            GateParamForm::Euler1Q | GateParamForm::AxisAngle1Q => EULER_PARAMS,
            GateParamForm::Cartan2Q => CARTAN_PARAMS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix<T> {
    One(Mat2<T>),
    Two(Mat4<T>),
}

pub fn gate_matrix<T: Real>(form: GateParamForm, params: &[T]) -> Result<GateMatrix<T>> {
    if params.len() != form.num_params() {
        return Err(Error::validation(format!(
            "{form:?} expects {} parameters, got {}",
            form.num_params(),
            params.len()
        )));
    }
    Ok(match form {
        GateParamForm::Euler1Q => GateMatrix::One(euler(params[0], params[1], params[2])),
        GateParamForm::AxisAngle1Q => {
            GateMatrix::One(u_matrix_axis_angle([params[0], params[1], params[2]]))
        }
        GateParamForm::Cartan2Q => {
            let p: &[T; CARTAN_PARAMS] = params.try_into().expect("length checked");
            GateMatrix::Two(cartan(p))
        }
    })
}

/// `cos(|t|/2) I - i sin(|t|/2) (t/|t|) . sigma`.
pub fn u_matrix_axis_angle<T: Real>(theta: [T; 3]) -> Mat2<T> {
    let norm = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    if norm == T::zero() {
        return identity();
    }
    let half = norm / T::lit(2.0);
    let (s, co) = half.sin_cos();
    let (nx, ny, nz) = (theta[0] / norm, theta[1] / norm, theta[2] / norm);
    // -i s (nx X + ny Y + nz Z) + co I
    [
        [C::new(co, -s * nz), C::new(-s * ny, -s * nx)],
        [C::new(s * ny, -s * nx), C::new(co, s * nz)],
    ]
}

pub fn euler<T: Real>(a: T, b: T, cz: T) -> Mat2<T> {
    matmul(&matmul(&gates::rz(a), &gates::ry(b)), &gates::rz(cz))
}

/// Euler gate and its three parameter derivatives.
pub fn euler_with_derivatives<T: Real>(a: T, b: T, cz: T) -> (Mat2<T>, [Mat2<T>; 3]) {
    let rza = gates::rz(a);
    let ryb = gates::ry(b);
    let rzc = gates::rz(cz);
    let half_i = c::<T>(0.0, -0.5);
    let gz = scale(&pauli::z(), half_i);
    let gy = scale(&pauli::y(), half_i);
    let tail = matmul(&ryb, &rzc);
    let u = matmul(&rza, &tail);
    let da = matmul(&gz, &u);
    let db = matmul(&rza, &matmul(&matmul(&gy, &ryb), &rzc));
    let dc = matmul(&u, &gz);
    (u, [da, db, dc])
}

fn pauli_pair<T: Real>(p: &Mat2<T>) -> Mat4<T> {
    kron(p, p)
}

/// `exp(-i t P / 2)` for an involutory `P`.
fn exp_involution<T: Real>(p: &Mat4<T>, t: T) -> Mat4<T> {
    let half = t / T::lit(2.0);
    let (s, co) = half.sin_cos();
    let mut m = scale(p, C::new(T::zero(), -s));
    for (i, row) in m.iter_mut().enumerate() {
        row[i] += C::new(co, T::zero());
    }
    m
}

/// `exp(-i/2 (tx XX + ty YY + tz ZZ))`.
pub fn cartan_core<T: Real>(tx: T, ty: T, tz: T) -> Mat4<T> {
    let xx = exp_involution(&pauli_pair(&pauli::x()), tx);
    let yy = exp_involution(&pauli_pair(&pauli::y()), ty);
    let zz = exp_involution(&pauli_pair(&pauli::z()), tz);
    matmul(&matmul(&xx, &yy), &zz)
}

pub fn cartan<T: Real>(p: &[T; CARTAN_PARAMS]) -> Mat4<T> {
    let before = kron(&euler(p[0], p[1], p[2]), &euler(p[3], p[4], p[5]));
    let core = cartan_core(p[6], p[7], p[8]);
    let after = kron(&euler(p[9], p[10], p[11]), &euler(p[12], p[13], p[14]));
    matmul(&after, &matmul(&core, &before))
}

/// Cartan-form gate and its fifteen parameter derivatives.
pub fn cartan_with_derivatives<T: Real>(
    p: &[T; CARTAN_PARAMS],
) -> (Mat4<T>, [Mat4<T>; CARTAN_PARAMS]) {
    let (ua, dua) = euler_with_derivatives(p[0], p[1], p[2]);
    let (ub, dub) = euler_with_derivatives(p[3], p[4], p[5]);
    let (va, dva) = euler_with_derivatives(p[9], p[10], p[11]);
    let (vb, dvb) = euler_with_derivatives(p[12], p[13], p[14]);
    let core = cartan_core(p[6], p[7], p[8]);
    let before = kron(&ua, &ub);
    let after = kron(&va, &vb);
    let after_core = matmul(&after, &core);
    let core_before = matmul(&core, &before);
    let v = matmul(&after, &core_before);

    let half_i = c::<T>(0.0, -0.5);
    let gens = [
        scale(&pauli_pair(&pauli::x()), half_i),
        scale(&pauli_pair(&pauli::y()), half_i),
        scale(&pauli_pair(&pauli::z()), half_i),
    ];

    let mut d = [crate::linalg::zeros::<T, 4>(); CARTAN_PARAMS];
    for k in 0..3 {
        d[k] = matmul(&after_core, &kron(&dua[k], &ub));
        d[3 + k] = matmul(&after_core, &kron(&ua, &dub[k]));
        // core factors commute, so the generator can sit on the left
        d[6 + k] = matmul(&after, &matmul(&gens[k], &core_before));
        d[9 + k] = matmul(&kron(&dva[k], &vb), &core_before);
        d[12 + k] = matmul(&kron(&va, &dvb[k]), &core_before);
    }
    (v, d)
}
