//! Native-gate synthesis for one- and two-qubit unitaries.
//!
//! Two-qubit gates go through the magic-basis Cartan decomposition
//! `V = (A1 x A2) N(a, b, c) (B1 x B2)`; the non-local core is realised by a
//! fixed three-CNOT template whose own Cartan factors are matched against
//! `V`'s.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{is_unitary, Mat2, Mat4};

type Cm2 = Matrix2<Complex64>;
type Cm4 = Matrix4<Complex64>;

const UNITARY_TOL: f64 = 1e-8;
/// Residual below which a factorization counts as exact.
const EXACT_TOL: f64 = 1e-10;
/// Angles within this of a multiple of `2 pi` are dropped.
const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NativeGate {
    Rz { qubit: usize, angle: f64 },
    Sx { qubit: usize },
    X { qubit: usize },
    Cx { control: usize, target: usize },
}

impl NativeGate {
    pub fn is_cx(&self) -> bool {
        matches!(self, NativeGate::Cx { .. })
    }
}

/// One step of a synthesized two-qubit circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Step {
    /// Arbitrary single-qubit unitary, lowered later.
    Local {
        qubit: usize,
        matrix: Mat2<f64>,
    },
    Native(NativeGate),
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn to_cm2(m: &Mat2<f64>) -> Cm2 {
    Cm2::from_fn(|i, j| m[i][j])
}

fn from_cm2(m: &Cm2) -> Mat2<f64> {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn to_cm4(m: &Mat4<f64>) -> Cm4 {
    Cm4::from_fn(|i, j| m[i][j])
}

/// Wraps into `(-pi, pi]`.
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

fn is_trivial_angle(a: f64) -> bool {
    wrap_angle(a).abs() < ANGLE_TOL
}

/// Angles `(theta, phi, lambda)` with `u = e^{i g} Rz(phi) Ry(theta) Rz(lambda)`.
pub(crate) fn zyz_angles(u: &Mat2<f64>) -> (f64, f64, f64) {
    let m = to_cm2(u);
    let det = m.determinant();
    let su = m / det.sqrt();
    let cos_part = su[(1, 1)].norm();
    let sin_part = su[(1, 0)].norm();
    let theta = 2.0 * sin_part.atan2(cos_part);
    let sum = if cos_part > 1e-14 {
        2.0 * su[(1, 1)].arg()
    } else {
        0.0
    };
    let diff = if sin_part > 1e-14 {
        2.0 * su[(1, 0)].arg()
    } else {
        0.0
    };
    let (phi, lambda) = if cos_part <= 1e-14 {
        (diff, 0.0)
    } else if sin_part <= 1e-14 {
        (sum, 0.0)
    } else {
        ((sum + diff) / 2.0, (sum - diff) / 2.0)
    };
    (wrap_angle(theta), wrap_angle(phi), wrap_angle(lambda))
}

/// `u ~ rz(phi + pi) sx rz(theta + pi) sx rz(lambda)` with identity factors
/// dropped and `sx sx` folded to `x`.
pub fn decompose_1q_native(u: &Mat2<f64>, qubit: usize) -> Result<Vec<NativeGate>> {
    if !is_unitary(u, UNITARY_TOL) {
        return Err(Error::validation("single-qubit matrix is not unitary"));
    }
    let (theta, phi, lambda) = zyz_angles(u);
    let mut out = Vec::with_capacity(5);
    let rz = |angle: f64, out: &mut Vec<NativeGate>| {
        if !is_trivial_angle(angle) {
            out.push(NativeGate::Rz {
                qubit,
                angle: wrap_angle(angle),
            });
        }
    };
    if theta.abs() < ANGLE_TOL {
        rz(phi + lambda, &mut out);
        return Ok(out);
    }
    rz(lambda, &mut out);
    if is_trivial_angle(theta + PI) {
        out.push(NativeGate::X { qubit });
    } else {
        out.push(NativeGate::Sx { qubit });
        rz(theta + PI, &mut out);
        out.push(NativeGate::Sx { qubit });
    }
    rz(phi + PI, &mut out);
    Ok(out)
}

fn magic() -> Cm4 {
    let h = FRAC_1_SQRT_2;
    Cm4::new(
        c(h, 0.0),
        c(0.0, h),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(0.0, h),
        c(h, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(0.0, h),
        c(-h, 0.0),
        c(h, 0.0),
        c(0.0, -h),
        c(0.0, 0.0),
        c(0.0, 0.0),
    )
}

fn kron2(a: &Cm2, b: &Cm2) -> Cm4 {
    Cm4::from_fn(|i, j| a[(i >> 1, j >> 1)] * b[(i & 1, j & 1)])
}

fn rz_m(t: f64) -> Cm2 {
    Cm2::new(
        Complex64::from_polar(1.0, -t / 2.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        Complex64::from_polar(1.0, t / 2.0),
    )
}

fn sx_m() -> Cm2 {
    Cm2::new(c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5))
}

/// CNOT on `|a b>` with control `a` (`first = true`) or control `b`.
fn cx_m(control_first: bool) -> Cm4 {
    let mut m = Cm4::zeros();
    let perm: [usize; 4] = if control_first {
        [0, 1, 3, 2]
    } else {
        [0, 3, 2, 1]
    };
    for (i, &j) in perm.iter().enumerate() {
        m[(i, j)] = c(1.0, 0.0);
    }
    m
}

/// Largest elementwise distance after removing the best global phase.
fn phase_dist(a: &Cm4, b: &Cm4) -> f64 {
    let overlap: Complex64 = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    let ph = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - ph * y).norm())
        .fold(0.0, f64::max)
}

/// Splits `k ~ a (x) b`, returning the factors and the residual.
fn kron_factor(k: &Cm4) -> (Cm2, Cm2, f64) {
    let block = |r: usize, s: usize| Cm2::from_fn(|i, j| k[(2 * r + i, 2 * s + j)]);
    let (mut br, mut bs, mut best) = (0, 0, -1.0);
    for r in 0..2 {
        for s in 0..2 {
            let n = block(r, s).norm();
            if n > best {
                (br, bs, best) = (r, s, n);
            }
        }
    }
    let b = block(br, bs) * c(2f64.sqrt() / best, 0.0);
    let a = Cm2::from_fn(|r, s| (b.adjoint() * block(r, s)).trace() / 2.0);
    let res = phase_dist(k, &kron2(&a, &b));
    (a, b, res)
}

/// The three-CNOT template, in time order on `(a, b)`:
/// `cx b->a`, `rz(t1) a`, `sx; rz(t2) b`, `cx a->b`, `rz(t3); sx b`, `cx b->a`.
fn template(t: [f64; 3]) -> Cm4 {
    let id = Cm2::identity();
    let mut m = cx_m(false);
    m = kron2(&rz_m(t[0]), &(rz_m(t[1]) * sx_m())) * m;
    m = cx_m(true) * m;
    m = kron2(&id, &(sx_m() * rz_m(t[2]))) * m;
    cx_m(false) * m
}

fn template_steps(t: [f64; 3], a: usize, b: usize) -> Vec<Step> {
    use NativeGate::*;
    [
        Cx {
            control: b,
            target: a,
        },
        Rz {
            qubit: a,
            angle: wrap_angle(t[0]),
        },
        Sx { qubit: b },
        Rz {
            qubit: b,
            angle: wrap_angle(t[1]),
        },
        Cx {
            control: a,
            target: b,
        },
        Rz {
            qubit: b,
            angle: wrap_angle(t[2]),
        },
        Sx { qubit: b },
        Cx {
            control: b,
            target: a,
        },
    ]
    .into_iter()
    .filter(|g| !matches!(g, Rz { angle, .. } if is_trivial_angle(*angle)))
    .map(Step::Native)
    .collect()
}

/// Cartan factors in the magic basis: `Bm^dag U Bm = O1 diag(d) O2` with
/// real `O1, O2` in `SO(4)`. `U` is first scaled to unit determinant.
struct Kak {
    o1: Matrix4<f64>,
    d: [Complex64; 4],
    o2: Matrix4<f64>,
}

fn kak(u: &Cm4) -> Result<Kak> {
    let u = u * u.determinant().powf(-0.25);
    let bm = magic();
    let up = bm.adjoint() * u * bm;
    let m2 = up.transpose() * up;
    let re = m2.map(|z| z.re);
    let im = m2.map(|z| z.im);
    // a generic real combination shares the eigenvectors of both parts
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut found = None;
    for attempt in 0..64 {
        let (ca, cb) = if attempt == 0 {
            (1.2602066112249388, 0.22317849046722027)
        } else {
            (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        let eig = SymmetricEigen::new(re * ca + im * cb);
        let p = eig.eigenvectors;
        let pc = p.map(|x| c(x, 0.0));
        let diag = pc.transpose() * m2 * pc;
        let d = Cm4::from_diagonal(&diag.diagonal());
        if (pc * d * pc.transpose() - m2)
            .iter()
            .all(|z| z.norm() < 1e-11)
        {
            found = Some((p, diag.diagonal()));
            break;
        }
    }
    let (mut p, dd) = found
        .ok_or_else(|| Error::Numeric("two-qubit Cartan decomposition did not converge".into()))?;
    if p.determinant() < 0.0 {
        p.column_mut(0).neg_mut();
    }
    let mut half = [dd[0].sqrt(), dd[1].sqrt(), dd[2].sqrt(), dd[3].sqrt()];
    let pc = p.map(|x| c(x, 0.0));
    let o1_of = |half: &[Complex64; 4]| {
        let inv = Cm4::from_diagonal(&nalgebra::Vector4::from_fn(|i, _| half[i].inv()));
        up * pc * inv
    };
    let mut o1 = o1_of(&half);
    if o1.determinant().re < 0.0 {
        half[0] = -half[0];
        o1 = o1_of(&half);
    }
    Ok(Kak {
        o1: o1.map(|z| z.re),
        d: half,
        o2: p.transpose(),
    })
}

/// Solves `arg d = g + a ex + b ey + c ez` for the interaction coefficients.
fn interaction(d: &[Complex64; 4]) -> Result<[f64; 3]> {
    let bm = magic();
    let (x, y, z) = (
        Cm2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        Cm2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        Cm2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
    );
    let e = |p: &Cm2| (bm.adjoint() * kron2(p, p) * bm).diagonal().map(|z| z.re);
    let (ex, ey, ez) = (e(&x), e(&y), e(&z));
    let a = Matrix4::from_fn(|i, j| match j {
        0 => 1.0,
        1 => ex[i],
        2 => ey[i],
        _ => ez[i],
    });
    let th = nalgebra::Vector4::from_fn(|i, _| d[i].arg());
    let sol = a
        .lu()
        .solve(&th)
        .ok_or_else(|| Error::Numeric("singular interaction system".into()))?;
    Ok([sol[1], sol[2], sol[3]])
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for cc in 0..4 {
                for d in 0..4 {
                    let p = [a, b, cc, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&i| seen[i] = true);
                    if seen.iter().all(|&s| s) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Spectrum match `d_v = ph * s * perm(d_m)` with `ph^4 = 1` and an even
/// number of sign flips, so both outer factors land in `SO(4)`.
fn match_spectra(dv: &[Complex64; 4], dm: &[Complex64; 4]) -> Option<([usize; 4], [f64; 4])> {
    for perm in permutations4() {
        for k in 0..4 {
            let ph = Complex64::from_polar(1.0, PI / 2.0 * k as f64);
            let mut s = [1.0; 4];
            let mut err = 0.0f64;
            for i in 0..4 {
                let r = dv[i] / (ph * dm[perm[i]]);
                s[i] = if r.re < 0.0 { -1.0 } else { 1.0 };
                err = err.max((dv[i] - ph * s[i] * dm[perm[i]]).norm());
            }
            if err < 1e-9 && s.iter().product::<f64>() > 0.0 {
                return Some((perm, s));
            }
        }
    }
    None
}

/// Generic three-CNOT synthesis, in time order.
fn synth_generic(v: &Cm4, a: usize, b: usize) -> Result<Vec<Step>> {
    let kv = kak(v)?;
    let coeffs = interaction(&kv.d)?;
    // the template realises N(t/2) only up to a shift of pi/2 in each angle
    let offsets = [0.0, PI / 2.0, -PI / 2.0, PI];
    let mut found = None;
    'search: for o0 in offsets {
        for o1 in offsets {
            for o2 in offsets {
                let t = [
                    2.0 * coeffs[0] + o0,
                    2.0 * coeffs[1] + o1,
                    2.0 * coeffs[2] + o2,
                ];
                let km = kak(&template(t))?;
                if let Some((perm, s)) = match_spectra(&kv.d, &km.d) {
                    found = Some((t, km, perm, s));
                    break 'search;
                }
            }
        }
    }
    let (t, km, perm, s) = found.ok_or_else(|| {
        Error::Numeric("no three-CNOT template matches the Cartan spectrum".into())
    })?;
    let mut pi = Matrix4::<f64>::zeros();
    for (k, &p) in perm.iter().enumerate() {
        pi[(k, p)] = 1.0;
    }
    let sd = Matrix4::from_diagonal(&nalgebra::Vector4::from(s));
    let mut l = kv.o1 * sd * pi * km.o1.transpose();
    let mut r = km.o2.transpose() * pi.transpose() * kv.o2;
    if l.determinant() < 0.0 {
        // t commutes with the diagonal core and flips both determinants
        let t = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0));
        l = kv.o1 * sd * t * pi * km.o1.transpose();
        r = km.o2.transpose() * pi.transpose() * t * kv.o2;
    }
    let bm = magic();
    let lift = |o: &Matrix4<f64>| bm * o.map(|x| c(x, 0.0)) * bm.adjoint();
    let (l1, l2, lres) = kron_factor(&lift(&l));
    let (r1, r2, rres) = kron_factor(&lift(&r));
    if lres.max(rres) > 1e-8 {
        return Err(Error::Numeric(format!(
            "outer Cartan factors are not local (residual {:e})",
            lres.max(rres)
        )));
    }
    let mut steps = vec![
        Step::Local {
            qubit: a,
            matrix: from_cm2(&r1),
        },
        Step::Local {
            qubit: b,
            matrix: from_cm2(&r2),
        },
    ];
    steps.extend(template_steps(t, a, b));
    steps.push(Step::Local {
        qubit: a,
        matrix: from_cm2(&l1),
    });
    steps.push(Step::Local {
        qubit: b,
        matrix: from_cm2(&l2),
    });
    Ok(steps)
}

/// Synthesizes `v` acting on `(a, b)` with `a` the more significant qubit.
///
/// Local inputs use no CNOT, inputs that are one CNOT away from a local gate
/// use one, everything else the three-CNOT template.
pub(crate) fn synth_2q(v: &Mat4<f64>, a: usize, b: usize) -> Result<Vec<Step>> {
    if !is_unitary(v, UNITARY_TOL) {
        return Err(Error::validation("two-qubit matrix is not unitary"));
    }
    let v = to_cm4(v);
    let local = |k: &Cm4| {
        let (x, y, res) = kron_factor(k);
        (res < EXACT_TOL).then(|| {
            [
                Step::Local {
                    qubit: a,
                    matrix: from_cm2(&x),
                },
                Step::Local {
                    qubit: b,
                    matrix: from_cm2(&y),
                },
            ]
        })
    };
    if let Some(l) = local(&v) {
        return Ok(l.to_vec());
    }
    for control_first in [true, false] {
        let cx = cx_m(control_first);
        let gate = if control_first {
            NativeGate::Cx {
                control: a,
                target: b,
            }
        } else {
            NativeGate::Cx {
                control: b,
                target: a,
            }
        };
        // v = w cx: cx first
        if let Some(w) = local(&(v * cx)) {
            let mut s = vec![Step::Native(gate)];
            s.extend(w);
            return Ok(s);
        }
        // v = cx w: w first
        if let Some(w) = local(&(cx * v)) {
            let mut s = w.to_vec();
            s.push(Step::Native(gate));
            return Ok(s);
        }
    }
    synth_generic(&v, a, b)
}

/// Native gates for a two-qubit unitary on `(a, b)`, in time order.
pub fn decompose_2q_native(v: &Mat4<f64>, a: usize, b: usize) -> Result<Vec<NativeGate>> {
    let mut out = Vec::new();
    for step in synth_2q(v, a, b)? {
        match step {
            Step::Local { qubit, matrix } => out.extend(decompose_1q_native(&matrix, qubit)?),
            Step::Native(g) => out.push(g),
        }
    }
    Ok(out)
}

/// Matrix of a native gate sequence on qubits `(a, b)`, `a` most significant.
pub fn native_matrix_2q(gates: &[NativeGate], a: usize, b: usize) -> Result<Mat4<f64>> {
    let mut m = Cm4::identity();
    let id = Cm2::identity();
    let on = |q: usize, g: Cm2| -> Result<Cm4> {
        if q == a {
            Ok(kron2(&g, &id))
        } else if q == b {
            Ok(kron2(&id, &g))
        } else {
            Err(Error::validation(format!(
                "gate on qubit {q} outside ({a}, {b})"
            )))
        }
    };
    for g in gates {
        let step = match *g {
            NativeGate::Rz { qubit, angle } => on(qubit, rz_m(angle))?,
            NativeGate::Sx { qubit } => on(qubit, sx_m())?,
            NativeGate::X { qubit } => on(qubit, sx_m() * sx_m())?,
            NativeGate::Cx { control, target } if (control, target) == (a, b) => cx_m(true),
            NativeGate::Cx { control, target } if (control, target) == (b, a) => cx_m(false),
            NativeGate::Cx { .. } => return Err(Error::validation("cx outside the qubit pair")),
        };
        m = step * m;
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])))
}

/// Matrix of a native gate sequence on a single qubit.
pub fn native_matrix_1q(gates: &[NativeGate]) -> Result<Mat2<f64>> {
    let mut m = Cm2::identity();
    for g in gates {
        let step = match *g {
            NativeGate::Rz { angle, .. } => rz_m(angle),
            NativeGate::Sx { .. } => sx_m(),
            NativeGate::X { .. } => sx_m() * sx_m(),
            NativeGate::Cx { .. } => {
                return Err(Error::validation("cx in a single-qubit sequence"))
            }
        };
        m = step * m;
    }
    Ok(from_cm2(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gates, kron, phase_distance};

    #[test]
    fn one_qubit_special_cases() {
        assert!(decompose_1q_native(&gates::rz(0.0), 0).unwrap().is_empty());
        assert_eq!(
            decompose_1q_native(&gates::rz(0.3), 2).unwrap(),
            vec![NativeGate::Rz {
                qubit: 2,
                angle: 0.3
            }]
        );
        let x = crate::linalg::pauli::x::<f64>();
        let g = decompose_1q_native(&x, 0).unwrap();
        assert!(g.contains(&NativeGate::X { qubit: 0 }));
        assert!(phase_distance(&native_matrix_1q(&g).unwrap(), &x) < 1e-12);
        let h = gates::hadamard::<f64>();
        let g = decompose_1q_native(&h, 0).unwrap();
        assert!(g.len() <= 5);
        assert!(phase_distance(&native_matrix_1q(&g).unwrap(), &h) < 1e-12);
        assert!(
            decompose_1q_native(&[[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]], 0)
                .is_err()
        );
    }

    #[test]
    fn zyz_of_hadamard() {
        let (t, p, l) = zyz_angles(&gates::hadamard());
        assert!((t - PI / 2.0).abs() < 1e-14 && p.abs() < 1e-14 && (l - PI).abs() < 1e-14);
    }

    #[test]
    fn two_qubit_special_cases() {
        let id = crate::linalg::identity::<f64, 4>();
        assert!(decompose_2q_native(&id, 0, 1).unwrap().is_empty());
        let cx = gates::cnot::<f64>();
        let g = decompose_2q_native(&cx, 0, 1).unwrap();
        assert_eq!(
            g,
            vec![NativeGate::Cx {
                control: 0,
                target: 1
            }]
        );
        let loc = kron(&gates::ry(0.4), &gates::rz(-1.1));
        let g = decompose_2q_native(&loc, 0, 1).unwrap();
        assert!(g.iter().all(|x| !x.is_cx()));
        assert!(phase_distance(&native_matrix_2q(&g, 0, 1).unwrap(), &loc) < 1e-10);
    }

    #[test]
    fn template_core_round_trip() {
        let v = crate::ansatz::forms::cartan_core(0.31, -0.2, 0.7);
        let g = decompose_2q_native(&v, 3, 4).unwrap();
        assert_eq!(g.iter().filter(|x| x.is_cx()).count(), 3);
        assert!(g.iter().filter(|x| !x.is_cx()).count() <= 25);
        assert!(phase_distance(&native_matrix_2q(&g, 3, 4).unwrap(), &v) < 1e-8);
    }

    /// Haar-random unitary from the QR of a complex Gaussian matrix.
    pub(crate) fn haar4(rng: &mut ChaCha8Rng) -> Mat4<f64> {
        use rand_distr::{Distribution, StandardNormal};
        let z = Cm4::from_fn(|_, _| {
            c(
                StandardNormal.sample(&mut *rng),
                StandardNormal.sample(&mut *rng),
            )
        });
        let qr = z.qr();
        let (q, r) = (qr.q(), qr.r());
        let fix = Cm4::from_diagonal(&r.diagonal().map(|d| d / d.norm()));
        let u = q * fix;
        std::array::from_fn(|i| std::array::from_fn(|j| u[(i, j)]))
    }

    #[test]
    fn random_two_qubit_unitaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let v = haar4(&mut rng);
            let g = decompose_2q_native(&v, 0, 1).unwrap();
            assert_eq!(g.iter().filter(|x| x.is_cx()).count(), 3);
            assert!(g.iter().filter(|x| !x.is_cx()).count() <= 25);
            assert!(phase_distance(&native_matrix_2q(&g, 0, 1).unwrap(), &v) < 1e-8);
        }
    }

    #[test]
    fn structured_two_qubit_gates() {
        // Weyl-chamber corners and edges hit the degenerate branches
        let q = PI / 4.0;
        for (x, y, z) in [
            (q, q, q),
            (q, q, 0.0),
            (q, 0.0, 0.0),
            (0.3, 0.3, 0.0),
            (0.2, 0.1, 0.1),
            (q, 0.2, -0.2),
        ] {
            let v = crate::ansatz::forms::cartan_core(x, y, z);
            let g = decompose_2q_native(&v, 1, 0).unwrap();
            assert!(g.iter().filter(|x| x.is_cx()).count() <= 3);
            assert!(
                phase_distance(&native_matrix_2q(&g, 1, 0).unwrap(), &v) < 1e-8,
                "{x} {y} {z}"
            );
        }
    }
}
