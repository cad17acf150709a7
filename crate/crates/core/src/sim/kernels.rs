//! In-place amplitude kernels.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of the basis index.
//! All loops run in a fixed order so results are bit-reproducible.

use num_traits::Zero;

use crate::linalg::{Mat2, Mat4};
use crate::scalar::{Real, C};

#[inline]
pub(crate) fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

pub(crate) fn apply_1q<T: Real>(amps: &mut [C<T>], n: usize, q: usize, m: &Mat2<T>) {
    let stride = bit(n, q);
    let [[m00, m01], [m10, m11]] = *m;
    for chunk in amps.chunks_exact_mut(2 * stride) {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a0, *a1);
            *a0 = m00 * x + m01 * y;
            *a1 = m10 * x + m11 * y;
        }
    }
}

/// Visits every basis index whose bits for `sa` and `sb` are both clear.
#[inline]
fn for_each_base(dim: usize, sa: usize, sb: usize, mut f: impl FnMut(usize)) {
    let (hi, lo) = if sa > sb { (sa, sb) } else { (sb, sa) };
    let mut outer = 0;
    while outer < dim {
        let mut mid = outer;
        while mid < outer + hi {
            for i in mid..mid + lo {
                f(i);
            }
            mid += 2 * lo;
        }
        outer += 2 * hi;
    }
}

pub(crate) fn apply_2q<T: Real>(amps: &mut [C<T>], n: usize, qa: usize, qb: usize, m: &Mat4<T>) {
    let (sa, sb) = (bit(n, qa), bit(n, qb));
    let dim = amps.len();
    for_each_base(dim, sa, sb, |i| {
        let idx = [i, i | sb, i | sa, i | sa | sb];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &target) in idx.iter().enumerate() {
            let row = &m[r];
            amps[target] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
        }
    });
}

pub(crate) fn apply_cnot<T: Real>(amps: &mut [C<T>], n: usize, control: usize, target: usize) {
    let (sc, st) = (bit(n, control), bit(n, target));
    for_each_base(amps.len(), sc, st, |i| amps.swap(i | sc, i | sc | st));
}

/// `M[a][b] = sum_rest conj(lam[rest, a]) * phi[rest, b]` for qubit `q`.
pub(crate) fn reduce_1q<T: Real>(lam: &[C<T>], phi: &[C<T>], n: usize, q: usize) -> Mat2<T> {
    let stride = bit(n, q);
    let mut acc = [[C::<T>::zero(); 2]; 2];
    for (lc, pc) in lam
        .chunks_exact(2 * stride)
        .zip(phi.chunks_exact(2 * stride))
    {
        let (l0, l1) = lc.split_at(stride);
        let (p0, p1) = pc.split_at(stride);
        for i in 0..stride {
            let (a, b) = (l0[i].conj(), l1[i].conj());
            let (x, y) = (p0[i], p1[i]);
            acc[0][0] += a * x;
            acc[0][1] += a * y;
            acc[1][0] += b * x;
            acc[1][1] += b * y;
        }
    }
    acc
}

pub(crate) fn reduce_2q<T: Real>(
    lam: &[C<T>],
    phi: &[C<T>],
    n: usize,
    qa: usize,
    qb: usize,
) -> Mat4<T> {
    let (sa, sb) = (bit(n, qa), bit(n, qb));
    let mut acc = [[C::<T>::zero(); 4]; 4];
    for_each_base(lam.len(), sa, sb, |i| {
        let idx = [i, i | sb, i | sa, i | sa | sb];
        let p = [phi[idx[0]], phi[idx[1]], phi[idx[2]], phi[idx[3]]];
        for (a, &ia) in idx.iter().enumerate() {
            let l = lam[ia].conj();
            for b in 0..4 {
                acc[a][b] += l * p[b];
            }
        }
    });
    acc
}
