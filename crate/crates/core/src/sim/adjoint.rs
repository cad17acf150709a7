//! Reverse-mode gradients of a terminal cost through a circuit.
//!
//! A cost hands back its value together with a cogradient `lam` such that
//! `dL = 2 Re <lam|d psi>` for any perturbation of the final state. The sweep
//! then walks the circuit backwards, un-applying each gate to both the state
//! and `lam`, and reads parameter derivatives off the gate generators.

use num_traits::Zero;

use crate::ansatz::forms::{cartan_with_derivatives, euler_with_derivatives, CARTAN_PARAMS};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use crate::sim::circuit::{apply_matrix, check_projections, Circuit, GateOp, Projection};
use crate::sim::kernels;
use crate::sim::state::StateVector;

/// Loss evaluated on the final state of a circuit.
#[derive(Debug, Clone)]
pub enum TerminalCost<T> {
    /// `1 - |<target|psi>|^2`.
    Infidelity { target: StateVector<T> },
    /// Log-softmax loss of an affine head applied to the marginal
    /// distribution of `measured`:
    /// `lse(scale * s) - scale * s[label]` with `s = weights * p + bias`.
    LinearOnMarginals {
        measured: Vec<usize>,
        weights: Vec<Vec<T>>,
        bias: Vec<T>,
        label: usize,
        scale: T,
    },
}

/// Output of a marginal-based cost, kept so callers can also update the head.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalLoss<T> {
    pub loss: T,
    pub probs: Vec<T>,
    /// `dL/dp` for every outcome.
    pub dprobs: Vec<T>,
    /// `dL/ds` for every class score.
    pub dscores: Vec<T>,
}

/// `lse(scale * s) - scale * s[label]` and its derivative in `s`.
pub fn log_softmax_loss<T: Real>(scores: &[T], label: usize, scale: T) -> Result<(T, Vec<T>)> {
    if label >= scores.len() {
        return Err(Error::validation(format!(
            "label {label} out of range for {} classes",
            scores.len()
        )));
    }
    let z: Vec<T> = scores.iter().map(|&s| scale * s).collect();
    let top = (0..z.len()).fold(0, |best, i| if z[i] > z[best] { i } else { best });
    let max = z[top];
    let exps: Vec<T> = z.iter().map(|&v| (v - max).exp()).collect();
    let rest: T = (0..z.len()).filter(|&i| i != top).map(|i| exps[i]).sum();
    let sum = T::one() + rest;
    let loss = (max - z[label]) + rest.ln_1p();
    if !loss.is_finite() {
        return Err(Error::Numeric(format!("non-finite loss {loss}")));
    }
    let grad = exps
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let delta = if i == label { T::one() } else { T::zero() };
            scale * (e / sum - delta)
        })
        .collect();
    // lse >= max element, so rounding is the only way below zero
    Ok((loss.max(T::zero()), grad))
}

/// Evaluates the head loss on precomputed marginals.
pub fn marginal_loss<T: Real>(
    probs: &[T],
    weights: &[Vec<T>],
    bias: &[T],
    label: usize,
    scale: T,
) -> Result<MarginalLoss<T>> {
    if weights.len() != bias.len() || weights.iter().any(|row| row.len() != probs.len()) {
        return Err(Error::validation(format!(
            "head shape does not match {} outcomes",
            probs.len()
        )));
    }
    let scores: Vec<T> = weights
        .iter()
        .zip(bias)
        .map(|(row, &b)| row.iter().zip(probs).map(|(&a, &p)| a * p).sum::<T>() + b)
        .collect();
    let (loss, dscores) = log_softmax_loss(&scores, label, scale)?;
    let mut dprobs = vec![T::zero(); probs.len()];
    for (row, &g) in weights.iter().zip(&dscores) {
        for (d, &a) in dprobs.iter_mut().zip(row) {
            *d += g * a;
        }
    }
    Ok(MarginalLoss {
        loss,
        probs: probs.to_vec(),
        dprobs,
        dscores,
    })
}

/// Outcome index of basis state `i` when reading `qubits` (first = MSB).
#[inline]
pub(crate) fn outcome_index(i: usize, n: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .fold(0, |j, &q| (j << 1) | ((i >> (n - 1 - q)) & 1))
}

/// Cogradient of a cost linear in the marginals: `lam_i = g[j(i)] psi_i`.
pub fn marginal_cogradient<T: Real>(
    state: &StateVector<T>,
    qubits: &[usize],
    dprobs: &[T],
) -> Vec<C<T>> {
    let n = state.num_qubits();
    state
        .amps()
        .iter()
        .enumerate()
        .map(|(i, &a)| a * dprobs[outcome_index(i, n, qubits)])
        .collect()
}

impl<T: Real> TerminalCost<T> {
    /// Value and cogradient on `state`.
    pub fn evaluate(&self, state: &StateVector<T>) -> Result<(T, Vec<C<T>>)> {
        match self {
            TerminalCost::Infidelity { target } => {
                let overlap = target.inner(state)?;
                let loss = (T::one() - overlap.norm_sqr()).max(T::zero()).min(T::one());
                let lam = target.amps().iter().map(|&t| -(t * overlap)).collect();
                Ok((loss, lam))
            }
            TerminalCost::LinearOnMarginals {
                measured,
                weights,
                bias,
                label,
                scale,
            } => {
                let probs = state.marginal_probs_on(measured)?;
                let ml = marginal_loss(&probs, weights, bias, *label, *scale)?;
                Ok((ml.loss, marginal_cogradient(state, measured, &ml.dprobs)))
            }
        }
    }
}

/// Loss and parameter gradient of `cost` at `params`.
pub fn gradient<T: Real>(
    circuit: &Circuit<T>,
    params: &[T],
    initial: &StateVector<T>,
    cost: &TerminalCost<T>,
) -> Result<(T, Vec<T>)> {
    gradient_with(circuit, params, initial, &[], |s| cost.evaluate(s))
}

/// Adjoint sweep with a caller-supplied terminal cost and optional
/// post-selections. `cost` receives the final normalized state and returns
/// the loss and its cogradient.
pub fn gradient_with<T, F>(
    circuit: &Circuit<T>,
    params: &[T],
    initial: &StateVector<T>,
    projections: &[Projection],
    cost: F,
) -> Result<(T, Vec<T>)>
where
    T: Real,
    F: FnOnce(&StateVector<T>) -> Result<(T, Vec<C<T>>)>,
{
    circuit.check_params(params)?;
    circuit.check_state(initial)?;
    check_projections(projections, circuit.ops().len())?;
    let n = circuit.num_qubits();
    let ops = circuit.ops();

    // forward, keeping the pre-projection states for the backward pass
    let mut psi = initial.clone();
    let mut snapshots: Vec<StateVector<T>> = Vec::with_capacity(projections.len());
    let mut next = 0;
    let mut project_at = |k: usize, psi: &mut StateVector<T>, snaps: &mut Vec<StateVector<T>>| {
        while next < projections.len() && projections[next].after_op == k {
            snaps.push(psi.clone());
            psi.project_zero(projections[next].qubit)?;
            next += 1;
        }
        Ok::<_, Error>(())
    };
    let mut mats = Vec::with_capacity(ops.len());
    for (k, op) in ops.iter().enumerate() {
        project_at(k, &mut psi, &mut snapshots)?;
        let m = op.matrix(params)?;
        apply_matrix(psi.amps_mut(), n, op, &m, false);
        mats.push(m);
    }
    project_at(ops.len(), &mut psi, &mut snapshots)?;

    let (loss, lam) = cost(&psi)?;
    if lam.len() != psi.dim() {
        return Err(Error::validation(format!(
            "cogradient has length {} but the state has {}",
            lam.len(),
            psi.dim()
        )));
    }
    let mut lam = StateVector::from_amplitudes_unnormalized(lam)?;
    let mut grad = vec![T::zero(); params.len()];

    let mut proj_idx = projections.len();
    let mut unproject = |k: usize, psi: &mut StateVector<T>, lam: &mut StateVector<T>| {
        while proj_idx > 0 && projections[proj_idx - 1].after_op == k {
            proj_idx -= 1;
            let pre = snapshots.pop().expect("one snapshot per projection");
            backprop_projection(&pre, psi, lam, projections[proj_idx].qubit);
            *psi = pre;
        }
    };

    unproject(ops.len(), &mut psi, &mut lam);
    for (k, op) in ops.iter().enumerate().rev() {
        let m = &mats[k];
        apply_matrix(psi.amps_mut(), n, op, m, true);
        match op {
            GateOp::Param1Q { qubit, offset } => {
                let p = &params[*offset..*offset + 3];
                let (_, d) = euler_with_derivatives(p[0], p[1], p[2]);
                let red = kernels::reduce_1q(lam.amps(), psi.amps(), n, *qubit);
                for (j, dg) in d.iter().enumerate() {
                    grad[offset + j] = contract(dg, &red);
                }
            }
            GateOp::Param2Q { qubits, offset } => {
                let p: &[T; CARTAN_PARAMS] = params[*offset..*offset + CARTAN_PARAMS]
                    .try_into()
                    .expect("15 slots");
                let (_, d) = cartan_with_derivatives(p);
                let red = kernels::reduce_2q(lam.amps(), psi.amps(), n, qubits[0], qubits[1]);
                for (j, dg) in d.iter().enumerate() {
                    grad[offset + j] = contract(dg, &red);
                }
            }
            _ => {}
        }
        apply_matrix(lam.amps_mut(), n, op, m, true);
        unproject(k, &mut psi, &mut lam);
    }
    if let Some((i, g)) = grad.iter().enumerate().find(|(_, g)| !g.is_finite()) {
        return Err(Error::Numeric(format!("gradient entry {i} is {g}")));
    }
    Ok((loss, grad))
}

/// `2 Re sum_ab dG[a][b] M[a][b]`.
fn contract<T: Real, const D: usize>(dg: &[[C<T>; D]; D], red: &[[C<T>; D]; D]) -> T {
    let mut acc = C::<T>::zero();
    for a in 0..D {
        for b in 0..D {
            acc += dg[a][b] * red[a][b];
        }
    }
    T::lit(2.0) * acc.re
}

/// Pulls `lam` back through `psi' = P psi / |P psi|`.
fn backprop_projection<T: Real>(
    pre: &StateVector<T>,
    post: &StateVector<T>,
    lam: &mut StateVector<T>,
    qubit: usize,
) {
    let n = pre.num_qubits();
    let stride = kernels::bit(n, qubit);
    let norm: T = pre
        .amps()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & stride == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum::<T>()
        .sqrt();
    let along: T = lam
        .amps()
        .iter()
        .zip(post.amps())
        .map(|(l, p)| (l.conj() * p).re)
        .sum();
    for (i, (l, p)) in lam.amps_mut().iter_mut().zip(post.amps()).enumerate() {
        *l = if i & stride == 0 {
            (*l - *p * along) / norm
        } else {
            C::zero()
        };
    }
}
