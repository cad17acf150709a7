use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::StateVector;

/// Gram matrix `G_ij = (Re <psi_i|psi_j>)^2`.
pub fn kernel_gram<T: Real>(states: &[StateVector<T>]) -> Result<Vec<Vec<f64>>> {
    if let Some(first) = states.first() {
        if states.iter().any(|s| s.dim() != first.dim()) {
            return Err(Error::validation("states differ in dimension"));
        }
    }
    let n = states.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let re: f64 = states[i]
                .amps()
                .iter()
                .zip(states[j].amps())
                .map(|(a, b)| (a.conj() * b).re.as_f64())
                .sum();
            g[i][j] = re * re;
            g[j][i] = re * re;
        }
    }
    Ok(g)
}
