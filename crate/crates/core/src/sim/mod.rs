//! Dense statevector simulation.

pub mod adjoint;
pub mod circuit;
mod kernels;
pub mod sampling;
pub mod state;

pub use adjoint::{
    gradient, gradient_with, log_softmax_loss, marginal_loss, MarginalLoss, TerminalCost,
};
pub use circuit::{apply_gate, run_circuit, run_with_projections, Circuit, GateOp, Projection};
pub use sampling::sample_counts;
pub use state::{fidelity, marginal_probs, project_zero, zero_state, StateVector, MAX_QUBITS};
