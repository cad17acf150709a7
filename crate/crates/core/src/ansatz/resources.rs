use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::sim::{Circuit, GateOp};

/// Cost of a circuit once every two-qubit gate is lowered to three CNOTs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Resources {
    pub cnot_count: usize,
    pub param_count: usize,
    pub depth: usize,
}

/// Layers of a generic two-qubit gate after lowering:
/// 1q, cx, 1q, cx, 1q, cx, 1q.
const TWO_QUBIT_DEPTH: usize = 7;

pub fn count_resources<T: Real>(circuit: &Circuit<T>) -> Resources {
    let mut time = vec![0usize; circuit.num_qubits()];
    let mut cnot_count = 0;
    for op in circuit.ops() {
        let (cost, steps) = match op {
            GateOp::Cnot { .. } => (1, 1),
            GateOp::Param2Q { .. } | GateOp::Fixed2Q { .. } => (3, TWO_QUBIT_DEPTH),
            _ => (0, 1),
        };
        cnot_count += cost;
        let qs = op.qubits();
        let start = qs.iter().map(|&q| time[q]).max().unwrap_or(0);
        for q in qs {
            time[q] = start + steps;
        }
    }
    Resources {
        cnot_count,
        param_count: circuit.num_params(),
        depth: time.into_iter().max().unwrap_or(0),
    }
}
