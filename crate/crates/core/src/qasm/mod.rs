//! QASM 2.0 export and import.
//!
//! `q[i]` is simulator qubit `i`, the most significant bit of the basis
//! index. Global phase is dropped everywhere.

mod decompose;
mod parse;

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use decompose::{
    decompose_1q_native, decompose_2q_native, native_matrix_1q, native_matrix_2q, NativeGate,
};
pub use parse::import_qasm;

use crate::ansatz::AnsatzKind;
use crate::data_io::Split;
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::sim::circuit::GateMatrixRef;
use crate::sim::{Circuit, GateOp};
use decompose::{synth_2q, zyz_angles, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// `u3` and `cx`.
    Logical,
    /// `rz`, `sx`, `x` and `cx`.
    Native,
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logical" => Ok(Basis::Logical),
            "native" => Ok(Basis::Native),
            other => Err(Error::validation(format!(
                "unknown basis `{other}` (expected logical or native)"
            ))),
        }
    }
}

/// `<split>_<index>_<ansatz>_<layers>l.qasm`.
pub fn qasm_file_name(split: Split, index: usize, ansatz: AnsatzKind, layers: usize) -> String {
    format!("{}_{index}_{}_{layers}l.qasm", split.name(), ansatz.name())
}

/// Formats an angle: small rational multiples of `pi` symbolically,
/// everything else with 17 significant digits.
pub fn format_angle(a: f64) -> String {
    if a == 0.0 {
        return "0".into();
    }
    let r = a / PI;
    for den in [1i64, 2, 3, 4, 6, 8] {
        let num = (r * den as f64).round();
        if num != 0.0 && (a - num * PI / den as f64).abs() < 1e-12 {
            let num = num as i64;
            let sign = if num < 0 { "-" } else { "" };
            let coef = match num.abs() {
                1 => "pi".to_string(),
                k => format!("{k}*pi"),
            };
            return if den == 1 {
                format!("{sign}{coef}")
            } else {
                format!("{sign}{coef}/{den}")
            };
        }
    }
    if a.abs() < 1e-15 {
        return "0".into();
    }
    format!("{a:.16e}")
}

fn emit_u3(out: &mut String, m: &Mat2<f64>, q: usize) {
    let (t, p, l) = zyz_angles(m);
    if t.abs() < 1e-12 && (p + l).abs() < 1e-12 {
        return;
    }
    let _ = writeln!(
        out,
        "u3({},{},{}) q[{q}];",
        format_angle(t),
        format_angle(p),
        format_angle(l)
    );
}

fn emit_native(out: &mut String, g: &NativeGate) {
    let _ = match *g {
        NativeGate::Rz { qubit, angle } => writeln!(out, "rz({}) q[{qubit}];", format_angle(angle)),
        NativeGate::Sx { qubit } => writeln!(out, "sx q[{qubit}];"),
        NativeGate::X { qubit } => writeln!(out, "x q[{qubit}];"),
        NativeGate::Cx { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
    };
}

fn emit_1q(out: &mut String, m: &Mat2<f64>, q: usize, basis: Basis) -> Result<()> {
    match basis {
        Basis::Logical => emit_u3(out, m, q),
        Basis::Native => {
            for g in decompose_1q_native(m, q)? {
                emit_native(out, &g);
            }
        }
    }
    Ok(())
}

/// Renders `circuit` at `params`.
pub fn export_qasm(circuit: &Circuit<f64>, params: &[f64], basis: Basis) -> Result<String> {
    if params.len() != circuit.num_params() {
        return Err(Error::validation(format!(
            "circuit has {} parameters but {} were bound",
            circuit.num_params(),
            params.len()
        )));
    }
    let n = circuit.num_qubits();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(
        out,
        "qreg q[{n}]; // q[0] is the most significant bit of the basis index"
    );
    for op in circuit.ops() {
        match (op, op.matrix(params)?) {
            (GateOp::Cnot { control, target }, _) => emit_native(
                &mut out,
                &NativeGate::Cx {
                    control: *control,
                    target: *target,
                },
            ),
            (_, GateMatrixRef::One(m)) => emit_1q(&mut out, &m, op.qubits()[0], basis)?,
            (_, GateMatrixRef::Two(m)) => {
                let qs = op.qubits();
                for step in synth_2q(&m, qs[0], qs[1])? {
                    match (step, basis) {
                        (Step::Local { qubit, matrix }, _) => {
                            emit_1q(&mut out, &matrix, qubit, basis)?
                        }
                        (Step::Native(g @ NativeGate::Cx { .. }), _)
                        | (Step::Native(g), Basis::Native) => emit_native(&mut out, &g),
                        (Step::Native(g), Basis::Logical) => {
                            let q = match g {
                                NativeGate::Rz { qubit, .. }
                                | NativeGate::Sx { qubit }
                                | NativeGate::X { qubit } => qubit,
                                NativeGate::Cx { .. } => unreachable!("handled above"),
                            };
                            emit_u3(&mut out, &native_matrix_1q(&[g])?, q);
                        }
                    }
                }
            }
            (_, GateMatrixRef::Cnot) => unreachable!("only Cnot ops yield the CNOT matrix"),
        }
    }
    Ok(out)
}
