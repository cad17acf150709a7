use std::ops::Range;

use crate::ansatz::forms::{cartan, euler, CARTAN_PARAMS, EULER_PARAMS};
use crate::error::{Error, Result};
use crate::linalg::{dagger, unitarity_defect, Mat2, Mat4};
use crate::scalar::Real;
use crate::sim::kernels;
use crate::sim::state::StateVector;

const UNITARITY_TOL: f64 = 1e-8;

/// One circuit instruction.
///
/// Parameterized gates own a contiguous run of slots in the circuit's
/// parameter vector starting at `offset`.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp<T> {
    /// Euler-form single-qubit gate, 3 slots.
    Param1Q {
        qubit: usize,
        offset: usize,
    },
    /// Cartan-form two-qubit gate, 15 slots.
    Param2Q {
        qubits: [usize; 2],
        offset: usize,
    },
    Fixed1Q {
        qubit: usize,
        matrix: Mat2<T>,
    },
    Fixed2Q {
        qubits: [usize; 2],
        matrix: Mat4<T>,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl<T: Real> GateOp<T> {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Param1Q { qubit, .. } | GateOp::Fixed1Q { qubit, .. } => vec![*qubit],
            GateOp::Param2Q { qubits, .. } | GateOp::Fixed2Q { qubits, .. } => qubits.to_vec(),
            GateOp::Cnot { control, target } => vec![*control, *target],
        }
    }

    pub fn num_params(&self) -> usize {
        match self {
            GateOp::Param1Q { .. } => EULER_PARAMS,
            GateOp::Param2Q { .. } => CARTAN_PARAMS,
            _ => 0,
        }
    }

    pub fn param_slots(&self) -> Range<usize> {
        match self {
            GateOp::Param1Q { offset, .. } | GateOp::Param2Q { offset, .. } => {
                *offset..*offset + self.num_params()
            }
            _ => 0..0,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits().len() == 2
    }

    fn check(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= n {
                return Err(Error::QubitIndex {
                    index: q,
                    num_qubits: n,
                });
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::validation(format!(
                "two-qubit gate acts twice on qubit {}",
                qs[0]
            )));
        }
        let defect = match self {
            GateOp::Fixed1Q { matrix, .. } => unitarity_defect(matrix),
            GateOp::Fixed2Q { matrix, .. } => unitarity_defect(matrix),
            _ => T::zero(),
        };
        if defect > T::lit(UNITARITY_TOL) {
            return Err(Error::validation(format!(
                "fixed gate is not unitary (defect {defect:e})"
            )));
        }
        Ok(())
    }

    /// The gate's matrix for the given parameter vector.
    pub fn matrix(&self, params: &[T]) -> Result<GateMatrixRef<T>> {
        let slots = self.param_slots();
        if slots.end > params.len() {
            return Err(Error::validation(format!(
                "gate needs parameter slots {slots:?} but only {} parameters were supplied",
                params.len()
            )));
        }
        Ok(match self {
            GateOp::Param1Q { .. } => {
                let p = &params[slots];
                GateMatrixRef::One(euler(p[0], p[1], p[2]))
            }
            GateOp::Param2Q { .. } => {
                let p: &[T; CARTAN_PARAMS] = params[slots].try_into().expect("15 slots");
                GateMatrixRef::Two(cartan(p))
            }
            GateOp::Fixed1Q { matrix, .. } => GateMatrixRef::One(*matrix),
            GateOp::Fixed2Q { matrix, .. } => GateMatrixRef::Two(*matrix),
            GateOp::Cnot { .. } => GateMatrixRef::Cnot,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrixRef<T> {
    One(Mat2<T>),
    Two(Mat4<T>),
    Cnot,
}

pub(crate) fn apply_matrix<T: Real>(
    amps: &mut [crate::scalar::C<T>],
    n: usize,
    op: &GateOp<T>,
    m: &GateMatrixRef<T>,
    inverse: bool,
) {
    match (op, m) {
        (GateOp::Cnot { control, target }, _) => kernels::apply_cnot(amps, n, *control, *target),
        (GateOp::Param1Q { qubit, .. } | GateOp::Fixed1Q { qubit, .. }, GateMatrixRef::One(u)) => {
            if inverse {
                kernels::apply_1q(amps, n, *qubit, &dagger(u))
            } else {
                kernels::apply_1q(amps, n, *qubit, u)
            }
        }
        (
            GateOp::Param2Q { qubits, .. } | GateOp::Fixed2Q { qubits, .. },
            GateMatrixRef::Two(u),
        ) => {
            if inverse {
                kernels::apply_2q(amps, n, qubits[0], qubits[1], &dagger(u))
            } else {
                kernels::apply_2q(amps, n, qubits[0], qubits[1], u)
            }
        }
        _ => unreachable!("gate kind and matrix shape always agree"),
    }
}

/// Ordered gate list over a fixed register with a flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    num_qubits: usize,
    ops: Vec<GateOp<T>>,
    num_params: usize,
}

impl<T: Real> Circuit<T> {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            ops: Vec::new(),
            num_params: 0,
        }
    }

    /// Builds a circuit from explicit ops, validating qubit indices,
    /// unitarity of fixed gates and parameter slot layout.
    pub fn from_ops(num_qubits: usize, ops: Vec<GateOp<T>>, num_params: usize) -> Result<Self> {
        let c = Self {
            num_qubits,
            ops,
            num_params,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let mut next = 0;
        for op in &self.ops {
            op.check(self.num_qubits)?;
            let slots = op.param_slots();
            if !slots.is_empty() {
                if slots.start != next {
                    return Err(Error::validation(format!(
                        "parameter slots {slots:?} are not contiguous (expected offset {next})"
                    )));
                }
                next = slots.end;
            }
        }
        if next != self.num_params {
            return Err(Error::validation(format!(
                "gates use {next} parameter slots but the circuit declares {}",
                self.num_params
            )));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn ops(&self) -> &[GateOp<T>] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn check_qubit(&self, q: usize) {
        assert!(
            q < self.num_qubits,
            "qubit {q} out of range for {} qubits",
            self.num_qubits
        );
    }

    /// Appends an Euler gate and returns its first parameter slot.
    pub fn push_euler(&mut self, qubit: usize) -> usize {
        self.check_qubit(qubit);
        let offset = self.num_params;
        self.ops.push(GateOp::Param1Q { qubit, offset });
        self.num_params += EULER_PARAMS;
        offset
    }

    /// Appends a Cartan-form gate and returns its first parameter slot.
    pub fn push_cartan(&mut self, a: usize, b: usize) -> usize {
        self.check_qubit(a);
        self.check_qubit(b);
        assert_ne!(a, b, "two-qubit gate on a single qubit");
        let offset = self.num_params;
        self.ops.push(GateOp::Param2Q {
            qubits: [a, b],
            offset,
        });
        self.num_params += CARTAN_PARAMS;
        offset
    }

    pub fn push_cnot(&mut self, control: usize, target: usize) {
        self.check_qubit(control);
        self.check_qubit(target);
        assert_ne!(control, target, "CNOT control equals target");
        self.ops.push(GateOp::Cnot { control, target });
    }

    pub fn push_fixed1q(&mut self, qubit: usize, matrix: Mat2<T>) -> Result<()> {
        let op = GateOp::Fixed1Q { qubit, matrix };
        op.check(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn push_fixed2q(&mut self, a: usize, b: usize, matrix: Mat4<T>) -> Result<()> {
        let op = GateOp::Fixed2Q {
            qubits: [a, b],
            matrix,
        };
        op.check(self.num_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Appends all ops of `other`, shifting its parameter slots behind ours.
    pub fn append(&mut self, other: &Circuit<T>) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::validation(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.num_qubits, self.num_qubits
            )));
        }
        let shift = self.num_params;
        for op in &other.ops {
            let mut op = op.clone();
            match &mut op {
                GateOp::Param1Q { offset, .. } | GateOp::Param2Q { offset, .. } => *offset += shift,
                _ => {}
            }
            self.ops.push(op);
        }
        self.num_params += other.num_params;
        Ok(())
    }

    pub(crate) fn check_params(&self, params: &[T]) -> Result<()> {
        if params.len() != self.num_params {
            return Err(Error::validation(format!(
                "circuit has {} parameters but {} were supplied",
                self.num_params,
                params.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn check_state(&self, state: &StateVector<T>) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::validation(format!(
                "circuit acts on {} qubits but the state has {}",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        Ok(())
    }
}

/// Applies one gate in place.
pub fn apply_gate<T: Real>(state: &mut StateVector<T>, op: &GateOp<T>, params: &[T]) -> Result<()> {
    let n = state.num_qubits();
    op.check(n)?;
    let m = op.matrix(params)?;
    apply_matrix(state.amps_mut(), n, op, &m, false);
    Ok(())
}

/// Applies the circuit's gates in order to a copy of `initial`.
pub fn run_circuit<T: Real>(
    circuit: &Circuit<T>,
    params: &[T],
    initial: &StateVector<T>,
) -> Result<StateVector<T>> {
    run_with_projections(circuit, params, initial, &[]).map(|(s, _)| s)
}

/// Post-selection of `qubit` on `|0>` once the first `after_op` ops have run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Projection {
    pub after_op: usize,
    pub qubit: usize,
}

pub(crate) fn check_projections(projections: &[Projection], num_ops: usize) -> Result<()> {
    for w in projections.windows(2) {
        if w[1].after_op < w[0].after_op {
            return Err(Error::validation("projection schedule is not ordered"));
        }
    }
    if let Some(last) = projections.last() {
        if last.after_op > num_ops {
            return Err(Error::validation(format!(
                "projection after op {} but the circuit has {num_ops} ops",
                last.after_op
            )));
        }
    }
    Ok(())
}

/// Runs the circuit, interleaving post-selections; returns the normalized
/// final state and the probability of each post-selected outcome.
pub fn run_with_projections<T: Real>(
    circuit: &Circuit<T>,
    params: &[T],
    initial: &StateVector<T>,
    projections: &[Projection],
) -> Result<(StateVector<T>, Vec<T>)> {
    circuit.check_params(params)?;
    circuit.check_state(initial)?;
    check_projections(projections, circuit.ops.len())?;
    let n = circuit.num_qubits;
    let mut state = initial.clone();
    let mut probs = Vec::with_capacity(projections.len());
    let mut next = 0;
    for (k, op) in circuit.ops.iter().enumerate() {
        while next < projections.len() && projections[next].after_op == k {
            probs.push(state.project_zero(projections[next].qubit)?);
            next += 1;
        }
        let m = op.matrix(params)?;
        apply_matrix(state.amps_mut(), n, op, &m, false);
    }
    while next < projections.len() {
        probs.push(state.project_zero(projections[next].qubit)?);
        next += 1;
    }
    Ok((state, probs))
}
