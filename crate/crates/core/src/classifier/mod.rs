//! Variational multi-class classifier over encoded images.

mod eval;
mod head;
mod kernel;
pub mod metrics;
mod train;

use serde::{Deserialize, Serialize};

pub use eval::{accuracy, classify_forward, evaluate, CountVector, EvalConfig, EvalReport};
pub use head::{argmax, ClassifierHead, HeadInit};
pub use kernel::kernel_gram;
pub use metrics::{depolarize, spread_of_counts, wilson_interval};
pub use train::{
    baseline_postprocess_only, initial_model, loss_batch, train_classifier, PerturbSchedule,
    TrainTrace,
};

use crate::ansatz::{build, Ansatz, AnsatzConfig, FinalLayer};
use crate::data_io::EncodedRecord;
use crate::encodings::{EncodingKind, FlatImage};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{run_circuit, Circuit, StateVector};

/// A labeled collection of input states, produced on demand.
pub trait InputSource<T: Real>: Sync {
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn num_qubits(&self) -> usize;
    fn label(&self, i: usize) -> usize;
    fn state(&self, i: usize) -> Result<StateVector<T>>;
}

/// Exact encodings of preprocessed images, built when requested.
#[derive(Debug, Clone)]
pub struct ExactImages<T> {
    pub images: Vec<FlatImage<T>>,
    pub labels: Vec<u8>,
    pub encoding: EncodingKind,
}

impl<T: Real> ExactImages<T> {
    pub fn new(images: Vec<FlatImage<T>>, labels: Vec<u8>, encoding: EncodingKind) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::validation("image and label counts differ"));
        }
        if images.windows(2).any(|w| w[0].n != w[1].n) {
            return Err(Error::validation("images differ in resolution"));
        }
        Ok(Self {
            images,
            labels,
            encoding,
        })
    }
}

impl<T: Real> InputSource<T> for ExactImages<T> {
    fn len(&self) -> usize {
        self.images.len()
    }

    fn num_qubits(&self) -> usize {
        self.images
            .first()
            .map_or(0, |x| self.encoding.num_qubits(x.n))
    }

    fn label(&self, i: usize) -> usize {
        self.labels[i] as usize
    }

    fn state(&self, i: usize) -> Result<StateVector<T>> {
        self.encoding.encode(&self.images[i])
    }
}

/// Compressed images: each state is the encoding circuit run on `|0...0>`.
#[derive(Debug, Clone)]
pub struct CompressedRecords<T> {
    pub records: Vec<EncodedRecord>,
    circuit: Circuit<T>,
}

impl<T: Real> CompressedRecords<T> {
    pub fn new(records: Vec<EncodedRecord>) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::validation("no compressed records"))?;
        let circuit = build::<T>(&first.ansatz)?.circuit;
        if records.iter().any(|r| r.ansatz != first.ansatz) {
            return Err(Error::validation(
                "compressed records mix ansatz configurations",
            ));
        }
        Ok(Self { records, circuit })
    }
}

impl<T: Real> InputSource<T> for CompressedRecords<T> {
    fn len(&self) -> usize {
        self.records.len()
    }

    fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    fn label(&self, i: usize) -> usize {
        self.records[i].label as usize
    }

    fn state(&self, i: usize) -> Result<StateVector<T>> {
        let params: Vec<T> = self.records[i].params.iter().map(|&p| T::lit(p)).collect();
        run_circuit(
            &self.circuit,
            &params,
            &StateVector::zero_state(self.circuit.num_qubits())?,
        )
    }
}

/// Ready-made states.
#[derive(Debug, Clone)]
pub struct StateSet<T> {
    pub states: Vec<StateVector<T>>,
    pub labels: Vec<usize>,
}

impl<T: Real> InputSource<T> for StateSet<T> {
    fn len(&self) -> usize {
        self.states.len()
    }

    fn num_qubits(&self) -> usize {
        self.states.first().map_or(0, StateVector::num_qubits)
    }

    fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    fn state(&self, i: usize) -> Result<StateVector<T>> {
        Ok(self.states[i].clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    /// Classifier circuit; `None` trains only the head.
    pub ansatz: Option<AnsatzConfig>,
    /// Number of measured qubits.
    pub m: usize,
    pub k: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub scale: f64,
    #[serde(default)]
    pub head_init: HeadInit,
    pub master_seed: u64,
    #[serde(default)]
    pub schedule: Option<PerturbSchedule>,
}

impl ClassifierConfig {
    pub fn new(ansatz: Option<AnsatzConfig>, m: usize, k: usize, master_seed: u64) -> Self {
        Self {
            ansatz,
            m,
            k,
            learning_rate: 8e-4,
            epochs: 200,
            batch_size: 80,
            scale: 128.0,
            head_init: HeadInit::default(),
            master_seed,
            schedule: None,
        }
    }

    /// Sparse staircase with a final single-qubit layer on the measured
    /// qubits.
    pub fn sparse(num_qubits: usize, layers: usize, m: usize, k: usize, master_seed: u64) -> Self {
        let ansatz = AnsatzConfig::new(
            crate::ansatz::AnsatzKind::Sparse,
            num_qubits,
            layers,
            FinalLayer::LastM(m),
        );
        Self::new(Some(ansatz), m, k, master_seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) {
            return Err(Error::validation("loss scale must be positive"));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::validation("learning rate must be positive"));
        }
        if self.batch_size == 0 {
            return Err(Error::validation("batch size must be at least 1"));
        }
        if self.k < 2 {
            return Err(Error::validation("need at least two classes"));
        }
        if let Some(a) = &self.ansatz {
            a.validate()?;
        }
        Ok(())
    }
}

/// Trained circuit parameters plus head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub num_qubits: usize,
    pub ansatz: Option<AnsatzConfig>,
    pub theta: Vec<f64>,
    pub head: ClassifierHead,
}

/// A model bound to its built circuit.
#[derive(Debug, Clone)]
pub struct BoundModel<T> {
    pub model: ClassifierModel,
    pub circuit: Circuit<T>,
    pub projections: Vec<crate::sim::Projection>,
    pub measured: Vec<usize>,
    pub theta: Vec<T>,
}

impl<T: Real> BoundModel<T> {
    pub fn new(model: ClassifierModel) -> Result<Self> {
        let m = model.head.m;
        let (circuit, projections, measured) = match &model.ansatz {
            Some(cfg) => {
                if cfg.num_qubits != model.num_qubits {
                    return Err(Error::validation(format!(
                        "ansatz has {} qubits, model expects {}",
                        cfg.num_qubits, model.num_qubits
                    )));
                }
                let a: Ansatz<T> = build(cfg)?;
                let measured = a.measured_qubits(m)?;
                (a.circuit.clone(), a.projections(), measured)
            }
            None => {
                if m > model.num_qubits {
                    return Err(Error::validation(format!(
                        "cannot measure {m} of {} qubits",
                        model.num_qubits
                    )));
                }
                let n = model.num_qubits;
                (Circuit::new(n), Vec::new(), (n - m..n).collect())
            }
        };
        if model.theta.len() != circuit.num_params() {
            return Err(Error::validation(format!(
                "model has {} circuit parameters, circuit needs {}",
                model.theta.len(),
                circuit.num_params()
            )));
        }
        let theta = model.theta.iter().map(|&v| T::lit(v)).collect();
        Ok(Self {
            model,
            circuit,
            projections,
            measured,
            theta,
        })
    }

    /// Exact outcome distribution of the measured qubits.
    pub fn probabilities(&self, input: &StateVector<T>) -> Result<Vec<f64>> {
        if input.num_qubits() != self.circuit.num_qubits() {
            return Err(Error::validation(format!(
                "input has {} qubits but the classifier acts on {}",
                input.num_qubits(),
                self.circuit.num_qubits()
            )));
        }
        let (out, _) =
            crate::sim::run_with_projections(&self.circuit, &self.theta, input, &self.projections)?;
        Ok(out
            .marginal_probs_on(&self.measured)?
            .into_iter()
            .map(|p| p.as_f64())
            .collect())
    }
}
