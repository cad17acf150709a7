//! Circuit templates and their parameterized gates.

mod builders;
pub mod forms;
mod resources;

use serde::{Deserialize, Serialize};

pub use builders::{
    build, build_2d_sequential, build_general, build_hierarchical, build_sparse, grid_sweep,
    Ansatz, Discard, Hierarchy,
};
pub use forms::{gate_matrix, u_matrix_axis_angle, GateMatrix, GateParamForm};
pub use resources::{count_resources, Resources};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    Sparse,
    General,
    #[serde(rename = "2d_sequential")]
    TwoDSequential,
    Mera,
    Qcnn,
}

impl AnsatzKind {
    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::Sparse => "sparse",
            AnsatzKind::General => "general",
            AnsatzKind::TwoDSequential => "2d_sequential",
            AnsatzKind::Mera => "mera",
            AnsatzKind::Qcnn => "qcnn",
        }
    }

    pub fn is_hierarchical(self) -> bool {
        matches!(self, AnsatzKind::Mera | AnsatzKind::Qcnn)
    }
}

impl std::str::FromStr for AnsatzKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "sparse" => AnsatzKind::Sparse,
            "general" => AnsatzKind::General,
            "2d" | "2d_sequential" | "2d-sequential" | "twodsequential" => {
                AnsatzKind::TwoDSequential
            }
            "mera" => AnsatzKind::Mera,
            "qcnn" => AnsatzKind::Qcnn,
            other => return Err(Error::validation(format!("unknown ansatz kind {other:?}"))),
        })
    }
}

/// Single-qubit layer appended after the entangling layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalLayer {
    None,
    AllQubits,
    /// The last `m` measured qubits.
    LastM(usize),
}

/// Rectangular qubit layout with holes; sites are numbered row-major,
/// skipping excluded ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
    pub excluded: Vec<(usize, usize)>,
}

impl Grid {
    /// 4x3 with the upper-left corner removed: 11 sites.
    pub fn default_11() -> Self {
        Grid {
            rows: 4,
            cols: 3,
            excluded: vec![(0, 0)],
        }
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        r < self.rows && c < self.cols && !self.excluded.contains(&(r, c))
    }

    pub fn num_sites(&self) -> usize {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| self.contains(r, c))
            .count()
    }

    /// Qubit index of site `(r, c)`.
    pub fn site_index(&self, r: usize, c: usize) -> Option<usize> {
        if !self.contains(r, c) {
            return None;
        }
        Some(
            (0..r * self.cols + c)
                .filter(|&k| self.contains(k / self.cols, k % self.cols))
                .count(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzConfig {
    pub kind: AnsatzKind,
    pub num_qubits: usize,
    pub layers: usize,
    pub final_single_layer: FinalLayer,
    #[serde(default)]
    pub readout_layer: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
}

impl AnsatzConfig {
    pub fn new(
        kind: AnsatzKind,
        num_qubits: usize,
        layers: usize,
        final_single_layer: FinalLayer,
    ) -> Self {
        Self {
            kind,
            num_qubits,
            layers,
            final_single_layer,
            readout_layer: false,
            grid: None,
        }
    }

    pub fn sparse(num_qubits: usize, layers: usize) -> Self {
        Self::new(
            AnsatzKind::Sparse,
            num_qubits,
            layers,
            FinalLayer::AllQubits,
        )
    }

    pub fn general(num_qubits: usize, layers: usize) -> Self {
        Self::new(
            AnsatzKind::General,
            num_qubits,
            layers,
            FinalLayer::AllQubits,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::validation("ansatz needs at least one layer"));
        }
        if let FinalLayer::LastM(m) = self.final_single_layer {
            if m == 0 || m > self.num_qubits {
                return Err(Error::validation(format!(
                    "final layer on the last {m} qubits of {}",
                    self.num_qubits
                )));
            }
        }
        if self.readout_layer && self.num_qubits < 4 {
            return Err(Error::validation("readout layer needs at least 4 qubits"));
        }
        if self.readout_layer && matches!(self.kind, AnsatzKind::Sparse | AnsatzKind::General) {
            return Err(Error::validation(
                "readout layer is only available for 2d_sequential, mera and qcnn",
            ));
        }
        if let Some(g) = &self.grid {
            if self.kind != AnsatzKind::TwoDSequential {
                return Err(Error::validation("grid is only used by 2d_sequential"));
            }
            if g.num_sites() != self.num_qubits {
                return Err(Error::validation(format!(
                    "grid has {} sites but the ansatz has {} qubits",
                    g.num_sites(),
                    self.num_qubits
                )));
            }
        }
        Ok(())
    }
}
