use serde::{Deserialize, Serialize};

use super::{AnsatzConfig, AnsatzKind, FinalLayer, Grid};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sim::{Circuit, Projection};

/// A qubit dropped from a hierarchical circuit once `after_op` ops have run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discard {
    pub qubit: usize,
    pub after_op: usize,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hierarchy {
    pub discards: Vec<Discard>,
    /// Qubits still active at the end, ascending.
    pub active: Vec<usize>,
    pub levels: usize,
}

/// A built template: the circuit plus what the simulator needs to run it.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz<T> {
    pub config: AnsatzConfig,
    pub circuit: Circuit<T>,
    pub hierarchy: Option<Hierarchy>,
}

impl<T: Real> Ansatz<T> {
    /// Post-selections to apply while simulating (MERA only).
    pub fn projections(&self) -> Vec<Projection> {
        match (&self.hierarchy, self.config.kind) {
            (Some(h), AnsatzKind::Mera) => h
                .discards
                .iter()
                .map(|d| Projection {
                    after_op: d.after_op,
                    qubit: d.qubit,
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// The `m` qubits read out by a classifier, most significant first.
    pub fn measured_qubits(&self, m: usize) -> Result<Vec<usize>> {
        let pool: Vec<usize> = match &self.hierarchy {
            Some(h) => h.active.clone(),
            None => (0..self.config.num_qubits).collect(),
        };
        if m == 0 || m > pool.len() {
            return Err(Error::validation(format!(
                "cannot measure {m} qubits; {} are available",
                pool.len()
            )));
        }
        Ok(pool[pool.len() - m..].to_vec())
    }

    pub fn num_params(&self) -> usize {
        self.circuit.num_params()
    }
}

/// Builds any template from its configuration.
pub fn build<T: Real>(cfg: &AnsatzConfig) -> Result<Ansatz<T>> {
    let (circuit, hierarchy) = match cfg.kind {
        AnsatzKind::Sparse => (build_sparse(cfg)?, None),
        AnsatzKind::General => (build_general(cfg)?, None),
        AnsatzKind::TwoDSequential => (build_2d_sequential(cfg)?, None),
        AnsatzKind::Mera | AnsatzKind::Qcnn => {
            let (c, h) = build_hierarchical(cfg)?;
            (c, Some(h))
        }
    };
    Ok(Ansatz {
        config: cfg.clone(),
        circuit,
        hierarchy,
    })
}

fn expect_kind(cfg: &AnsatzConfig, kinds: &[AnsatzKind]) -> Result<()> {
    cfg.validate()?;
    if !kinds.contains(&cfg.kind) {
        return Err(Error::validation(format!(
            "builder for {kinds:?} called with {:?}",
            cfg.kind
        )));
    }
    if cfg.num_qubits < 2 {
        return Err(Error::validation("staircase needs at least 2 qubits"));
    }
    if cfg.num_qubits > crate::sim::MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{} qubits exceeds {}",
            cfg.num_qubits,
            crate::sim::MAX_QUBITS
        )));
    }
    Ok(())
}

fn final_layer<T: Real>(c: &mut Circuit<T>, layer: FinalLayer, pool: &[usize]) {
    let qubits = match layer {
        FinalLayer::None => return,
        FinalLayer::AllQubits => pool,
        FinalLayer::LastM(m) => &pool[pool.len().saturating_sub(m)..],
    };
    for &q in qubits {
        c.push_euler(q);
    }
}

fn readout<T: Real>(c: &mut Circuit<T>, qubits: &[usize]) {
    for w in qubits.windows(2) {
        c.push_cartan(w[0], w[1]);
    }
}

/// Staircase of `(Euler, Euler, CNOT)` blocks.
pub fn build_sparse<T: Real>(cfg: &AnsatzConfig) -> Result<Circuit<T>> {
    expect_kind(cfg, &[AnsatzKind::Sparse])?;
    let n = cfg.num_qubits;
    let mut c = Circuit::new(n);
    for _ in 0..cfg.layers {
        for i in 0..n - 1 {
            c.push_euler(i);
            c.push_euler(i + 1);
            c.push_cnot(i, i + 1);
        }
    }
    final_layer(&mut c, cfg.final_single_layer, &(0..n).collect::<Vec<_>>());
    Ok(c)
}

/// Staircase of Cartan-form two-qubit gates.
pub fn build_general<T: Real>(cfg: &AnsatzConfig) -> Result<Circuit<T>> {
    expect_kind(cfg, &[AnsatzKind::General])?;
    let n = cfg.num_qubits;
    let mut c = Circuit::new(n);
    for _ in 0..cfg.layers {
        for i in 0..n - 1 {
            c.push_cartan(i, i + 1);
        }
    }
    final_layer(&mut c, cfg.final_single_layer, &(0..n).collect::<Vec<_>>());
    Ok(c)
}

/// Gate pairs of one sweep over the grid, grouped by step.
///
/// Anti-diagonals `r + c = d` are visited in increasing `d`; along each,
/// sites run from the upper right to the lower left. Every diagonal yields
/// a horizontal step (site to its right neighbour) followed by a vertical
/// step (site to its lower neighbour). Empty steps are skipped.
pub fn grid_sweep(grid: &Grid) -> Vec<Vec<(usize, usize)>> {
    let mut steps = Vec::new();
    for d in 0..grid.rows + grid.cols - 1 {
        let sites: Vec<(usize, usize)> = (0..grid.rows)
            .filter(|&r| r <= d && d - r < grid.cols)
            .map(|r| (r, d - r))
            .filter(|&(r, c)| grid.contains(r, c))
            .collect();
        let horizontal: Vec<_> = sites
            .iter()
            .filter_map(|&(r, c)| Some((grid.site_index(r, c)?, grid.site_index(r, c + 1)?)))
            .collect();
        let vertical: Vec<_> = sites
            .iter()
            .filter_map(|&(r, c)| Some((grid.site_index(r, c)?, grid.site_index(r + 1, c)?)))
            .collect();
        for step in [horizontal, vertical] {
            if !step.is_empty() {
                steps.push(step);
            }
        }
    }
    steps
}

/// Sequential circuit on a 2D grid.
pub fn build_2d_sequential<T: Real>(cfg: &AnsatzConfig) -> Result<Circuit<T>> {
    expect_kind(cfg, &[AnsatzKind::TwoDSequential])?;
    let n = cfg.num_qubits;
    let grid = match &cfg.grid {
        Some(g) => g.clone(),
        None if n == 11 => Grid::default_11(),
        None => {
            return Err(Error::validation(format!(
                "no default grid for {n} qubits; supply one"
            )))
        }
    };
    if grid.num_sites() != n {
        return Err(Error::validation(format!(
            "grid has {} sites but the ansatz has {n} qubits",
            grid.num_sites()
        )));
    }
    let steps = grid_sweep(&grid);
    let mut c = Circuit::new(n);
    for _ in 0..cfg.layers {
        for step in &steps {
            for &(a, b) in step {
                c.push_cartan(a, b);
            }
        }
    }
    let all: Vec<usize> = (0..n).collect();
    if cfg.readout_layer {
        readout(&mut c, &all[n - 4..]);
    }
    final_layer(&mut c, cfg.final_single_layer, &all);
    Ok(c)
}

/// MERA / QCNN: pair active qubits left to right, entangle neighbouring
/// pairs then each pair, and drop the lower member of every pair. An odd
/// active count leaves the highest qubit idle for that level. Discards per
/// level are capped so exactly four qubits survive; `layers` repeats the
/// gate pattern within each level.
pub fn build_hierarchical<T: Real>(cfg: &AnsatzConfig) -> Result<(Circuit<T>, Hierarchy)> {
    expect_kind(cfg, &[AnsatzKind::Mera, AnsatzKind::Qcnn])?;
    let n = cfg.num_qubits;
    if n < 5 {
        return Err(Error::validation(format!(
            "hierarchical circuits need at least 5 qubits to reach 4 active, got {n}"
        )));
    }
    let mut c = Circuit::new(n);
    let mut active: Vec<usize> = (0..n).collect();
    let mut discards = Vec::new();
    let mut level = 0;
    while active.len() > 4 {
        let pairs: Vec<(usize, usize)> = active.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        for _ in 0..cfg.layers {
            for w in pairs.windows(2) {
                c.push_cartan(w[0].1, w[1].0);
            }
            for &(a, b) in &pairs {
                c.push_cartan(a, b);
            }
        }
        let budget = active.len() - 4;
        let dropped: Vec<usize> = pairs.iter().take(budget).map(|p| p.0).collect();
        for &q in &dropped {
            discards.push(Discard {
                qubit: q,
                after_op: c.ops().len(),
                level,
            });
        }
        active.retain(|q| !dropped.contains(q));
        level += 1;
    }
    if cfg.readout_layer {
        readout(&mut c, &active);
    }
    final_layer(&mut c, cfg.final_single_layer, &active);
    Ok((
        c,
        Hierarchy {
            discards,
            active,
            levels: level,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::GateOp;

    fn cnots(c: &Circuit<f64>) -> usize {
        c.ops()
            .iter()
            .filter(|op| matches!(op, GateOp::Cnot { .. }))
            .count()
    }

    #[test]
    fn sparse_counts() {
        let c: Circuit<f64> = build_sparse(&AnsatzConfig::sparse(11, 3)).unwrap();
        assert_eq!(c.num_params(), 213);
        assert_eq!(cnots(&c), 30);
        let c: Circuit<f64> = build_sparse(&AnsatzConfig::sparse(11, 2)).unwrap();
        assert_eq!(c.num_params(), 153);
        let cfg = AnsatzConfig::new(AnsatzKind::Sparse, 2, 1, FinalLayer::None);
        let c: Circuit<f64> = build_sparse(&cfg).unwrap();
        assert_eq!(c.ops().len(), 3);
        assert_eq!(c.num_params(), 6);
        assert!(build_sparse::<f64>(&AnsatzConfig::sparse(1, 1)).is_err());
        assert!(build_sparse::<f64>(&AnsatzConfig::sparse(11, 0)).is_err());
    }

    #[test]
    fn general_counts() {
        let c: Circuit<f64> = build_general(&AnsatzConfig::general(11, 2)).unwrap();
        assert_eq!(c.num_params(), 333);
        let cfg = AnsatzConfig::new(AnsatzKind::General, 11, 1, FinalLayer::None);
        let c: Circuit<f64> = build_general(&cfg).unwrap();
        assert_eq!(c.ops().len(), 10);
        assert!(c
            .ops()
            .iter()
            .all(|op| matches!(op, GateOp::Param2Q { .. })));
    }

    #[test]
    fn grid_sweep_shape() {
        let steps = grid_sweep(&Grid::default_11());
        let sizes: Vec<usize> = steps.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![2, 2, 2, 3, 2, 2, 1, 1]);
        // gates within a step act on disjoint qubits
        for step in &steps {
            let mut seen: Vec<usize> = step.iter().flat_map(|&(a, b)| [a, b]).collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), 2 * step.len());
        }
    }

    #[test]
    fn grid_gates_are_adjacent() {
        let g = Grid::default_11();
        let coords: Vec<(usize, usize)> = (0..4)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .filter(|&(r, c)| g.contains(r, c))
            .collect();
        let mut cfg = AnsatzConfig::new(AnsatzKind::TwoDSequential, 11, 1, FinalLayer::None);
        let c: Circuit<f64> = build_2d_sequential(&cfg).unwrap();
        assert_eq!(c.ops().len(), 15);
        for op in c.ops() {
            let q = op.qubits();
            let (a, b) = (coords[q[0]], coords[q[1]]);
            assert_eq!(a.0.abs_diff(b.0) + a.1.abs_diff(b.1), 1, "{a:?} {b:?}");
        }
        cfg.layers = 2;
        let c2: Circuit<f64> = build_2d_sequential(&cfg).unwrap();
        assert_eq!(c2.ops().len(), 2 * c.ops().len());
        cfg.layers = 0;
        assert!(build_2d_sequential::<f64>(&cfg).is_err());
        cfg.layers = 1;
        cfg.grid = Some(Grid {
            rows: 3,
            cols: 3,
            excluded: vec![],
        });
        assert!(build_2d_sequential::<f64>(&cfg).is_err());
    }

    #[test]
    fn readout_on_last_four() {
        let mut cfg = AnsatzConfig::new(AnsatzKind::TwoDSequential, 11, 1, FinalLayer::None);
        cfg.readout_layer = true;
        let c: Circuit<f64> = build_2d_sequential(&cfg).unwrap();
        let tail: Vec<Vec<usize>> = c.ops()[15..].iter().map(|op| op.qubits()).collect();
        assert_eq!(tail, vec![vec![7, 8], vec![8, 9], vec![9, 10]]);
    }

    #[test]
    fn hierarchical_schedules() {
        let cfg = AnsatzConfig::new(AnsatzKind::Qcnn, 8, 1, FinalLayer::None);
        let (c, h): (Circuit<f64>, _) = build_hierarchical(&cfg).unwrap();
        assert_eq!(h.levels, 1);
        assert_eq!(h.active, vec![1, 3, 5, 7]);
        // 3 neighbour gates + 4 pair gates
        assert_eq!(c.ops().len(), 7);

        let cfg = AnsatzConfig::new(AnsatzKind::Mera, 11, 1, FinalLayer::None);
        let (c, h): (Circuit<f64>, _) = build_hierarchical(&cfg).unwrap();
        // qubit 10 takes no part in the first level
        let first_level = &c.ops()[..h.discards[0].after_op];
        assert!(first_level.iter().all(|op| !op.qubits().contains(&10)));
        assert_eq!(h.active.len(), 4);
        assert_eq!(h.active, vec![3, 7, 9, 10]);
        let dropped: Vec<usize> = h.discards.iter().map(|d| d.qubit).collect();
        assert_eq!(dropped, vec![0, 2, 4, 6, 8, 1, 5]);

        assert!(build_hierarchical::<f64>(&AnsatzConfig::new(
            AnsatzKind::Qcnn,
            4,
            1,
            FinalLayer::None
        ))
        .is_err());
    }

    #[test]
    fn hierarchical_always_ends_at_four() {
        for n in 5..=16 {
            for kind in [AnsatzKind::Mera, AnsatzKind::Qcnn] {
                let cfg = AnsatzConfig::new(kind, n, 1, FinalLayer::AllQubits);
                let a: Ansatz<f64> = build(&cfg).unwrap();
                let h = a.hierarchy.as_ref().unwrap();
                assert_eq!(h.active.len(), 4, "n={n}");
                assert_eq!(h.discards.len(), n - 4);
                assert_eq!(a.measured_qubits(4).unwrap(), h.active);
                a.circuit.validate().unwrap();
            }
        }
    }
}
