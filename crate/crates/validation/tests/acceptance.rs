//! Acceptance run. Prints one line per criterion:
//!
//! ```text
//! criterion <n> [<scale>]: PASS|FAIL <measurements>
//! ```
//!
//! Criteria 1, 2 and 4 run a reduced configuration unless
//! `FRQI_ACCEPTANCE_FULL=1` is set; the full runs take hours on one core.
//! `FRQI_ACCEPTANCE_ONLY=3,7` restricts the run to the listed criteria.
//! The dataset is read from `FRQI_DATA_DIR` (default `data/fashion-mnist`
//! at the workspace root) and downloaded there if missing.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use frqi_core::ansatz::{build, count_resources, AnsatzConfig, AnsatzKind, FinalLayer};
use frqi_core::classifier::{
    baseline_postprocess_only, depolarize, evaluate, spread_of_counts, train_classifier,
    wilson_interval, ClassifierConfig, ClassifierModel, EvalConfig, ExactImages,
};
use frqi_core::compressor::{encode_dataset, CompressConfig};
use frqi_core::data_io::{
    fetch_dataset, load_split, FetchOptions, LabeledDataset, Split, DEFAULT_BASE_URL,
};
use frqi_core::encodings::{preprocess, EncodingKind};
use frqi_core::linalg::{phase_distance, Mat2, Mat4};
use frqi_core::qasm::{
    decompose_1q_native, decompose_2q_native, export_qasm, import_qasm, native_matrix_1q,
    native_matrix_2q, Basis,
};
use frqi_core::sim::{
    gradient_with, run_circuit, run_with_projections, Circuit, StateVector, TerminalCost,
};
use frqi_core::C;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Quoted post-processing-only test accuracies for m = 2..=5.
const BASELINES: [(usize, f64); 4] = [(2, 0.2698), (3, 0.3022), (4, 0.4653), (5, 0.6011)];
const BASELINE_TOL: f64 = 0.02;
const CLASSIFIER_MARGIN: f64 = 0.10;
const SUBSET_SEED: u64 = 0;
const MASTER_SEED: u64 = 0;

struct Outcome {
    scale: String,
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(scale: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            scale: scale.into(),
            pass,
            detail: detail.into(),
        }
    }
}

type Check = Result<Outcome, String>;

struct Ctx {
    full: bool,
    workers: usize,
    data_dir: PathBuf,
    train: Option<LabeledDataset<f64>>,
    test: Option<LabeledDataset<f64>>,
    sparse_fidelity: Option<(String, f64)>,
    classifier: Option<(ClassifierModel, String)>,
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

impl Ctx {
    fn ensure_data(&mut self) -> Result<(), String> {
        if self.train.is_some() {
            return Ok(());
        }
        let ready = |d: &Path| load_split::<f64>(d, Split::Train).is_ok();
        if !ready(&self.data_dir) {
            fetch_dataset(DEFAULT_BASE_URL, &self.data_dir, &FetchOptions::default())
                .map_err(|e| format!("dataset unavailable at {}: {e}", self.data_dir.display()))?;
        }
        self.train = Some(load_split(&self.data_dir, Split::Train).map_err(err)?);
        self.test = Some(load_split(&self.data_dir, Split::Test).map_err(err)?);
        Ok(())
    }

    fn train(&self) -> &LabeledDataset<f64> {
        self.train.as_ref().expect("dataset loaded")
    }

    fn test(&self) -> &LabeledDataset<f64> {
        self.test.as_ref().expect("dataset loaded")
    }

    fn fidelity_run(&self) -> (usize, usize, String) {
        if self.full {
            (100, 10_000, "full: 100 images x 10000 epochs".into())
        } else {
            (20, 2_000, "reduced: 20 images x 2000 epochs".into())
        }
    }

    fn mean_fidelity(&mut self, ansatz: AnsatzConfig) -> Result<f64, String> {
        self.ensure_data()?;
        let (images, epochs, _) = self.fidelity_run();
        let subset = self.train().subset(images, SUBSET_SEED).map_err(err)?;
        let mut cfg = CompressConfig::new(ansatz, MASTER_SEED);
        cfg.epochs = epochs;
        let (_, stats) = encode_dataset(&subset, 5, &cfg, self.workers).map_err(err)?;
        Ok(stats.mean)
    }

    fn sparse_mean(&mut self) -> Result<(String, f64), String> {
        if let Some(v) = &self.sparse_fidelity {
            return Ok(v.clone());
        }
        let mean = self.mean_fidelity(AnsatzConfig::sparse(11, 3))?;
        let v = (self.fidelity_run().2, mean);
        self.sparse_fidelity = Some(v.clone());
        Ok(v)
    }
}

fn exact(data: &LabeledDataset<f64>) -> Result<ExactImages<f64>, String> {
    let flat = data
        .images
        .iter()
        .map(|im| preprocess(im, 5))
        .collect::<frqi_core::Result<Vec<_>>>()
        .map_err(err)?;
    ExactImages::new(flat, data.labels.clone(), EncodingKind::Frqi).map_err(err)
}

fn criterion_1(ctx: &mut Ctx) -> Check {
    let (scale, mean) = ctx.sparse_mean()?;
    let (lo, hi) = if ctx.full { (0.93, 0.97) } else { (0.90, 1.0) };
    Ok(Outcome::new(
        scale,
        (lo..=hi).contains(&mean),
        format!("sparse-3 mean fidelity {mean:.4} (need [{lo}, {hi}])"),
    ))
}

fn criterion_2(ctx: &mut Ctx) -> Check {
    let (scale, sparse) = ctx.sparse_mean()?;
    let general = ctx.mean_fidelity(AnsatzConfig::general(11, 2))?;
    let gap = general - sparse;
    let cx_sparse = count_resources(
        &build::<f64>(&AnsatzConfig::sparse(11, 3))
            .map_err(err)?
            .circuit,
    )
    .cnot_count;
    let cx_general = count_resources(
        &build::<f64>(&AnsatzConfig::general(11, 2))
            .map_err(err)?
            .circuit,
    )
    .cnot_count;
    Ok(Outcome::new(
        scale,
        (0.0..=0.03).contains(&gap) && cx_sparse == 30 && cx_general == 60,
        format!(
            "general-2 {general:.4} - sparse-3 {sparse:.4} = {gap:+.4} (need [0, 0.03]); cx {cx_sparse} vs {cx_general} (need 30 vs 60)"
        ),
    ))
}

fn criterion_3(ctx: &mut Ctx) -> Check {
    ctx.ensure_data()?;
    let train = exact(ctx.train())?;
    let test = exact(ctx.test())?;
    let mut pass = true;
    let mut parts = Vec::new();
    for (m, quoted) in BASELINES {
        let cfg = ClassifierConfig::new(None, m, 10, MASTER_SEED);
        let (acc, _) =
            baseline_postprocess_only(m, &train, &test, &cfg, ctx.workers).map_err(err)?;
        let ok = (acc - quoted).abs() <= BASELINE_TOL;
        pass &= ok;
        parts.push(format!(
            "m={m} {:.2}% vs {:.2}%{}",
            100.0 * acc,
            100.0 * quoted,
            if ok { "" } else { " (off)" }
        ));
    }
    Ok(Outcome::new(
        "full: 60000/10000",
        pass,
        format!("{} (tolerance 2 points)", parts.join(", ")),
    ))
}

fn criterion_4(ctx: &mut Ctx) -> Check {
    ctx.ensure_data()?;
    let (train_n, test_n, epochs) = if ctx.full {
        (60_000, 10_000, 200)
    } else {
        (3_000, 1_000, 20)
    };
    let (train, test) = if ctx.full {
        (exact(ctx.train())?, exact(ctx.test())?)
    } else {
        (
            exact(&ctx.train().subset(train_n, SUBSET_SEED).map_err(err)?)?,
            exact(&ctx.test().subset(test_n, SUBSET_SEED).map_err(err)?)?,
        )
    };
    let mut cfg = ClassifierConfig::sparse(11, 2, 4, 10, MASTER_SEED);
    cfg.epochs = epochs;
    let (model, trace) = train_classifier(&train, &cfg, ctx.workers).map_err(err)?;
    let report = evaluate(&model, &test, &EvalConfig::exact(), ctx.workers).map_err(err)?;
    let acc = report.accuracy;
    let (first, last) = (trace.epoch_loss[0], trace.epoch_loss[epochs - 1]);

    let (reference, what) = if ctx.full {
        (BASELINES[2].1, "quoted m=4 baseline".to_string())
    } else {
        let mut base = ClassifierConfig::new(None, 4, 10, MASTER_SEED);
        base.epochs = epochs;
        let (b, _) =
            baseline_postprocess_only(4, &train, &test, &base, ctx.workers).map_err(err)?;
        (b, "m=4 baseline on the same data".to_string())
    };
    let scale = format!(
        "{}: {train_n}/{test_n} x {epochs} epochs",
        if ctx.full { "full" } else { "reduced" }
    );
    ctx.classifier = Some((model, scale.clone()));
    Ok(Outcome::new(
        scale,
        acc >= reference + CLASSIFIER_MARGIN && last < first,
        format!(
            "sparse-2 classifier {:.2}% vs {what} {:.2}% (need +10 points); loss {first:.4} -> {last:.4}",
            100.0 * acc,
            100.0 * reference
        ),
    ))
}

fn haar<const D: usize>(rng: &mut ChaCha8Rng) -> [[C<f64>; D]; D] {
    let z = DMatrix::<C<f64>>::from_fn(D, D, |_, _| {
        C::new(
            StandardNormal.sample(&mut *rng),
            StandardNormal.sample(&mut *rng),
        )
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let u = q * DMatrix::from_diagonal(&r.diagonal().map(|d| d / d.norm()));
    std::array::from_fn(|i| std::array::from_fn(|j| u[(i, j)]))
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector<f64> {
    let amps: Vec<C<f64>> = (0..1usize << n)
        .map(|_| {
            C::new(
                StandardNormal.sample(&mut *rng),
                StandardNormal.sample(&mut *rng),
            )
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn random_circuit(n: usize, rng: &mut ChaCha8Rng) -> Circuit<f64> {
    let mut c = Circuit::new(n);
    for _ in 0..3 * n {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        match rng.random_range(0..4) {
            0 => {
                c.push_euler(a);
            }
            1 => {
                c.push_cartan(a, b);
            }
            2 => c.push_cnot(a, b),
            _ => c.push_fixed1q(a, haar::<2>(rng)).unwrap(),
        }
    }
    // a final rotation on every qubit keeps every measured qubit in reach
    for q in 0..n {
        c.push_euler(q);
    }
    c
}

fn criterion_5(_: &mut Ctx) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut kinds = BTreeMap::new();
    let instances = 120;
    for i in 0..instances {
        let n = 3 + i % 4;
        let c = random_circuit(n, &mut rng);
        let params: Vec<f64> = (0..c.num_params())
            .map(|_| rng.random_range(-3.0..3.0))
            .collect();
        let init = random_state(n, &mut rng);
        let cost = if i % 2 == 0 {
            TerminalCost::Infidelity {
                target: random_state(n, &mut rng),
            }
        } else {
            let m = rng.random_range(1..=3);
            let measured: Vec<usize> = (n - m..n).collect();
            let k = rng.random_range(2..=6);
            TerminalCost::LinearOnMarginals {
                weights: (0..k)
                    .map(|_| (0..1 << m).map(|_| rng.random_range(-1.0..1.0)).collect())
                    .collect(),
                bias: (0..k).map(|_| rng.random_range(-0.1..0.1)).collect(),
                label: rng.random_range(0..k),
                scale: rng.random_range(0.5..4.0),
                measured,
            }
        };
        *kinds.entry(i % 2 == 0).or_insert(0) += 1;
        let (_, g) = gradient_with(&c, &params, &init, &[], |s| cost.evaluate(s)).map_err(err)?;
        let mut diff = 0.0;
        let mut norm = 0.0;
        for k in 0..params.len() {
            let mut p = params.clone();
            p[k] += h;
            let up = cost
                .evaluate(&run_with_projections(&c, &p, &init, &[]).map_err(err)?.0)
                .map_err(err)?
                .0;
            p[k] -= 2.0 * h;
            let down = cost
                .evaluate(&run_with_projections(&c, &p, &init, &[]).map_err(err)?.0)
                .map_err(err)?
                .0;
            let fd = (up - down) / (2.0 * h);
            diff += (g[k] - fd).powi(2);
            norm += fd * fd;
        }
        worst = worst.max((diff / norm).sqrt());
    }
    Ok(Outcome::new(
        "full",
        worst < 1e-5,
        format!(
            "{instances} instances ({} infidelity, {} marginal), N in 3..=6, worst relative error {worst:.2e} (need < 1e-5)",
            kinds[&true], kinds[&false]
        ),
    ))
}

fn criterion_6(_: &mut Ctx) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst4, mut worst2) = (0.0f64, 0.0f64);
    let mut bad_cx = 0;
    let mut max_1q = 0;
    for _ in 0..1000 {
        let v: Mat4<f64> = haar::<4>(&mut rng);
        let g = decompose_2q_native(&v, 0, 1).map_err(err)?;
        if g.iter().filter(|x| x.is_cx()).count() != 3 {
            bad_cx += 1;
        }
        worst4 = worst4.max(phase_distance(
            &native_matrix_2q(&g, 0, 1).map_err(err)?,
            &v,
        ));
    }
    for _ in 0..1000 {
        let u: Mat2<f64> = haar::<2>(&mut rng);
        let g = decompose_1q_native(&u, 0).map_err(err)?;
        max_1q = max_1q.max(g.len());
        worst2 = worst2.max(phase_distance(&native_matrix_1q(&g).map_err(err)?, &u));
    }
    Ok(Outcome::new(
        "full",
        bad_cx == 0 && worst4 < 1e-8 && max_1q <= 5 && worst2 < 1e-10,
        format!(
            "SU(4): {bad_cx} without 3 cx, worst {worst4:.1e} (need < 1e-8); SU(2): at most {max_1q} gates, worst {worst2:.1e} (need <= 5, < 1e-10)"
        ),
    ))
}

fn criterion_7(_: &mut Ctx) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let zero = StateVector::zero_state(11).map_err(err)?;
    let families = [
        AnsatzConfig::sparse(11, 3),
        AnsatzConfig::general(11, 2),
        AnsatzConfig::new(AnsatzKind::TwoDSequential, 11, 2, FinalLayer::AllQubits),
        AnsatzConfig::new(AnsatzKind::Mera, 11, 1, FinalLayer::LastM(4)),
        AnsatzConfig::new(AnsatzKind::Qcnn, 11, 1, FinalLayer::LastM(4)),
    ];
    let mut worst: f64 = 0.0;
    let mut names = Vec::new();
    for cfg in families {
        let a = build::<f64>(&cfg).map_err(err)?;
        let params: Vec<f64> = (0..a.num_params())
            .map(|_| rng.random_range(0.0..1.0))
            .collect();
        let direct = run_circuit(&a.circuit, &params, &zero).map_err(err)?;
        for basis in [Basis::Logical, Basis::Native] {
            let (c, _) =
                import_qasm(&export_qasm(&a.circuit, &params, basis).map_err(err)?).map_err(err)?;
            let back = run_circuit(&c, &[], &zero).map_err(err)?;
            worst = worst.max(1.0 - direct.fidelity(&back).map_err(err)?);
        }
        names.push(cfg.kind.name());
    }
    Ok(Outcome::new(
        "full",
        worst < 1e-10,
        format!(
            "{} in both bases, worst fidelity deficit {worst:.1e} (need < 1e-10)",
            names.join("/")
        ),
    ))
}

fn criterion_8(_: &mut Ctx) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let vectors: Vec<Vec<f64>> = (0..50)
        .map(|_| random_state(4, &mut rng).probabilities())
        .collect();
    let base = spread_of_counts(&vectors).map_err(err)?;
    let mut worst: f64 = 0.0;
    for lambda in [0.0, 0.05, 0.1, 0.3, 0.5, 0.9, 1.0] {
        let noisy = vectors
            .iter()
            .map(|v| depolarize(v, lambda))
            .collect::<frqi_core::Result<Vec<_>>>()
            .map_err(err)?;
        let s = spread_of_counts(&noisy).map_err(err)?;
        worst = worst.max((s - (1.0 - lambda) * base).abs());
    }
    let (lo, hi) = wilson_interval(40, 100, 0.95).map_err(err)?;
    let w_ok = (lo - 0.3094).abs() <= 1e-3 && (hi - 0.4980).abs() <= 1e-3;
    Ok(Outcome::new(
        "full",
        worst <= 1e-10 && w_ok,
        format!(
            "contraction error {worst:.1e} (need <= 1e-10); wilson(40,100) = ({lo:.4}, {hi:.4}) (need (0.3094, 0.4980) +- 1e-3)"
        ),
    ))
}

fn criterion_9(ctx: &mut Ctx) -> Check {
    if ctx.classifier.is_none() {
        criterion_4(ctx)?;
    }
    let (model, trained) = ctx.classifier.clone().expect("classifier trained");
    let test = exact(&ctx.test().subset(1000, SUBSET_SEED + 9).map_err(err)?)?;
    let lambdas = [0.0, 0.2, 0.4, 0.6, 0.8];
    let mut rows = Vec::new();
    for &l in &lambdas {
        let r = evaluate(
            &model,
            &test,
            &EvalConfig::with_shots(100_000, l, 9),
            ctx.workers,
        )
        .map_err(err)?;
        rows.push((l, r.accuracy, r.wilson_95, r.spread));
    }
    let mut pass = true;
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let overlap = b.2 .1 >= a.2 .0 && a.2 .1 >= b.2 .0;
        pass &= (b.1 <= a.1 || overlap) && b.3 < a.3;
    }
    let detail = rows
        .iter()
        .map(|(l, a, _, s)| format!("lambda {l}: {:.1}% spread {s:.0}", 100.0 * a))
        .collect::<Vec<_>>()
        .join("; ");
    Ok(Outcome::new(
        format!("1000 test images x 100000 shots, model {trained}"),
        pass,
        detail,
    ))
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).into_iter().flatten().flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else if p.file_name().is_some_and(|n| n != "timing.json") {
                out.insert(
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    std::fs::read(&p).unwrap(),
                );
            }
        }
    }
    out
}

/// Builds the `frqi` binary from the current sources. A separate target
/// directory keeps the nested cargo off the lock held by the outer one.
fn build_frqi() -> Result<PathBuf, String> {
    let workspace = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let exe = std::env::current_exe().map_err(err)?;
    let target = exe
        .ancestors()
        .nth(3)
        .ok_or("cannot locate the target directory")?
        .join("acceptance");
    let out = Command::new(std::env::var("CARGO").unwrap_or_else(|_| "cargo".into()))
        .current_dir(&workspace)
        .args([
            "build",
            "--profile",
            "test",
            "-p",
            "frqi-cli",
            "--bin",
            "frqi",
        ])
        .args([
            "--message-format",
            "json-render-diagnostics",
            "--target-dir",
        ])
        .arg(&target)
        .output()
        .map_err(err)?;
    if !out.status.success() {
        return Err(format!(
            "building frqi: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter_map(|l| serde_json::from_str::<serde_json::Value>(l).ok())
        .filter_map(|m| m["executable"].as_str().map(PathBuf::from))
        .last()
        .ok_or_else(|| "cargo reported no frqi executable".into())
}

fn criterion_10(ctx: &mut Ctx) -> Check {
    ctx.ensure_data()?;
    let tmp = tempfile::tempdir().map_err(err)?;
    let root = tmp.path();
    let steps: [&[&str]; 4] = [
        &[
            "encode", "--n", "5", "--layers", "3", "--subset", "6", "--epochs", "40", "--seed",
            "11", "--out", "enc",
        ],
        &[
            "train",
            "--n",
            "5",
            "--subset",
            "400",
            "--layers",
            "1",
            "--m",
            "4",
            "--epochs",
            "2",
            "--batch-size",
            "40",
            "--seed",
            "11",
            "--out",
            "tr",
        ],
        &[
            "eval",
            "--n",
            "5",
            "--subset",
            "300",
            "--model",
            "tr/model.json",
            "--shots",
            "1000",
            "--depolarize",
            "0.1",
            "--seed",
            "11",
            "--out",
            "ev",
        ],
        &[
            "export",
            "--manifest",
            "enc",
            "--basis",
            "native",
            "--out",
            "qasm",
        ],
    ];
    let frqi = build_frqi()?;
    let run = |workers: &str| -> Result<BTreeMap<PathBuf, Vec<u8>>, String> {
        for args in steps {
            let out = Command::new(&frqi)
                .current_dir(root)
                .arg("--data-dir")
                .arg(&ctx.data_dir)
                .args(["--workers", workers])
                .args(args)
                .output()
                .map_err(err)?;
            if !out.status.success() {
                return Err(format!(
                    "{args:?}: {}",
                    String::from_utf8_lossy(&out.stderr)
                ));
            }
        }
        Ok(snapshot(root))
    };
    let first = run("1")?;
    let second = run("4")?;
    let differing: Vec<String> = first
        .iter()
        .filter(|(p, b)| second.get(*p) != Some(*b))
        .map(|(p, _)| p.display().to_string())
        .collect();
    Ok(Outcome::new(
        "encode/train/eval/export, workers 1 vs 4",
        differing.is_empty() && first.len() == second.len(),
        if differing.is_empty() {
            format!("{} output files byte-identical", first.len())
        } else {
            format!("differing: {}", differing.join(", "))
        },
    ))
}

fn main() {
    let full = std::env::var("FRQI_ACCEPTANCE_FULL").is_ok_and(|v| v == "1");
    let only: Option<Vec<usize>> = std::env::var("FRQI_ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let data_dir = std::env::var_os("FRQI_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fashion-mnist"));
    let mut ctx = Ctx {
        full,
        workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        data_dir,
        train: None,
        test: None,
        sparse_fidelity: None,
        classifier: None,
    };
    let checks: [fn(&mut Ctx) -> Check; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut failed = Vec::new();
    for (i, check) in checks.iter().enumerate() {
        let id = i + 1;
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let o = check(&mut ctx).unwrap_or_else(|e| Outcome::new("-", false, format!("error: {e}")));
        println!(
            "criterion {id} [{}]: {} {} ({:.0} s)",
            o.scale,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
