use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Map, Value};

use frqi_core::ansatz::{build, AnsatzConfig, AnsatzKind, FinalLayer};
use frqi_core::classifier::{
    evaluate, train_classifier, ClassifierConfig, ClassifierModel, CompressedRecords, EvalConfig,
    ExactImages, InputSource, PerturbSchedule,
};
use frqi_core::compressor::{encode_dataset, CompressConfig};
use frqi_core::data_io::{
    fetch_dataset, load_encoded, load_split, save_encoded, EncodedSet, FetchOptions,
    LabeledDataset, Split, DEFAULT_BASE_URL,
};
use frqi_core::encodings::{preprocess, EncodingKind};
use frqi_core::qasm::{export_qasm, qasm_file_name, Basis};

use crate::report::RunReport;
use crate::settings::{
    config_section, merge, EncodeSettings, EvalSettings, ExportSettings, InputSettings,
    TrainSettings,
};
use crate::{
    given, Cli, CliError, Command, EncodeArgs, EvalArgs, ExportArgs, FetchArgs, TrainArgs,
};

pub const MODEL_FILE: &str = "model.json";

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let workers = match cli.workers {
        Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let ctx = Ctx {
        data_dir: cli.data_dir.clone(),
        config: cli.config.clone(),
        workers,
    };
    match &cli.command {
        Command::Fetch(a) => fetch(&ctx, a),
        Command::Encode(a) => encode(&ctx, a),
        Command::Train(a) => train(&ctx, a),
        Command::Eval(a) => eval(&ctx, a),
        Command::Export(a) => export(&ctx, a),
    }
}

struct Ctx {
    data_dir: PathBuf,
    config: Option<PathBuf>,
    workers: usize,
}

impl Ctx {
    fn section(&self, name: &str) -> Result<Map<String, Value>, CliError> {
        config_section(self.config.as_deref(), name)
    }
}

fn parse_split(s: &str) -> Result<Split, CliError> {
    match s {
        "train" => Ok(Split::Train),
        "test" => Ok(Split::Test),
        other => Err(CliError::Usage(format!(
            "unknown split `{other}` (expected train or test)"
        ))),
    }
}

fn fetch(ctx: &Ctx, a: &FetchArgs) -> Result<(), CliError> {
    let opts = FetchOptions {
        attempts: a.attempts,
        ..FetchOptions::default()
    };
    for o in fetch_dataset(&a.base_url, &ctx.data_dir, &opts)? {
        let what = if o.downloaded {
            "downloaded"
        } else {
            "present"
        };
        println!("{what} {}", o.path.display());
    }
    Ok(())
}

fn load(
    ctx: &Ctx,
    split: Split,
    subset: Option<usize>,
    seed: u64,
) -> Result<LabeledDataset<f64>, CliError> {
    let data = load_split::<f64>(&ctx.data_dir, split)
        .map_err(|e| CliError::Runtime(format!("loading {}: {e}", ctx.data_dir.display())))?;
    Ok(match subset {
        Some(k) => data.subset(k, seed)?,
        None => data,
    })
}

fn encode(ctx: &Ctx, a: &EncodeArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let s: EncodeSettings = merge(ctx.section("encode")?, given(a))?;
    let kind: AnsatzKind = s.ansatz.parse()?;
    let final_layer = match s.final_layer.as_str() {
        "all" => FinalLayer::AllQubits,
        "none" => FinalLayer::None,
        other => {
            return Err(CliError::Usage(format!(
                "unknown final layer `{other}` (expected all or none)"
            )))
        }
    };
    let split = parse_split(&s.split)?;
    let ansatz = AnsatzConfig::new(kind, 2 * s.n + 1, s.layers, final_layer);
    let mut cfg = CompressConfig::new(ansatz.clone(), s.seed);
    cfg.learning_rate = s.learning_rate;
    cfg.epochs = s.epochs;
    cfg.early_stop = s.early_stop;
    cfg.validate()?;

    if a.fetch {
        fetch_dataset(DEFAULT_BASE_URL, &ctx.data_dir, &FetchOptions::default())?;
    }
    let data = load(ctx, split, s.subset, s.seed)?;
    let (records, stats) = encode_dataset(&data, s.n, &cfg, ctx.workers)?;
    let set = EncodedSet {
        dataset: "fashion-mnist".into(),
        split,
        ansatz,
        master_seed: s.seed,
        settings: serde_json::to_value(&cfg)?,
        records,
    };
    save_encoded(&set, &a.out)?;

    let mut report = RunReport::new("encode", &s)?
        .seed("master_seed", s.seed)
        .seed("subset_seed", s.seed);
    report.metrics = json!({ "fidelity": stats });
    report.outputs = vec![
        a.out
            .join(frqi_core::data_io::persist::MANIFEST_FILE)
            .display()
            .to_string(),
        a.out
            .join(frqi_core::data_io::persist::PARAMS_FILE)
            .display()
            .to_string(),
    ];
    report.write(&a.out, start.elapsed(), ctx.workers)?;
    println!(
        "encoded {} images: mean fidelity {:.4} (p25 {:.4}, p75 {:.4})",
        stats.count, stats.mean, stats.percentile_25, stats.percentile_75
    );
    Ok(())
}

/// Classifier inputs in either mode.
enum Inputs {
    Exact(ExactImages<f64>),
    Compressed(CompressedRecords<f64>),
}

impl Inputs {
    fn source(&self) -> &dyn InputSource<f64> {
        match self {
            Inputs::Exact(x) => x,
            Inputs::Compressed(x) => x,
        }
    }
}

fn inputs(ctx: &Ctx, input: &InputSettings, split: Split, seed: u64) -> Result<Inputs, CliError> {
    if let Some(dir) = &input.encoded {
        if input.subset.is_some() {
            return Err(CliError::Usage(
                "subset applies to exact inputs only; encode a subset instead".into(),
            ));
        }
        let set = load_encoded(dir)
            .map_err(|e| CliError::Runtime(format!("loading {}: {e}", dir.display())))?;
        return Ok(Inputs::Compressed(CompressedRecords::new(set.records)?));
    }
    let encoding: EncodingKind = input.exact.parse()?;
    let data = load(ctx, split, input.subset, seed)?;
    let images = data
        .images
        .iter()
        .map(|img| preprocess(img, input.n))
        .collect::<frqi_core::Result<Vec<_>>>()?;
    Ok(Inputs::Exact(ExactImages::new(
        images,
        data.labels,
        encoding,
    )?))
}

fn classifier_config(s: &TrainSettings, num_qubits: usize) -> Result<ClassifierConfig, CliError> {
    let ansatz = match s.ansatz.as_str() {
        "none" => None,
        name => {
            let mut a =
                AnsatzConfig::new(name.parse()?, num_qubits, s.layers, FinalLayer::LastM(s.m));
            a.readout_layer = s.readout_layer;
            Some(a)
        }
    };
    let mut cfg = ClassifierConfig::new(ansatz, s.m, s.k, s.seed);
    cfg.learning_rate = s.learning_rate;
    cfg.epochs = s.epochs;
    cfg.batch_size = s.batch_size;
    cfg.scale = s.scale;
    if s.perturb {
        cfg.schedule = Some(PerturbSchedule::default());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_model(dir: &Path, model: &ClassifierModel) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(MODEL_FILE);
    let mut text = serde_json::to_string_pretty(model)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}

fn train(ctx: &Ctx, a: &TrainArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let mut flags = given(&a.input);
    flags.extend(given(&a.head));
    if let Some(seed) = a.seed {
        flags.insert("seed".into(), seed.into());
    }
    let s: TrainSettings = merge(ctx.section("train")?, flags)?;
    let data = inputs(ctx, &s.input(), Split::Train, s.seed)?;
    let src = data.source();
    let cfg = classifier_config(&s, src.num_qubits())?;
    let (model, trace) = train_classifier(src, &cfg, ctx.workers)?;
    let path = write_model(&a.out, &model)?;

    let mut report = RunReport::new("train", &s)?
        .seed("master_seed", s.seed)
        .seed("subset_seed", s.seed);
    report.metrics = json!({
        "train_samples": src.len(),
        "final_loss": trace.epoch_loss.last(),
        "epoch_loss": trace.epoch_loss,
    });
    report.outputs = vec![path.display().to_string()];
    report.write(&a.out, start.elapsed(), ctx.workers)?;
    println!(
        "trained on {} samples; model written to {}",
        src.len(),
        path.display()
    );
    Ok(())
}

fn eval(ctx: &Ctx, a: &EvalArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let mut flags = given(&a.input);
    let mut train_flags = given(&a.head);
    if let Some(k) = a.train_subset {
        train_flags.insert("subset".into(), k.into());
    }
    if !train_flags.is_empty() {
        flags.insert("train".into(), Value::Object(train_flags));
    }
    if let Some(p) = &a.model {
        flags.insert("model".into(), json!(p));
    }
    if let Some(v) = a.shots {
        flags.insert("shots".into(), v.into());
    }
    if let Some(v) = a.depolarize {
        flags.insert("depolarize".into(), json!(v));
    }
    if let Some(v) = a.seed {
        flags.insert("seed".into(), v.into());
    }
    if a.baseline_postprocess_only {
        flags.insert("baseline_postprocess_only".into(), true.into());
    }
    let s: EvalSettings = merge(ctx.section("eval")?, flags)?;
    let eval_cfg = match s.shots {
        Some(shots) => EvalConfig::with_shots(shots, s.depolarize, s.seed),
        None if s.depolarize != 0.0 => {
            return Err(CliError::Usage("--depolarize needs --shots".into()))
        }
        None => EvalConfig::exact(),
    };
    eval_cfg.validate()?;

    let mut report = RunReport::new("eval", &s)?
        .seed("eval_seed", s.seed)
        .seed("subset_seed", s.seed);
    let model = if s.baseline_postprocess_only {
        let mut ts = s.train.clone();
        ts.ansatz = "none".into();
        ts.exact = s.exact.clone();
        ts.encoded = None;
        ts.n = s.n;
        if s.encoded.is_some() {
            return Err(CliError::Usage(
                "the post-processing-only baseline uses exact inputs".into(),
            ));
        }
        let train_data = inputs(ctx, &ts.input(), Split::Train, ts.seed)?;
        let src = train_data.source();
        let cfg = classifier_config(&ts, src.num_qubits())?;
        let (model, _) = train_classifier(src, &cfg, ctx.workers)?;
        report = report.seed("train_seed", ts.seed);
        let path = write_model(&a.out, &model)?;
        report.outputs.push(path.display().to_string());
        model
    } else {
        let path = s.model.as_ref().ok_or_else(|| {
            CliError::Usage("--model is required (or --baseline-postprocess-only)".into())
        })?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("reading model {}: {e}", path.display())))?;
        serde_json::from_str::<ClassifierModel>(&text)
            .map_err(|e| CliError::Runtime(format!("model {}: {e}", path.display())))?
    };

    let test = inputs(ctx, &s.input(), Split::Test, s.seed)?;
    let r = evaluate(&model, test.source(), &eval_cfg, ctx.workers)?;
    report.metrics = serde_json::to_value(&r)?;
    report
        .outputs
        .push(a.out.join(crate::report::REPORT_FILE).display().to_string());
    report.write(&a.out, start.elapsed(), ctx.workers)?;
    println!(
        "accuracy {:.4} ({}/{}), Wilson 95% [{:.4}, {:.4}], spread {:.6}",
        r.accuracy, r.correct, r.total, r.wilson_95.0, r.wilson_95.1, r.spread
    );
    Ok(())
}

fn export(ctx: &Ctx, a: &ExportArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let mut flags = Map::new();
    if let Some(m) = &a.manifest {
        flags.insert("manifest".into(), json!(m));
    }
    if let Some(b) = &a.basis {
        flags.insert("basis".into(), json!(b));
    }
    let s: ExportSettings = merge(ctx.section("export")?, flags)?;
    let basis: Basis = s.basis.parse()?;
    let set = load_encoded(&s.manifest)
        .map_err(|e| CliError::Runtime(format!("loading {}: {e}", s.manifest.display())))?;
    let circuit = build::<f64>(&set.ansatz)?.circuit;
    std::fs::create_dir_all(&a.out)?;
    let mut outputs = Vec::with_capacity(set.records.len());
    for r in &set.records {
        let text = export_qasm(&circuit, &r.params, basis)?;
        let name = qasm_file_name(set.split, r.index, set.ansatz.kind, set.ansatz.layers);
        let path = a.out.join(name);
        std::fs::write(&path, text)?;
        outputs.push(path.display().to_string());
    }
    let mut report = RunReport::new("export", &s)?.seed("master_seed", set.master_seed);
    report.metrics = json!({ "files": outputs.len() });
    report.outputs = outputs;
    report.write(&a.out, start.elapsed(), ctx.workers)?;
    println!(
        "wrote {} QASM files to {}",
        set.records.len(),
        a.out.display()
    );
    Ok(())
}
