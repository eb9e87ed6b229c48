//! `thermal-sense`: simulate, train, evaluate and monitor from the shell.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 data or format
//! error, 3 training failure.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use thermal_sense::classifiers::{
    Classifier, ClassifierSpec, KernelKind, NnHyperParams, SvmParams, Trainer, TrainedModel, Weighting,
};
use thermal_sense::evaluation::{
    cross_validate, evaluate_by_condition, sweep, ConditionMetrics, Metric, MetricsReport, SweepFamily,
    SweepOptions, SweepRow,
};
use thermal_sense::monitor::{replay, MonitorConfig};
use thermal_sense::persistence::{
    load_dataset, load_fold_plan, load_model, read_trace, save_dataset, save_fold_plan, save_model, save_report,
    write_atomic, write_events, write_trace, EventRecord, Report, ReportBody,
};
use thermal_sense::simulator::{Simulator, SimulatorParams};
use thermal_sense::{make_folds, split_train_test, Dataset, Error, FoldPlan, Label};

const THREADS_ENV: &str = "THERMAL_SENSE_THREADS";

#[derive(Parser)]
#[command(name = "thermal-sense", version, about = "Bed occupancy from 8x8 thermal frames")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Simulate(SimulateArgs),
    /// Stratified train/test split.
    Split(SplitArgs),
    /// k-fold cross-validation of one classifier.
    Cv(CvArgs),
    /// Cross-validate a family of configurations on shared folds.
    Sweep(SweepArgs),
    /// Train a classifier and save it.
    Train(TrainArgs),
    /// Score a saved model on a labeled dataset.
    Eval(EvalArgs),
    /// Label every frame of a dataset as a monitor trace.
    Predict(PredictArgs),
    /// Replay a label trace through the bed-exit monitor.
    Monitor(MonitorArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    Main,
    Variational,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    set: SetKind,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Samples per class (main set).
    #[arg(long, default_value_t = 240)]
    n_per_class: usize,
    /// Samples per condition cell (variational set); a multiple of 3.
    #[arg(long, default_value_t = 30)]
    n_per_cell: usize,
    /// Simulator parameter file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long)]
    train_out: PathBuf,
    #[arg(long)]
    test_out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    Knn,
    Svm,
    Nn,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value = "uniform")]
    weighting: String,
    #[arg(long, default_value = "linear")]
    kernel: String,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Kernel gamma; defaults to 1 / (64 · feature variance).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 3)]
    degree: u32,
    #[arg(long, default_value_t = 0.0)]
    coef0: f64,
    #[arg(long, default_value_t = 128)]
    hidden: usize,
    #[arg(long, default_value_t = 0.01)]
    learning_rate: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
}

#[derive(Args)]
struct CvArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    model: ModelArgs,
    /// Use this fold plan instead of drawing one from the seed.
    #[arg(long)]
    folds_in: Option<PathBuf>,
    /// Save the fold plan used.
    #[arg(long)]
    folds_out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    data: PathBuf,
    /// svm-kernels, knn-grid or nn-widths.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 0.01)]
    learning_rate: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    /// Required for the neural network.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    by_condition: bool,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    emit_plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Timestamp of the first frame, in seconds.
    #[arg(long, default_value_t = 0)]
    start: i64,
    /// Seconds between frames.
    #[arg(long, default_value_t = 1)]
    interval: i64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct MonitorArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "bed-1")]
    bed_id: String,
    #[arg(long, default_value_t = 3)]
    debounce: u32,
    /// Seconds out of bed before a bed-exit alert.
    #[arg(long, default_value_t = 900)]
    long_absence: i64,
    /// Seconds over which exits are counted.
    #[arg(long, default_value_t = 28_800)]
    window: i64,
    #[arg(long, default_value_t = 5)]
    max_exits: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Core(Error),
    /// A core error while reading or writing the given file.
    At(PathBuf, Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Config(_) => 1,
        Error::Training(_) => 3,
        _ => 2,
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(e) | Failure::At(_, e) => error_code(e),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::At(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn at<T>(path: &Path, r: thermal_sense::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure::At(path.to_path_buf(), e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(f) = configure_threads().and_then(|()| run(cli.command)) {
        eprintln!("error: {f}");
        return ExitCode::from(f.exit_code());
    }
    ExitCode::SUCCESS
}

fn configure_threads() -> CliResult {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot size the thread pool: {e}")))
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Split(a) => split(a),
        Command::Cv(a) => cv(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a),
        Command::Predict(a) => predict(a),
        Command::Monitor(a) => monitor(a),
    }
}

/// Resolved settings recorded in every report.
struct Config(BTreeMap<String, String>);

impl Config {
    fn new() -> Self {
        Config(BTreeMap::new())
    }

    fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }

    fn path(&mut self, key: &str, path: &Path) -> &mut Self {
        self.set(key, path.display())
    }
}

fn save_optional_report(path: Option<&Path>, command: &str, config: Config, body: ReportBody) -> CliResult {
    if let Some(path) = path {
        at(path, save_report(&Report::new(command, config.0, body), path))?;
    }
    Ok(())
}

fn simulate(a: SimulateArgs) -> CliResult {
    let params = match &a.config {
        Some(p) => at(p, std::fs::read_to_string(p).map_err(Error::from).and_then(|t| SimulatorParams::parse(&t)))?,
        None => SimulatorParams::default(),
    };
    let sim = Simulator::new(params)?;
    let (set, ds) = match a.set {
        SetKind::Main => ("main", sim.generate_main(a.n_per_class, a.seed)?),
        SetKind::Variational => ("variational", sim.generate_variational(a.n_per_cell, a.seed)?),
    };
    at(&a.out, save_dataset(&ds, &a.out))?;

    let counts = ds.class_counts();
    println!(
        "{set}: {} frames ({} person, {} no_person) -> {}",
        ds.len(),
        counts[Label::Person.index()],
        counts[Label::NoPerson.index()],
        a.out.display()
    );
    let mut config = Config::new();
    config.set("set", set).set("seed", a.seed).path("out", &a.out);
    match a.set {
        SetKind::Main => config.set("n_per_class", a.n_per_class),
        SetKind::Variational => config.set("n_per_cell", a.n_per_cell),
    };
    for (k, v) in sim.params.entries() {
        config.set(&format!("sim.{k}"), v);
    }
    let body = ReportBody::Simulate {
        set: set.to_string(),
        samples: ds.len(),
        class_counts: counts,
    };
    save_optional_report(a.report.as_deref(), "simulate", config, body)
}

fn split(a: SplitArgs) -> CliResult {
    let ds = at(&a.data, load_dataset(&a.data))?;
    let (train, test) = split_train_test(&ds, a.test_fraction, a.seed)?;
    at(&a.train_out, save_dataset(&train, &a.train_out))?;
    at(&a.test_out, save_dataset(&test, &a.test_out))?;
    println!("train: {} frames, test: {} frames", train.len(), test.len());

    let mut config = Config::new();
    config
        .path("data", &a.data)
        .set("seed", a.seed)
        .set("test_fraction", a.test_fraction)
        .path("train_out", &a.train_out)
        .path("test_out", &a.test_out);
    let body = ReportBody::Split {
        train: train.len(),
        test: test.len(),
        train_class_counts: train.class_counts(),
        test_class_counts: test.class_counts(),
    };
    save_optional_report(a.report.as_deref(), "split", config, body)
}

fn classifier_spec(m: &ModelArgs, seed: Option<u64>) -> CliResult<ClassifierSpec> {
    let parse_err = |e: String| Failure::Usage(e);
    Ok(match m.model {
        ModelKind::Knn => ClassifierSpec::Knn {
            k: m.k,
            weighting: m.weighting.parse::<Weighting>().map_err(parse_err)?,
        },
        ModelKind::Svm => ClassifierSpec::Svm(SvmParams {
            kernel: m.kernel.parse::<KernelKind>().map_err(parse_err)?,
            c: m.c,
            tol: m.tol,
            gamma: m.gamma,
            degree: m.degree,
            coef0: m.coef0,
            ..SvmParams::default()
        }),
        ModelKind::Nn => ClassifierSpec::Nn {
            hidden: m.hidden,
            hp: NnHyperParams {
                learning_rate: m.learning_rate,
                epochs: m.epochs,
                batch_size: m.batch_size,
            },
            seed: seed.ok_or_else(|| Failure::Usage("--seed is required for --model nn".into()))?,
        },
    })
}

fn record_spec(config: &mut Config, spec: &ClassifierSpec) {
    config.set("model", spec.kind());
    match spec {
        ClassifierSpec::Knn { k, weighting } => {
            config.set("k", k).set("weighting", weighting);
        }
        ClassifierSpec::Svm(p) => {
            config
                .set("kernel", p.kernel)
                .set("c", p.c)
                .set("tol", p.tol)
                .set("max_iter", p.max_iter)
                .set("gamma", p.gamma.map_or_else(|| "auto".to_string(), |g| g.to_string()))
                .set("degree", p.degree)
                .set("coef0", p.coef0);
        }
        ClassifierSpec::Nn { hidden, hp, seed } => {
            config
                .set("hidden", hidden)
                .set("learning_rate", hp.learning_rate)
                .set("epochs", hp.epochs)
                .set("batch_size", hp.batch_size)
                .set("nn_seed", seed);
        }
    }
}

fn fold_plan(ds: &Dataset, folds: usize, seed: u64, from: Option<&Path>) -> CliResult<FoldPlan> {
    let plan = match from {
        Some(p) => at(p, load_fold_plan(p))?,
        None => make_folds(ds, folds, seed)?,
    };
    plan.check_matches(ds)?;
    Ok(plan)
}

fn cv(a: CvArgs) -> CliResult {
    let ds = at(&a.data, load_dataset(&a.data))?;
    let spec = classifier_spec(&a.model, Some(a.seed))?;
    let plan = fold_plan(&ds, a.folds, a.seed, a.folds_in.as_deref())?;
    if let Some(p) = &a.folds_out {
        at(p, save_fold_plan(&plan, p))?;
    }
    let result = cross_validate(&ds, &plan, &spec)?;

    println!("{spec}");
    for f in &result.folds {
        println!("  fold {:>2}: accuracy {}", f.fold, f.metrics.accuracy);
    }
    println!(
        "mean accuracy {:.4} (std {:.4}), sensitivity {}, specificity {}",
        result.mean_accuracy, result.std_accuracy, result.pooled.sensitivity, result.pooled.specificity
    );

    let row = SweepRow {
        config: spec.to_string(),
        result,
    };
    if let Some(dir) = &a.emit_plot_data {
        write_fig5(dir, std::slice::from_ref(&row))?;
    }
    let mut config = Config::new();
    config.path("data", &a.data).set("seed", a.seed).set("folds", plan.num_folds);
    if let Some(p) = &a.folds_in {
        config.path("folds_in", p);
    }
    record_spec(&mut config, &spec);
    let body = ReportBody::Cv {
        classifier: row.config,
        result: row.result,
    };
    save_optional_report(a.report.as_deref(), "cv", config, body)
}

fn run_sweep(a: SweepArgs) -> CliResult {
    let family: SweepFamily = a.family.parse().map_err(Failure::Usage)?;
    let ds = at(&a.data, load_dataset(&a.data))?;
    let plan = make_folds(&ds, a.folds, a.seed)?;
    let opts = SweepOptions {
        svm: SvmParams {
            c: a.c,
            ..SvmParams::default()
        },
        nn_hp: NnHyperParams {
            learning_rate: a.learning_rate,
            epochs: a.epochs,
            batch_size: a.batch_size,
        },
        nn_seed: a.seed,
    };
    let rows = sweep(&ds, &plan, family, &opts)?;

    let width = rows.iter().map(|r| r.config.len()).max().unwrap_or(0);
    for r in &rows {
        println!(
            "{:<width$}  {:.4} ± {:.4}",
            r.config, r.result.mean_accuracy, r.result.std_accuracy
        );
    }
    if let Some(dir) = &a.emit_plot_data {
        write_fig5(dir, &rows)?;
    }
    let mut config = Config::new();
    config
        .path("data", &a.data)
        .set("family", family)
        .set("folds", a.folds)
        .set("seed", a.seed);
    match family {
        SweepFamily::SvmKernels => {
            config.set("c", a.c);
        }
        SweepFamily::NnWidths => {
            config
                .set("learning_rate", a.learning_rate)
                .set("epochs", a.epochs)
                .set("batch_size", a.batch_size);
        }
        SweepFamily::KnnGrid => {}
    }
    let body = ReportBody::Sweep {
        family: family.to_string(),
        rows,
    };
    save_optional_report(a.report.as_deref(), "sweep", config, body)
}

fn train(a: TrainArgs) -> CliResult {
    let ds = at(&a.data, load_dataset(&a.data))?;
    let spec = classifier_spec(&a.model, a.seed)?;
    let model = spec.fit_dataset(&ds)?;
    at(&a.out, save_model(&model, &a.out))?;
    let training = MetricsReport::from_predictions(&model.predict_all(&ds.features()), &ds.labels())?;
    println!("{spec}: training accuracy {} -> {}", training.accuracy, a.out.display());

    let mut config = Config::new();
    config.path("data", &a.data).path("out", &a.out);
    if let Some(s) = a.seed {
        config.set("seed", s);
    }
    record_spec(&mut config, &spec);
    let body = ReportBody::Train {
        classifier: spec.to_string(),
        samples: ds.len(),
        training_metrics: training,
    };
    save_optional_report(a.report.as_deref(), "train", config, body)
}

fn print_metrics(name: &str, m: &MetricsReport) {
    println!(
        "{name:<14} n={:<5} accuracy {:<9} sensitivity {:<9} specificity {}",
        m.counts.total(),
        m.accuracy.to_string(),
        m.sensitivity.to_string(),
        m.specificity
    );
}

fn eval(a: EvalArgs) -> CliResult {
    let model = at(&a.model, load_model(&a.model))?;
    let ds = at(&a.data, load_dataset(&a.data))?;
    let report = evaluate_by_condition(&model, &ds)?;
    print_metrics("overall", &report.overall);
    if a.by_condition {
        for c in &report.conditions {
            print_metrics(c.condition.as_str(), &c.metrics);
        }
    }
    let label = model_label(&a.model, &model);
    if let Some(dir) = &a.emit_plot_data {
        write_fig6(dir, &label, &report.overall)?;
        if a.by_condition {
            write_fig7(dir, &label, &report.conditions)?;
        }
    }
    let mut config = Config::new();
    config
        .path("model", &a.model)
        .set("model_kind", model.kind())
        .path("data", &a.data)
        .set("by_condition", a.by_condition);
    let body = ReportBody::Eval {
        metrics: report.overall,
        by_condition: a.by_condition.then_some(report.conditions),
    };
    save_optional_report(a.report.as_deref(), "eval", config, body)
}

fn predict(a: PredictArgs) -> CliResult {
    if a.interval <= 0 {
        return Err(Failure::Usage("--interval must be positive".into()));
    }
    let model = at(&a.model, load_model(&a.model))?;
    let ds = at(&a.data, load_dataset(&a.data))?;
    let labels = model.predict_all(&ds.features());
    let trace: Vec<(i64, Label)> = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| (a.start + i as i64 * a.interval, l))
        .collect();
    at(&a.out, write_atomic(&a.out, write_trace(&trace).as_bytes()))?;

    let mut predicted_counts = [0; 2];
    for l in &labels {
        predicted_counts[l.index()] += 1;
    }
    println!(
        "{} frames: {} person, {} no_person -> {}",
        labels.len(),
        predicted_counts[Label::Person.index()],
        predicted_counts[Label::NoPerson.index()],
        a.out.display()
    );
    let mut config = Config::new();
    config
        .path("model", &a.model)
        .path("data", &a.data)
        .path("out", &a.out)
        .set("start", a.start)
        .set("interval", a.interval);
    let body = ReportBody::Predict {
        samples: labels.len(),
        predicted_counts,
    };
    save_optional_report(a.report.as_deref(), "predict", config, body)
}

fn monitor(a: MonitorArgs) -> CliResult {
    if a.bed_id.is_empty() || a.bed_id.contains([',', '\n', '\r']) {
        return Err(Failure::Usage("--bed-id must be non-empty without commas or newlines".into()));
    }
    let cfg = MonitorConfig {
        debounce_frames: a.debounce,
        long_absence_s: a.long_absence,
        window_s: a.window,
        max_exits: a.max_exits,
    };
    let frames = at(
        &a.trace,
        std::fs::read_to_string(&a.trace)
            .map_err(Error::from)
            .and_then(|t| read_trace(&t)),
    )?;
    let n = frames.len();
    let events: Vec<EventRecord> = replay(frames, &cfg)?
        .into_iter()
        .map(|e| EventRecord::new(e, &a.bed_id))
        .collect();
    at(&a.out, write_atomic(&a.out, write_events(&events).as_bytes()))?;
    for e in &events {
        println!("{} {} {}", e.timestamp, e.event_kind, e.bed_id);
    }
    println!("{n} frames, {} events -> {}", events.len(), a.out.display());

    let mut config = Config::new();
    config
        .path("trace", &a.trace)
        .path("out", &a.out)
        .set("bed_id", &a.bed_id)
        .set("debounce", a.debounce)
        .set("long_absence", a.long_absence)
        .set("window", a.window)
        .set("max_exits", a.max_exits);
    let body = ReportBody::Monitor { frames: n, events };
    save_optional_report(a.report.as_deref(), "monitor", config, body)
}

fn model_label(path: &Path, model: &TrainedModel) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| model.kind().to_string())
}

fn csv_metric(m: Metric) -> String {
    m.value().map(|v| v.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_plot(dir: &Path, name: &str, contents: &str) -> CliResult {
    at(dir, std::fs::create_dir_all(dir).map_err(Error::from))?;
    let path = dir.join(name);
    at(&path, write_atomic(&path, contents.as_bytes()))?;
    Ok(())
}

/// Cross-validated accuracy with its spread, one row per configuration.
fn write_fig5(dir: &Path, rows: &[SweepRow]) -> CliResult {
    let mut out = String::from("config,mean_accuracy,std_accuracy\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            csv_field(&r.config),
            r.result.mean_accuracy,
            r.result.std_accuracy
        );
    }
    write_plot(dir, "fig5.csv", &out)
}

/// Metrics on a whole evaluation set.
fn write_fig6(dir: &Path, model: &str, m: &MetricsReport) -> CliResult {
    let mut out = String::from("model,accuracy,sensitivity,specificity\n");
    let _ = writeln!(
        out,
        "{},{},{},{}",
        csv_field(model),
        csv_metric(m.accuracy),
        csv_metric(m.sensitivity),
        csv_metric(m.specificity)
    );
    write_plot(dir, "fig6.csv", &out)
}

/// Metrics per condition subset; absent-class metrics are left empty.
fn write_fig7(dir: &Path, model: &str, conditions: &[ConditionMetrics]) -> CliResult {
    let mut out = String::from("model,condition,accuracy,sensitivity,specificity\n");
    for c in conditions {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(model),
            c.condition.as_str(),
            csv_metric(c.metrics.accuracy),
            csv_metric(c.metrics.sensitivity),
            csv_metric(c.metrics.specificity)
        );
    }
    write_plot(dir, "fig7.csv", &out)
}
