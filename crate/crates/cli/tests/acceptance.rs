//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL
//! line; the test fails if any criterion does.

use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_rational::Ratio as Exact;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thermal_sense::classifiers::{
    nn_gradient, train_knn, train_nn, train_svm, Classifier, ClassifierSpec, FeatureVector, KernelKind,
    NnHyperParams, NnModel, SvmParams, Trainer, Weighting,
};
use thermal_sense::evaluation::{
    accuracy, confusion, cross_validate, evaluate_by_condition, sensitivity, specificity, Metric,
};
use thermal_sense::monitor::{replay, Event, EventKind, MonitorConfig};
use thermal_sense::persistence::{
    load_dataset, read_dataset, read_model, read_report, write_dataset, write_model, write_report, Report,
    ReportBody,
};
use thermal_sense::simulator::{generate_main, generate_variational};
use thermal_sense::{make_folds, ConditionTag, Dataset, Label, PIXELS};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_thermal-sense")
}

fn cli(dir: &Path, args: &[&str], threads: Option<&str>) -> Result<(), String> {
    let mut cmd = Command::new(bin());
    cmd.current_dir(dir).args(args);
    if let Some(t) = threads {
        cmd.env("THERMAL_SENSE_THREADS", t);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure!(
        out.status.success(),
        "`thermal-sense {}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    Ok(())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_label(r: &mut ChaCha8Rng) -> Label {
    if r.random_bool(0.5) {
        Label::Person
    } else {
        Label::NoPerson
    }
}

fn svm() -> ClassifierSpec {
    ClassifierSpec::Svm(SvmParams::default())
}

fn one_nn() -> ClassifierSpec {
    ClassifierSpec::Knn {
        k: 1,
        weighting: Weighting::Uniform,
    }
}

fn nn128(seed: u64) -> ClassifierSpec {
    ClassifierSpec::Nn {
        hidden: 128,
        hp: NnHyperParams::default(),
        seed,
    }
}

const SHIFT_SEEDS: [u64; 5] = [7, 8, 9, 10, 11];

/// Cross-validated accuracy on the seed-7 main set, shared with the
/// distribution-shift check.
struct MainRun {
    /// `[svm, 1-nn, nn]`
    cv_accuracy: [f64; 3],
}

fn criterion_1(work: &Path) -> (Outcome, Option<MainRun>) {
    let start = Instant::now();
    let run = || -> Result<MainRun, String> {
        cli(
            work,
            &["simulate", "main", "--n-per-class", "240", "--seed", "7", "--out", "main.csv"],
            None,
        )?;
        let ds = load_dataset(&work.join("main.csv")).map_err(|e| e.to_string())?;
        ensure!(ds.len() == 480, "expected 480 frames, got {}", ds.len());
        let plan = make_folds(&ds, 10, 7).map_err(|e| e.to_string())?;
        let mut acc = [0.0; 3];
        for (slot, spec) in [svm(), one_nn(), nn128(7)].iter().enumerate() {
            acc[slot] = cross_validate(&ds, &plan, spec).map_err(|e| e.to_string())?.mean_accuracy;
        }
        Ok(MainRun { cv_accuracy: acc })
    };
    match run() {
        Ok(main) => {
            let secs = start.elapsed().as_secs_f64();
            let [s, k, n] = main.cv_accuracy;
            let detail = format!("svm {s:.4}, 1-nn {k:.4}, nn(128) {n:.4}, {secs:.1} s");
            let outcome = if main.cv_accuracy.iter().all(|&a| a >= 0.97) && secs < 120.0 {
                Ok(detail)
            } else {
                Err(detail)
            };
            (outcome, Some(main))
        }
        Err(e) => (Err(e), None),
    }
}

fn criterion_2(main: Option<&MainRun>) -> Outcome {
    let names = ["svm", "1-nn", "nn(128)"];
    let mut cv = [0.0; 3];
    let mut shifted = [0.0; 3];
    // duvet_0, duvet_5, duvet_10 accuracy for svm and 1-nn.
    let mut duvet = [[0.0; 3]; 2];
    let tags = [ConditionTag::Duvet0min, ConditionTag::Duvet5min, ConditionTag::Duvet10min];
    for &seed in &SHIFT_SEEDS {
        let ds = generate_main(240, seed).map_err(|e| e.to_string())?;
        let var = generate_variational(30, seed).map_err(|e| e.to_string())?;
        let plan = make_folds(&ds, 10, seed).map_err(|e| e.to_string())?;
        for (slot, spec) in [svm(), one_nn(), nn128(seed)].iter().enumerate() {
            cv[slot] += match main {
                Some(m) if seed == 7 => m.cv_accuracy[slot],
                _ => cross_validate(&ds, &plan, spec).map_err(|e| e.to_string())?.mean_accuracy,
            };
            let model = spec.fit_dataset(&ds).map_err(|e| e.to_string())?;
            let report = evaluate_by_condition(&model, &var).map_err(|e| e.to_string())?;
            shifted[slot] += report.overall.accuracy.value().unwrap_or(0.0);
            if slot < 2 {
                for (t, tag) in tags.iter().enumerate() {
                    let m = report.get(*tag).ok_or_else(|| format!("no {tag:?} subset"))?;
                    duvet[slot][t] += m.accuracy.value().unwrap_or(0.0);
                }
            }
        }
    }
    let runs = SHIFT_SEEDS.len() as f64;
    let mut detail = Vec::new();
    let mut ok = true;
    for slot in 0..3 {
        let (c, v) = (cv[slot] / runs, shifted[slot] / runs);
        ok &= v < c;
        detail.push(format!("{} cv {c:.4} > shifted {v:.4}", names[slot]));
    }
    for slot in 0..2 {
        let [d0, d5, d10] = duvet[slot].map(|a| a / runs);
        ok &= d0 < d5 && d0 < d10 && d0 <= d5 && d5 <= d10;
        detail.push(format!("{} duvet 0/5/10 {d0:.3}/{d5:.3}/{d10:.3}", names[slot]));
    }
    let detail = detail.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let outcomes = [
        (Label::Person, Label::Person),
        (Label::Person, Label::NoPerson),
        (Label::NoPerson, Label::NoPerson),
        (Label::NoPerson, Label::Person),
    ];
    for case in 0..1000 {
        let mut pairs = Vec::new();
        for &o in &outcomes {
            let n = if r.random_bool(0.15) { 0 } else { r.random_range(0..200) };
            pairs.extend(std::iter::repeat_n(o, n));
        }
        if pairs.is_empty() {
            pairs.push(outcomes[0]);
        }
        pairs.shuffle(&mut r);
        let (predicted, truth): (Vec<Label>, Vec<Label>) = pairs.iter().copied().unzip();
        let counts = confusion(&predicted, &truth).map_err(|e| e.to_string())?;

        // Direct count of the definitions over the raw prediction pairs.
        let total = pairs.len() as u64;
        let correct = pairs.iter().filter(|(p, t)| p == t).count() as u64;
        let positives = pairs.iter().filter(|(_, t)| *t == Label::Person).count() as u64;
        let found = pairs.iter().filter(|&&(p, t)| p == Label::Person && t == Label::Person).count() as u64;
        let negatives = total - positives;
        let rejected = correct - found;

        let exact = |m: Metric| match m {
            Metric::Defined(q) => Some(Exact::new(q.numerator, q.denominator)),
            Metric::Undefined => None,
        };
        let direct = |n: u64, d: u64| (d > 0).then(|| Exact::new(n, d));
        let acc = accuracy(&counts).map_err(|e| e.to_string())?;
        ensure!(
            Exact::new(acc.numerator, acc.denominator) == Exact::new(correct, total),
            "case {case}: accuracy"
        );
        ensure!(exact(sensitivity(&counts)) == direct(found, positives), "case {case}: sensitivity");
        ensure!(exact(specificity(&counts)) == direct(rejected, negatives), "case {case}: specificity");
    }
    Ok("1000 random confusion counts match exactly".into())
}

fn brute_force_knn(
    train: &[FeatureVector],
    labels: &[Label],
    k: usize,
    weighting: Weighting,
    x: &FeatureVector,
) -> Label {
    let mut order: Vec<(f64, usize)> = train
        .iter()
        .enumerate()
        .map(|(i, t)| (t.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(), i))
        .collect();
    order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let nearest = &order[..k];
    let exact: Vec<_> = nearest.iter().filter(|n| n.0 == 0.0).collect();
    let mut votes = [0.0; 2];
    for &(d, i) in nearest {
        let w = match weighting {
            Weighting::Uniform => 1.0,
            Weighting::Distance if !exact.is_empty() => f64::from(d == 0.0),
            Weighting::Distance => 1.0 / d,
        };
        votes[usize::from(labels[i] == Label::Person)] += w;
    }
    if votes[1] > votes[0] {
        Label::Person
    } else {
        Label::NoPerson
    }
}

fn axis(values: &[f64]) -> FeatureVector {
    let mut v = [0.0; PIXELS];
    v[..values.len()].copy_from_slice(values);
    v
}

fn criterion_4() -> Outcome {
    // Documented tie cases first.
    let weighted_tie = train_knn(
        &[axis(&[1.0]), axis(&[-2.0]), axis(&[0.0, 2.0])],
        &[Label::NoPerson, Label::Person, Label::Person],
        3,
        Weighting::Distance,
    )
    .map_err(|e| e.to_string())?;
    ensure!(weighted_tie.predict(&axis(&[])) == Label::NoPerson, "1.0 vs 0.5 + 0.5 tie");
    let even = train_knn(&[axis(&[1.0]), axis(&[-1.0])], &[Label::Person, Label::NoPerson], 2, Weighting::Uniform)
        .map_err(|e| e.to_string())?;
    ensure!(even.predict(&axis(&[])) == Label::NoPerson, "uniform vote tie");
    let lower_index = train_knn(&[axis(&[1.0]), axis(&[-1.0])], &[Label::Person, Label::NoPerson], 1, Weighting::Uniform)
        .map_err(|e| e.to_string())?;
    ensure!(lower_index.predict(&axis(&[])) == Label::Person, "equal distance, lower index");

    let mut r = rng(4);
    let mut checked = 0;
    for case in 0..200 {
        let n = r.random_range(7..=50);
        let cell = |r: &mut ChaCha8Rng| {
            let mut v = [0.0; PIXELS];
            for x in v.iter_mut().take(4) {
                *x = f64::from(r.random_range(0..3u8));
            }
            v
        };
        let train: Vec<_> = (0..n).map(|_| cell(&mut r)).collect();
        let labels: Vec<_> = (0..n).map(|_| random_label(&mut r)).collect();
        let k = [1, 3, 5, 7][case % 4];
        let probes: Vec<_> = (0..r.random_range(1..=20)).map(|_| cell(&mut r)).collect();
        for weighting in [Weighting::Uniform, Weighting::Distance] {
            let model = train_knn(&train, &labels, k, weighting).map_err(|e| e.to_string())?;
            for x in &probes {
                let expected = brute_force_knn(&train, &labels, k, weighting, x);
                ensure!(model.predict(x) == expected, "case {case}, k={k} {weighting}");
                checked += 1;
            }
        }
    }
    Ok(format!("200 instances, {checked} predictions identical"))
}

fn random_problem(r: &mut ChaCha8Rng, separable: bool) -> (Vec<FeatureVector>, Vec<Label>) {
    let n = r.random_range(10..=40);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..n {
        let label = if i % 2 == 0 { Label::Person } else { Label::NoPerson };
        let mut x = [0.0; PIXELS];
        for v in x.iter_mut() {
            *v = r.random_range(-1.0..1.0);
        }
        let gap = if separable { 3.0 } else { 0.25 };
        x[1] += if label == Label::Person { gap } else { -gap };
        xs.push(x);
        ys.push(label);
    }
    (xs, ys)
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut worst_balance: f64 = 0.0;
    let mut bounded = 0;
    for case in 0..50 {
        let (xs, ys) = random_problem(&mut r, case < 25);
        let kernel = [KernelKind::Linear, KernelKind::Rbf][case % 2];
        let params = SvmParams::with_kernel(kernel);
        let model = train_svm(&xs, &ys, &params).map_err(|e| e.to_string())?;
        let alpha = model.alphas(xs.len());
        let tol = params.tol;
        for (i, x) in xs.iter().enumerate() {
            let y = if ys[i] == Label::Person { 1.0 } else { -1.0 };
            let m = y * model.decision(x);
            let a = alpha[i];
            ensure!((0.0..=params.c).contains(&a), "case {case}: α out of box");
            if a == 0.0 {
                ensure!(m >= 1.0 - tol, "case {case}: α=0, yf={m}");
            } else if a < params.c {
                ensure!((m - 1.0).abs() <= tol, "case {case}: free α, yf={m}");
            } else {
                bounded += 1;
                ensure!(m <= 1.0 + tol, "case {case}: α=C, yf={m}");
            }
        }
        worst_balance = worst_balance.max(model.dual_balance().abs());
    }
    ensure!(worst_balance <= 1e-8, "Σαy = {worst_balance:e}");
    ensure!(bounded > 0, "no bounded multipliers exercised");

    let params = SvmParams {
        c: 1e6,
        ..SvmParams::default()
    };
    let model = train_svm(&[axis(&[-1.0]), axis(&[1.0])], &[Label::NoPerson, Label::Person], &params)
        .map_err(|e| e.to_string())?;
    let (w, b) = model.linear_weights().ok_or("no linear weights")?;
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    let margin = 2.0 / norm;
    ensure!((w[0] - 1.0).abs() < 1e-3 && w[1..].iter().all(|v| v.abs() < 1e-3), "w = {:?}", &w[..2]);
    ensure!(b.abs() < 1e-3, "b = {b}");
    ensure!((margin - 2.0).abs() < 1e-3, "margin {margin}");
    Ok(format!(
        "KKT on 50 instances, max |Σαy| {worst_balance:.1e}; toy w₁={:.6} b={b:.1e} margin={margin:.6}",
        w[0]
    ))
}

/// Double-double number `hi + lo`, enough precision that the finite
/// difference below carries no cancellation error.
#[derive(Clone, Copy)]
struct Dd(f64, f64);

impl Dd {
    fn from(v: f64) -> Self {
        Dd(v, 0.0)
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.0 + o.0;
        let bb = s - self.0;
        let err = (self.0 - (s - bb)) + (o.0 - bb);
        let lo = err + self.1 + o.1;
        let hi = s + lo;
        Dd(hi, lo - (hi - s))
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let err = self.0.mul_add(o.0, -p);
        let lo = err + self.0 * o.1 + self.1 * o.0;
        let hi = p + lo;
        Dd(hi, lo - (hi - p))
    }

    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    fn relu(self) -> Dd {
        if self.0 > 0.0 || (self.0 == 0.0 && self.1 > 0.0) {
            self
        } else {
            Dd::from(0.0)
        }
    }
}

/// Logit margin `z_other − z_true` for each sample, from the flat
/// parameters `[w1, b1, w2, b2]`.
fn oracle_margins(hidden: usize, p: &[f64], xs: &[FeatureVector], ys: &[Label]) -> Vec<Dd> {
    let (w1, rest) = p.split_at(hidden * PIXELS);
    let (b1, rest) = rest.split_at(hidden);
    let (w2, b2) = rest.split_at(2 * hidden);
    xs.iter()
        .zip(ys)
        .map(|(x, y)| {
            let t = usize::from(*y == Label::Person);
            let o = 1 - t;
            let mut d = Dd::from(b2[o]).add(Dd::from(b2[t]).neg());
            for j in 0..hidden {
                let mut a = Dd::from(b1[j]);
                for i in 0..PIXELS {
                    a = a.add(Dd::from(w1[j * PIXELS + i]).mul(Dd::from(x[i])));
                }
                let h = a.relu();
                d = d.add(Dd::from(w2[o * hidden + j]).mul(h)).add(Dd::from(w2[t * hidden + j]).mul(h).neg());
            }
            d
        })
        .collect()
}

/// Central difference of the mean cross-entropy between two parameter
/// vectors. Per sample the loss is `softplus(margin)`, and
/// `softplus(a + δ) − softplus(a) = ln1p(σ(a)·expm1(δ))` keeps full
/// relative precision for tiny `δ`.
fn oracle_loss_difference(hidden: usize, up: &[f64], down: &[f64], xs: &[FeatureVector], ys: &[Label]) -> f64 {
    let mu = oracle_margins(hidden, up, xs, ys);
    let md = oracle_margins(hidden, down, xs, ys);
    let total: f64 = mu
        .iter()
        .zip(&md)
        .map(|(u, d)| {
            let delta = u.add(d.neg());
            let delta = delta.0 + delta.1;
            let sigma = 1.0 / (1.0 + (-d.0).exp());
            (sigma * delta.exp_m1()).ln_1p()
        })
        .sum();
    total / xs.len() as f64
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let hidden = r.random_range(1..=16);
        let batch = r.random_range(1..=10);
        let base = NnModel::zeroed(hidden).map_err(|e| e.to_string())?;
        let p: Vec<f64> = (0..base.num_params()).map(|_| r.random_range(-0.5..0.5)).collect();
        let model = base.with_params(&p).map_err(|e| e.to_string())?;
        let xs: Vec<FeatureVector> = (0..batch)
            .map(|_| std::array::from_fn(|_| r.random_range(-1.0..1.0)))
            .collect();
        let ys: Vec<Label> = (0..batch).map(|_| random_label(&mut r)).collect();
        let g = nn_gradient(&model, &xs, &ys).map_err(|e| e.to_string())?;
        let (mut up, mut down) = (p.clone(), p.clone());
        for i in 0..p.len() {
            up[i] = p[i] + h;
            down[i] = p[i] - h;
            let fd = oracle_loss_difference(hidden, &up, &down, &xs, &ys) / (up[i] - down[i]);
            up[i] = p[i];
            down[i] = p[i];
            let scale = g[i].abs().max(fd.abs());
            if scale > 0.0 {
                worst = worst.max((g[i] - fd).abs() / scale);
            }
        }
    }
    ensure!(worst < 1e-5, "max relative error {worst:e}");

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
        xs.push(axis(&[a, b]));
        ys.push(if a != b { Label::Person } else { Label::NoPerson });
    }
    let hp = NnHyperParams {
        learning_rate: 0.1,
        epochs: 3000,
        batch_size: 4,
    };
    // Four ReLU units can lose a unit for good early in training, so not
    // every initialization solves XOR; the check uses one fixed seed and
    // reports how many of ten would.
    let solved = |seed: u64| -> Result<bool, String> {
        let model = train_nn(&xs, &ys, 4, &hp, seed).map_err(|e| e.to_string())?;
        Ok(model.predict_all(&xs) == ys)
    };
    ensure!(solved(1)?, "XOR not fitted with seed 1");
    let mut rate = 0;
    for seed in 0..10 {
        rate += usize::from(solved(seed)?);
    }
    Ok(format!(
        "max relative error {worst:.1e} over 20 configurations; XOR 4/4 (seed 1; {rate}/10 seeds)"
    ))
}

/// The full pipeline, run from `dir` with relative paths.
fn pipeline(dir: &Path, threads: Option<&str>) -> Result<(), String> {
    let steps: &[&[&str]] = &[
        &["simulate", "main", "--n-per-class", "60", "--seed", "3", "--out", "main.csv", "--report", "sim.json"],
        &["simulate", "variational", "--n-per-cell", "6", "--seed", "3", "--out", "var.csv"],
        &["split", "--data", "main.csv", "--seed", "3", "--train-out", "train.csv", "--test-out", "test.csv",
          "--report", "split.json"],
        &["cv", "--data", "main.csv", "--seed", "3", "--model", "svm", "--folds-out", "folds.txt",
          "--report", "cv.json", "--emit-plot-data", "plots"],
        &["sweep", "--data", "main.csv", "--seed", "3", "--family", "knn-grid", "--report", "sweep.json"],
        &["train", "--data", "train.csv", "--model", "knn", "--k", "3", "--out", "knn.model"],
        &["train", "--data", "train.csv", "--model", "svm", "--kernel", "rbf", "--out", "svm.model"],
        &["train", "--data", "train.csv", "--model", "nn", "--hidden", "16", "--epochs", "30", "--seed", "3",
          "--out", "nn.model", "--report", "train.json"],
        &["eval", "--model", "nn.model", "--data", "var.csv", "--by-condition", "--report", "eval.json",
          "--emit-plot-data", "plots"],
        &["predict", "--model", "svm.model", "--data", "test.csv", "--interval", "60", "--out", "trace.csv"],
        &["monitor", "--trace", "trace.csv", "--out", "events.csv", "--report", "monitor.json"],
    ];
    for args in steps {
        cli(dir, args, threads)?;
    }
    Ok(())
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            out.extend(files(&p));
        } else {
            out.push(p);
        }
    }
    out.sort();
    out
}

fn criterion_7(work: &Path) -> Outcome {
    let a = work.join("run-a");
    let b = work.join("run-b");
    for d in [&a, &b] {
        std::fs::create_dir_all(d).map_err(|e| e.to_string())?;
    }
    pipeline(&a, None)?;
    pipeline(&b, Some("3"))?;
    let fa = files(&a);
    let fb = files(&b);
    ensure!(fa.len() == fb.len() && fa.len() >= 19, "file sets differ: {} vs {}", fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        ensure!(x.strip_prefix(&a).ok() == y.strip_prefix(&b).ok(), "file sets differ");
        let (bx, by) = (std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        ensure!(bx == by, "{} differs between runs", x.display());
    }

    let mut worst = 0;
    for (n, seed) in [(240, 7), (37, 1), (50, 2), (13, 3)] {
        let ds = generate_main(n, seed).map_err(|e| e.to_string())?;
        for k in [2, 3, 5, 10] {
            let plan = make_folds(&ds, k, seed).map_err(|e| e.to_string())?;
            worst = worst.max(plan.max_class_imbalance(&ds));
        }
    }
    ensure!(worst <= 1, "fold class counts differ by {worst}");
    Ok(format!("{} files byte-identical across runs; fold imbalance ≤ {worst}", fa.len()))
}

fn criterion_8() -> Outcome {
    let mut frames = 0;
    let sets = [
        generate_main(2500, 8).map_err(|e| e.to_string())?,
        generate_variational(834, 8).map_err(|e| e.to_string())?,
    ];
    for ds in &sets {
        for s in &ds.samples {
            for &v in s.features() {
                ensure!((20.0..=100.0).contains(&v), "value {v} out of range");
                ensure!((v * 4.0).fract() == 0.0, "value {v} is not a quarter degree");
            }
            frames += 1;
        }
    }
    ensure!(frames >= 10_000, "only {frames} frames");
    Ok(format!("{frames} frames in [20, 100] on the quarter-degree grid"))
}

fn criterion_9() -> Outcome {
    // One frame a minute for eight hours. In bed, apart from one wrong
    // frame at 01:40, until 03:00; out for 30 minutes; back until 08:00.
    let night: Vec<(i64, Label)> = (0..480)
        .map(|i| {
            let out = i == 100 || (180..210).contains(&i);
            (i * 60, if out { Label::NoPerson } else { Label::Person })
        })
        .collect();
    // Absence from 10800 s, long once 900 s have passed; the return that
    // starts at 12600 s is confirmed on its third frame.
    let expected = [
        Event {
            timestamp: 11_700,
            kind: EventKind::BedExit,
        },
        Event {
            timestamp: 12_720,
            kind: EventKind::Return,
        },
    ];
    let cfg = MonitorConfig::default();
    let events = replay(night, &cfg).map_err(|e| e.to_string())?;
    ensure!(events == expected, "events {events:?}");

    let glitchy: Vec<(i64, Label)> = (0..480)
        .map(|i| (i * 60, if i % 9 == 4 || i % 13 == 0 { Label::NoPerson } else { Label::Person }))
        .collect();
    let events = replay(glitchy, &cfg).map_err(|e| e.to_string())?;
    ensure!(events.is_empty(), "glitches raised {events:?}");
    Ok("bed_exit@11700, return@12720; glitches silent".into())
}

fn criterion_10() -> Outcome {
    let ds = generate_main(240, 10).map_err(|e| e.to_string())?;
    let text = write_dataset(&ds);
    let back = read_dataset(&text, "main").map_err(|e| e.to_string())?;
    ensure!(write_dataset(&back) == text, "dataset bytes changed");

    let plan = make_folds(&ds, 10, 10).map_err(|e| e.to_string())?;
    let result = cross_validate(&ds, &plan, &svm()).map_err(|e| e.to_string())?;
    let report = Report::new(
        "cv",
        [("seed".to_string(), "10".to_string())].into(),
        ReportBody::Cv {
            classifier: svm().to_string(),
            result,
        },
    );
    let text = write_report(&report);
    let back = read_report(&text).map_err(|e| e.to_string())?;
    ensure!(write_report(&back) == text, "report bytes changed");

    let mut r = rng(10);
    let probes: Vec<FeatureVector> = (0..1000)
        .map(|_| std::array::from_fn(|_| f64::from(r.random_range(80..=160u32)) / 4.0))
        .collect();
    let specs = [
        ClassifierSpec::Knn {
            k: 5,
            weighting: Weighting::Distance,
        },
        ClassifierSpec::Svm(SvmParams::with_kernel(KernelKind::Rbf)),
        ClassifierSpec::Nn {
            hidden: 32,
            hp: NnHyperParams {
                epochs: 40,
                ..Default::default()
            },
            seed: 10,
        },
    ];
    let small = Dataset::new("small", ds.samples[..120].to_vec());
    for spec in &specs {
        let model = spec.fit_dataset(&small).map_err(|e| e.to_string())?;
        let loaded = read_model(&write_model(&model)).map_err(|e| e.to_string())?;
        ensure!(model.predict_all(&probes) == loaded.predict_all(&probes), "{} predictions changed", spec.kind());
    }
    Ok("dataset and report bytes stable; knn/svm/nn agree on 1000 inputs".into())
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn report(id: usize, name: &str, outcome: &Outcome) {
    let (tag, detail) = match outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    // Written past the test harness capture so the lines always appear.
    let lead = if id == 1 { "\n" } else { "" };
    let _ = writeln!(std::io::stdout(), "{lead}[{tag}] criterion {id:>2}: {name}: {detail}");
}

#[test]
fn acceptance_criteria() {
    let work = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    let mut record = |id: usize, name: &str, outcome: Outcome| {
        report(id, name, &outcome);
        if outcome.is_err() {
            failures.push(id);
        }
    };

    let mut main = None;
    let first = guarded(|| {
        let (o, m) = criterion_1(work.path());
        main = m;
        o
    });
    record(1, "main-set cross-validation", first);
    record(2, "distribution shift", guarded(|| criterion_2(main.as_ref())));
    record(3, "metric formulas", guarded(criterion_3));
    record(4, "k-NN oracle", guarded(criterion_4));
    record(5, "SVM optimality", guarded(criterion_5));
    record(6, "NN gradient and XOR", guarded(criterion_6));
    record(7, "determinism", guarded(|| criterion_7(work.path())));
    record(8, "quantization", guarded(criterion_8));
    record(9, "monitor trace", guarded(criterion_9));
    record(10, "persistence round trips", guarded(criterion_10));

    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
