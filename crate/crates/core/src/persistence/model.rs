//! Versioned line-oriented model files.
//!
//! Every file starts with `format-version` and `model-kind`, followed by
//! the kind's hyperparameters as `key: value` lines and then its numeric
//! payload. Numbers use the shortest decimal that round-trips, so a loaded
//! model predicts exactly like the saved one.

use std::fmt::Write as _;
use std::path::Path;

use super::{fmt_f64, join_f64, parse_canonical_int, parse_f64, parse_f64_list, write_atomic, Lines};
use crate::classifiers::{
    FeatureVector, KernelKind, KernelSpec, KnnModel, NnHyperParams, NnModel, Standardizer, SvmModel,
    TrainedModel, Weighting,
};
use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::frame::PIXELS;

pub const MODEL_VERSION: u32 = 1;

fn to_vector(values: Vec<f64>) -> FeatureVector {
    let mut v = [0.0; PIXELS];
    v.copy_from_slice(&values);
    v
}

fn write_standardizer(out: &mut String, s: &Standardizer) {
    let _ = writeln!(out, "feature-mean: {}", join_f64(&s.mean));
    let _ = writeln!(out, "feature-scale: {}", join_f64(&s.scale));
}

fn read_standardizer(lines: &mut Lines) -> Result<Standardizer> {
    let mean = lines.expect_kv("feature-mean")?;
    let mean = parse_f64_list(lines.line_no(), "feature-mean", mean, PIXELS)?;
    let scale = lines.expect_kv("feature-scale")?;
    let n = lines.line_no();
    let scale = parse_f64_list(n, "feature-scale", scale, PIXELS)?;
    if scale.iter().any(|&s| s <= 0.0) {
        return Err(Error::format(n, "feature-scale", "scales must be positive"));
    }
    Ok(Standardizer {
        mean: to_vector(mean),
        scale: to_vector(scale),
    })
}

pub fn write_model(model: &TrainedModel) -> String {
    let mut out = format!("format-version: {MODEL_VERSION}\nmodel-kind: {}\n", model.kind());
    match model {
        TrainedModel::Knn(m) => write_knn(&mut out, m),
        TrainedModel::Svm(m) => write_svm(&mut out, m),
        TrainedModel::Nn(m) => write_nn(&mut out, m),
    }
    out
}

fn write_knn(out: &mut String, m: &KnnModel) {
    let _ = writeln!(out, "k: {}", m.k());
    let _ = writeln!(out, "weighting: {}", m.weighting());
    let _ = writeln!(out, "samples: {}", m.features().len());
    for (x, l) in m.features().iter().zip(m.labels()) {
        let _ = writeln!(out, "{},{l}", join_f64(x));
    }
}

fn write_svm(out: &mut String, m: &SvmModel) {
    let _ = writeln!(out, "kernel: {}", m.kernel.kind);
    let _ = writeln!(out, "degree: {}", m.kernel.degree);
    let _ = writeln!(out, "gamma: {}", fmt_f64(m.kernel.gamma));
    let _ = writeln!(out, "coef0: {}", fmt_f64(m.kernel.coef0));
    let _ = writeln!(out, "c: {}", fmt_f64(m.c));
    let _ = writeln!(out, "tol: {}", fmt_f64(m.tol));
    let _ = writeln!(out, "bias: {}", fmt_f64(m.bias));
    write_standardizer(out, &m.standardizer);
    let _ = writeln!(out, "support-vectors: {}", m.support_vectors.len());
    for ((i, a), s) in m.support_indices.iter().zip(&m.dual_coef).zip(&m.support_vectors) {
        let _ = writeln!(out, "{i},{},{}", fmt_f64(*a), join_f64(s));
    }
}

fn write_nn(out: &mut String, m: &NnModel) {
    let _ = writeln!(out, "hidden: {}", m.hidden);
    let _ = writeln!(out, "learning-rate: {}", fmt_f64(m.hp.learning_rate));
    let _ = writeln!(out, "epochs: {}", m.hp.epochs);
    let _ = writeln!(out, "batch-size: {}", m.hp.batch_size);
    let _ = writeln!(out, "seed: {}", m.seed);
    write_standardizer(out, &m.standardizer);
    let _ = writeln!(out, "hidden-weights:");
    for row in m.hidden_weights.chunks(PIXELS) {
        let _ = writeln!(out, "{}", join_f64(row));
    }
    let _ = writeln!(out, "hidden-bias: {}", join_f64(&m.hidden_bias));
    let _ = writeln!(out, "output-weights:");
    for row in m.output_weights.chunks(m.hidden) {
        let _ = writeln!(out, "{}", join_f64(row));
    }
    let _ = writeln!(out, "output-bias: {}", join_f64(&m.output_bias));
}

pub fn read_model(text: &str) -> Result<TrainedModel> {
    let mut lines = Lines::new(text)?;
    lines.expect_version("model", MODEL_VERSION)?;
    let kind = lines.expect_kv("model-kind")?;
    let model = match kind {
        "knn" => TrainedModel::Knn(read_knn(&mut lines)?),
        "svm" => TrainedModel::Svm(read_svm(&mut lines)?),
        "nn" => TrainedModel::Nn(read_nn(&mut lines)?),
        other => {
            return Err(Error::format(
                lines.line_no(),
                "model-kind",
                format!("unknown model kind `{other}`"),
            ))
        }
    };
    lines.expect_end()?;
    Ok(model)
}

fn read_knn(lines: &mut Lines) -> Result<KnnModel> {
    let k = lines.expect_usize("k")?;
    let weighting: Weighting = lines
        .expect_kv("weighting")?
        .parse()
        .map_err(|e: String| Error::format(lines.line_no(), "weighting", e))?;
    let n = lines.expect_usize("samples")?;
    let mut features = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines.next_line("sample")?;
        let ln = lines.line_no();
        let (values, label) = line
            .rsplit_once(',')
            .ok_or_else(|| Error::format(ln, "sample", "missing label"))?;
        features.push(to_vector(parse_f64_list(ln, "feature", values, PIXELS)?));
        labels.push(label.parse::<Label>().map_err(|e| Error::format(ln, "label", e))?);
    }
    crate::classifiers::train_knn(&features, &labels, k, weighting)
        .map_err(|e| Error::format(lines.line_no(), "k", e.to_string()))
}

fn read_svm(lines: &mut Lines) -> Result<SvmModel> {
    let kind: KernelKind = lines
        .expect_kv("kernel")?
        .parse()
        .map_err(|e: String| Error::format(lines.line_no(), "kernel", e))?;
    let degree = lines.expect_kv("degree")?;
    let degree: u32 = parse_canonical_int(lines.line_no(), "degree", degree)?;
    let kernel = KernelSpec {
        kind,
        degree,
        gamma: lines.expect_f64("gamma")?,
        coef0: lines.expect_f64("coef0")?,
    };
    kernel
        .validate()
        .map_err(|e| Error::format(lines.line_no(), "kernel", e.to_string()))?;
    let c = lines.expect_f64("c")?;
    let tol = lines.expect_f64("tol")?;
    let bias = lines.expect_f64("bias")?;
    let standardizer = read_standardizer(lines)?;
    let n = lines.expect_usize("support-vectors")?;
    let mut support_indices = Vec::with_capacity(n);
    let mut dual_coef = Vec::with_capacity(n);
    let mut support_vectors = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines.next_line("support vector")?;
        let ln = lines.line_no();
        let mut parts = line.splitn(3, ',');
        let (Some(i), Some(a), Some(rest)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::format(ln, "support vector", "expected index,coef,features"));
        };
        support_indices.push(parse_canonical_int(ln, "index", i)?);
        let a = parse_f64(ln, "coef", a)?;
        if a.abs() > c {
            return Err(Error::format(ln, "coef", format!("|{a}| exceeds C = {c}")));
        }
        dual_coef.push(a);
        support_vectors.push(to_vector(parse_f64_list(ln, "support vector", rest, PIXELS)?));
    }
    Ok(SvmModel {
        kernel,
        c,
        tol,
        standardizer,
        support_vectors,
        dual_coef,
        support_indices,
        bias,
    })
}

fn read_nn(lines: &mut Lines) -> Result<NnModel> {
    let hidden = lines.expect_usize("hidden")?;
    let mut model = NnModel::zeroed(hidden).map_err(|e| Error::format(lines.line_no(), "hidden", e.to_string()))?;
    model.hp = NnHyperParams {
        learning_rate: lines.expect_f64("learning-rate")?,
        epochs: lines.expect_usize("epochs")?,
        batch_size: lines.expect_usize("batch-size")?,
    };
    let seed = lines.expect_kv("seed")?;
    model.seed = parse_canonical_int(lines.line_no(), "seed", seed)?;
    model.standardizer = read_standardizer(lines)?;

    expect_marker(lines, "hidden-weights:")?;
    model.hidden_weights.clear();
    for _ in 0..hidden {
        let line = lines.next_line("hidden-weights")?;
        model
            .hidden_weights
            .extend(parse_f64_list(lines.line_no(), "hidden-weights", line, PIXELS)?);
    }
    let b1 = lines.expect_kv("hidden-bias")?;
    model.hidden_bias = parse_f64_list(lines.line_no(), "hidden-bias", b1, hidden)?;
    expect_marker(lines, "output-weights:")?;
    model.output_weights.clear();
    for _ in 0..2 {
        let line = lines.next_line("output-weights")?;
        model
            .output_weights
            .extend(parse_f64_list(lines.line_no(), "output-weights", line, hidden)?);
    }
    let b2 = lines.expect_kv("output-bias")?;
    let b2 = parse_f64_list(lines.line_no(), "output-bias", b2, 2)?;
    model.output_bias = [b2[0], b2[1]];
    Ok(model)
}

fn expect_marker(lines: &mut Lines, marker: &str) -> Result<()> {
    let line = lines.next_line(marker)?;
    if line != marker {
        return Err(Error::format(lines.line_no(), marker, format!("expected `{marker}`, found `{line}`")));
    }
    Ok(())
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    write_atomic(path, write_model(model).as_bytes())
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    read_model(&std::fs::read_to_string(path)?)
}
