//! One-hidden-layer network: 64 standardized inputs, `H` rectified-linear
//! hidden units, two softmax outputs (`NoPerson`, `Person`), trained by
//! mini-batch gradient descent on mean cross-entropy.
//!
//! Parameters flatten in the order hidden weights (`H × 64`, row-major),
//! hidden biases (`H`), output weights (`2 × H`, row-major), output biases
//! (`2`).

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Classifier, FeatureVector, Standardizer};
use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::frame::PIXELS;
use crate::rng;

pub const MAX_HIDDEN: usize = 1024;
const OUTPUTS: usize = 2;

/// Label returned when both class probabilities are equal.
pub const PROBABILITY_TIE: Label = Label::NoPerson;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NnHyperParams {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for NnHyperParams {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            epochs: 500,
            batch_size: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NnModel {
    pub hidden: usize,
    pub hp: NnHyperParams,
    pub seed: u64,
    pub standardizer: Standardizer,
    pub hidden_weights: Vec<f64>,
    pub hidden_bias: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub output_bias: [f64; OUTPUTS],
}

fn check_hidden(hidden: usize) -> Result<()> {
    if hidden == 0 || hidden > MAX_HIDDEN {
        return Err(Error::Parameter(format!(
            "hidden width must lie in 1..={MAX_HIDDEN}, got {hidden}"
        )));
    }
    Ok(())
}

fn one_hot(label: Label) -> [f64; OUTPUTS] {
    let mut t = [0.0; OUTPUTS];
    t[label.index()] = 1.0;
    t
}

fn softmax(logits: [f64; OUTPUTS]) -> ([f64; OUTPUTS], f64) {
    let m = logits[0].max(logits[1]);
    let e = [(logits[0] - m).exp(), (logits[1] - m).exp()];
    let s = e[0] + e[1];
    ([e[0] / s, e[1] / s], m + s.ln())
}

impl NnModel {
    /// All weights zero, identity input scaling. Outputs 0.5/0.5 for every
    /// input.
    pub fn zeroed(hidden: usize) -> Result<Self> {
        check_hidden(hidden)?;
        Ok(Self {
            hidden,
            hp: NnHyperParams::default(),
            seed: 0,
            standardizer: Standardizer::identity(),
            hidden_weights: vec![0.0; hidden * PIXELS],
            hidden_bias: vec![0.0; hidden],
            output_weights: vec![0.0; OUTPUTS * hidden],
            output_bias: [0.0; OUTPUTS],
        })
    }

    /// He-style uniform initialization scaled by fan-in; biases start at 0.
    fn initialized(hidden: usize, hp: NnHyperParams, seed: u64, standardizer: Standardizer) -> Result<Self> {
        let mut m = Self::zeroed(hidden)?;
        m.hp = hp;
        m.seed = seed;
        m.standardizer = standardizer;
        let mut rng = rng::stream(seed, rng::domain::NN_INIT, 0);
        let hidden_bound = (6.0 / PIXELS as f64).sqrt();
        for w in &mut m.hidden_weights {
            *w = rng.random_range(-hidden_bound..hidden_bound);
        }
        let output_bound = (6.0 / hidden as f64).sqrt();
        for w in &mut m.output_weights {
            *w = rng.random_range(-output_bound..output_bound);
        }
        Ok(m)
    }

    pub fn num_params(&self) -> usize {
        self.hidden * PIXELS + self.hidden + OUTPUTS * self.hidden + OUTPUTS
    }

    pub fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.num_params());
        p.extend_from_slice(&self.hidden_weights);
        p.extend_from_slice(&self.hidden_bias);
        p.extend_from_slice(&self.output_weights);
        p.extend_from_slice(&self.output_bias);
        p
    }

    pub fn with_params(&self, flat: &[f64]) -> Result<Self> {
        if flat.len() != self.num_params() {
            return Err(Error::InvalidInput(format!(
                "expected {} parameters, got {}",
                self.num_params(),
                flat.len()
            )));
        }
        let h = self.hidden;
        let (w1, rest) = flat.split_at(h * PIXELS);
        let (b1, rest) = rest.split_at(h);
        let (w2, b2) = rest.split_at(OUTPUTS * h);
        Ok(Self {
            hidden_weights: w1.to_vec(),
            hidden_bias: b1.to_vec(),
            output_weights: w2.to_vec(),
            output_bias: [b2[0], b2[1]],
            ..self.clone()
        })
    }

    /// `θ ← θ − step·grad` in place.
    fn descend(&mut self, grad: &[f64], step: f64) {
        let segments = [
            &mut self.hidden_weights[..],
            &mut self.hidden_bias[..],
            &mut self.output_weights[..],
            &mut self.output_bias[..],
        ];
        let mut offset = 0;
        for seg in segments {
            for (p, g) in seg.iter_mut().zip(&grad[offset..]) {
                *p -= step * g;
            }
            offset += seg.len();
        }
    }

    fn hidden_activations(&self, z: &FeatureVector, pre: &mut [f64]) {
        for (h, p) in pre.iter_mut().enumerate() {
            let row = &self.hidden_weights[h * PIXELS..(h + 1) * PIXELS];
            *p = self.hidden_bias[h] + row.iter().zip(z).map(|(w, x)| w * x).sum::<f64>();
        }
    }

    fn logits(&self, pre: &[f64]) -> [f64; OUTPUTS] {
        let h = self.hidden;
        let mut out = self.output_bias;
        for (c, o) in out.iter_mut().enumerate() {
            let row = &self.output_weights[c * h..(c + 1) * h];
            *o += row.iter().zip(pre).map(|(w, p)| w * p.max(0.0)).sum::<f64>();
        }
        out
    }

    /// Output logits for a raw feature vector.
    pub fn forward(&self, x: &FeatureVector) -> [f64; OUTPUTS] {
        let z = self.standardizer.transform(x);
        let mut pre = vec![0.0; self.hidden];
        self.hidden_activations(&z, &mut pre);
        self.logits(&pre)
    }

    /// Probability of `Person`.
    pub fn predict_proba(&self, x: &FeatureVector) -> f64 {
        softmax(self.forward(x)).0[Label::Person.index()]
    }

    /// Adds the summed per-sample gradient of cross-entropy over
    /// already-standardized inputs into `grad`; returns the summed loss.
    fn accumulate(&self, inputs: &[FeatureVector], labels: &[Label], grad: &mut [f64]) -> f64 {
        let h = self.hidden;
        let (g_w1, rest) = grad.split_at_mut(h * PIXELS);
        let (g_b1, rest) = rest.split_at_mut(h);
        let (g_w2, g_b2) = rest.split_at_mut(OUTPUTS * h);
        let mut pre = vec![0.0; h];
        let mut loss = 0.0;
        for (z, &label) in inputs.iter().zip(labels) {
            self.hidden_activations(z, &mut pre);
            let logits = self.logits(&pre);
            let (p, lse) = softmax(logits);
            loss += lse - logits[label.index()];
            let t = one_hot(label);
            let d_out = [p[0] - t[0], p[1] - t[1]];
            for c in 0..OUTPUTS {
                g_b2[c] += d_out[c];
                let row = &mut g_w2[c * h..(c + 1) * h];
                for (g, a) in row.iter_mut().zip(&pre) {
                    *g += d_out[c] * a.max(0.0);
                }
            }
            for k in 0..h {
                if pre[k] <= 0.0 {
                    continue;
                }
                let d = self.output_weights[k] * d_out[0] + self.output_weights[h + k] * d_out[1];
                g_b1[k] += d;
                let row = &mut g_w1[k * PIXELS..(k + 1) * PIXELS];
                for (g, x) in row.iter_mut().zip(z) {
                    *g += d * x;
                }
            }
        }
        loss
    }

    /// Mean cross-entropy over a batch of raw samples.
    pub fn loss(&self, features: &[FeatureVector], labels: &[Label]) -> f64 {
        let total: f64 = features
            .iter()
            .zip(labels)
            .map(|(x, &l)| {
                let logits = self.forward(x);
                softmax(logits).1 - logits[l.index()]
            })
            .sum();
        total / features.len() as f64
    }
}

/// Backpropagated gradient of mean cross-entropy over a batch of raw
/// samples, in the flat parameter order.
pub fn nn_gradient(model: &NnModel, features: &[FeatureVector], labels: &[Label]) -> Result<Vec<f64>> {
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "gradient needs a non-empty batch with one label per sample ({} vs {})",
            features.len(),
            labels.len()
        )));
    }
    let z: Vec<FeatureVector> = features.iter().map(|x| model.standardizer.transform(x)).collect();
    let mut grad = vec![0.0; model.num_params()];
    model.accumulate(&z, labels, &mut grad);
    let scale = 1.0 / features.len() as f64;
    grad.iter_mut().for_each(|g| *g *= scale);
    Ok(grad)
}

pub fn train_nn(
    features: &[FeatureVector],
    labels: &[Label],
    hidden: usize,
    hp: &NnHyperParams,
    seed: u64,
) -> Result<NnModel> {
    check_hidden(hidden)?;
    if features.is_empty() || features.len() != labels.len() {
        return Err(Error::InvalidInput("training needs one label per sample".into()));
    }
    if !(hp.learning_rate > 0.0 && hp.learning_rate.is_finite()) || hp.batch_size == 0 {
        return Err(Error::Parameter(
            "learning rate must be positive and batch size at least 1".into(),
        ));
    }
    let standardizer = Standardizer::fit(features);
    let z: Vec<FeatureVector> = features.iter().map(|x| standardizer.transform(x)).collect();
    let mut model = NnModel::initialized(hidden, *hp, seed, standardizer)?;

    let n = z.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut batch_z = Vec::with_capacity(hp.batch_size);
    let mut batch_y = Vec::with_capacity(hp.batch_size);
    let mut grad = vec![0.0; model.num_params()];

    for epoch in 0..hp.epochs {
        order.shuffle(&mut rng::stream(seed, rng::domain::NN_SHUFFLE, epoch as u64));
        for chunk in order.chunks(hp.batch_size) {
            batch_z.clear();
            batch_y.clear();
            batch_z.extend(chunk.iter().map(|&i| z[i]));
            batch_y.extend(chunk.iter().map(|&i| labels[i]));
            grad.iter_mut().for_each(|g| *g = 0.0);
            let loss = model.accumulate(&batch_z, &batch_y, &mut grad);
            if !loss.is_finite() {
                return Err(Error::Training(format!(
                    "loss became non-finite in epoch {epoch}; lower the learning rate"
                )));
            }
            model.descend(&grad, hp.learning_rate / chunk.len() as f64);
        }
    }
    if model.params().iter().any(|p| !p.is_finite()) {
        return Err(Error::Training("weights became non-finite".into()));
    }
    Ok(model)
}

impl Classifier for NnModel {
    fn predict(&self, x: &FeatureVector) -> Label {
        let out = self.forward(x);
        if out[Label::Person.index()] > out[Label::NoPerson.index()] {
            Label::Person
        } else {
            PROBABILITY_TIE
        }
    }
}
