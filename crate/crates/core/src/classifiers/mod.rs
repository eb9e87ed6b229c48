//! The three occupancy classifiers and a common way to configure, train
//! and query them.

pub mod kernel;
pub mod knn;
pub mod nn;
pub mod svm;

pub use kernel::{kernel_eval, KernelKind, KernelSpec};
pub use knn::{train_knn, KnnModel, Weighting};
pub use nn::{nn_gradient, train_nn, NnHyperParams, NnModel};
pub use svm::{train_svm, SvmModel, SvmParams};

use std::fmt;

use crate::dataset::{Dataset, Label};
use crate::error::Result;
use crate::frame::PIXELS;

pub type FeatureVector = [f64; PIXELS];

pub trait Classifier {
    fn predict(&self, x: &FeatureVector) -> Label;

    fn predict_all(&self, xs: &[FeatureVector]) -> Vec<Label> {
        xs.iter().map(|x| self.predict(x)).collect()
    }
}

/// Something that can fit a classifier to labeled features.
pub trait Trainer: Sync {
    type Model: Classifier + Send + Sync;

    fn fit(&self, features: &[FeatureVector], labels: &[Label]) -> Result<Self::Model>;

    fn fit_dataset(&self, ds: &Dataset) -> Result<Self::Model> {
        self.fit(&ds.features(), &ds.labels())
    }
}

/// Per-feature z-scoring fitted on training data. Features with zero
/// spread keep a scale of 1 so they map to a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: FeatureVector,
    pub scale: FeatureVector,
}

impl Standardizer {
    pub fn identity() -> Self {
        Self {
            mean: [0.0; PIXELS],
            scale: [1.0; PIXELS],
        }
    }

    pub fn fit(features: &[FeatureVector]) -> Self {
        let n = features.len().max(1) as f64;
        let mut mean = [0.0; PIXELS];
        for x in features {
            for (m, v) in mean.iter_mut().zip(x) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut scale = [0.0; PIXELS];
        for x in features {
            for ((s, v), m) in scale.iter_mut().zip(x).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        for s in &mut scale {
            let sd = (*s / n).sqrt();
            *s = if sd > 1e-12 { sd } else { 1.0 };
        }
        Self { mean, scale }
    }

    pub fn transform(&self, x: &FeatureVector) -> FeatureVector {
        let mut z = [0.0; PIXELS];
        for i in 0..PIXELS {
            z[i] = (x[i] - self.mean[i]) / self.scale[i];
        }
        z
    }
}

/// Which classifier to train and with what settings.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    Knn { k: usize, weighting: Weighting },
    Svm(SvmParams),
    Nn { hidden: usize, hp: NnHyperParams, seed: u64 },
}

impl ClassifierSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ClassifierSpec::Knn { .. } => "knn",
            ClassifierSpec::Svm(_) => "svm",
            ClassifierSpec::Nn { .. } => "nn",
        }
    }
}

impl fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierSpec::Knn { k, weighting } => write!(f, "knn k={k} weighting={weighting}"),
            ClassifierSpec::Svm(p) => write!(f, "svm kernel={} C={} tol={}", p.kernel, p.c, p.tol),
            ClassifierSpec::Nn { hidden, hp, seed } => write!(
                f,
                "nn hidden={hidden} lr={} epochs={} batch={} seed={seed}",
                hp.learning_rate, hp.epochs, hp.batch_size
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedModel {
    Knn(KnnModel),
    Svm(SvmModel),
    Nn(NnModel),
}

impl TrainedModel {
    pub fn kind(&self) -> &'static str {
        match self {
            TrainedModel::Knn(_) => "knn",
            TrainedModel::Svm(_) => "svm",
            TrainedModel::Nn(_) => "nn",
        }
    }
}

impl Classifier for TrainedModel {
    fn predict(&self, x: &FeatureVector) -> Label {
        match self {
            TrainedModel::Knn(m) => m.predict(x),
            TrainedModel::Svm(m) => m.predict(x),
            TrainedModel::Nn(m) => m.predict(x),
        }
    }
}

impl Trainer for ClassifierSpec {
    type Model = TrainedModel;

    fn fit(&self, features: &[FeatureVector], labels: &[Label]) -> Result<TrainedModel> {
        Ok(match self {
            ClassifierSpec::Knn { k, weighting } => {
                TrainedModel::Knn(train_knn(features, labels, *k, *weighting)?)
            }
            ClassifierSpec::Svm(params) => TrainedModel::Svm(train_svm(features, labels, params)?),
            ClassifierSpec::Nn { hidden, hp, seed } => {
                TrainedModel::Nn(train_nn(features, labels, *hidden, hp, *seed)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standardizer_handles_constant_features() {
        let a = [[1.0; PIXELS], [3.0; PIXELS]];
        let mut b = a;
        b[0][0] = 5.0;
        b[1][0] = 5.0;
        let s = Standardizer::fit(&b);
        assert_eq!(s.scale[0], 1.0);
        assert_eq!(s.transform(&b[0])[0], 0.0);
        assert_eq!(s.scale[1], 1.0);
        assert_eq!(s.mean[1], 2.0);
        assert_eq!(s.transform(&b[1])[1], 1.0);
    }

    #[test]
    fn spec_trains_matching_model() {
        let feats = vec![[20.0; PIXELS], [30.0; PIXELS], [21.0; PIXELS], [31.0; PIXELS]];
        let labels = vec![Label::NoPerson, Label::Person, Label::NoPerson, Label::Person];
        let specs = [
            ClassifierSpec::Knn { k: 1, weighting: Weighting::Uniform },
            ClassifierSpec::Svm(SvmParams::default()),
            ClassifierSpec::Nn {
                hidden: 4,
                hp: NnHyperParams { epochs: 200, learning_rate: 0.1, batch_size: 4 },
                seed: 1,
            },
        ];
        for spec in specs {
            let m = spec.fit(&feats, &labels).unwrap();
            assert_eq!(m.kind(), spec.kind());
            assert_eq!(m.predict_all(&feats), labels, "{spec}");
        }
    }
}
