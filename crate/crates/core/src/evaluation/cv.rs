use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{ConfusionCounts, MetricsReport};
use crate::classifiers::{Classifier, Trainer};
use crate::dataset::{Dataset, FoldPlan, Label};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub folds: Vec<FoldResult>,
    pub mean_accuracy: f64,
    /// Population standard deviation of per-fold accuracy.
    pub std_accuracy: f64,
    /// Counts summed over all folds.
    pub pooled: MetricsReport,
    /// Out-of-fold prediction for every sample, in dataset order.
    #[serde(skip)]
    pub predictions: Vec<Label>,
}

impl CvResult {
    pub fn from_folds(folds: Vec<FoldResult>, predictions: Vec<Label>) -> Self {
        let accs: Vec<f64> = folds
            .iter()
            .map(|f| f.metrics.accuracy.value().unwrap_or(0.0))
            .collect();
        let k = accs.len().max(1) as f64;
        let mean = accs.iter().sum::<f64>() / k;
        let var = accs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / k;
        let pooled = MetricsReport::from_counts(folds.iter().map(|f| f.metrics.counts).sum::<ConfusionCounts>());
        Self {
            folds,
            mean_accuracy: mean,
            std_accuracy: var.sqrt(),
            pooled,
            predictions,
        }
    }
}

/// Trains on every fold but one and tests on the held-out fold, for each
/// fold in turn. Folds run in parallel; the result does not depend on
/// scheduling.
pub fn cross_validate<T: Trainer>(ds: &Dataset, plan: &FoldPlan, trainer: &T) -> Result<CvResult> {
    plan.check_matches(ds)?;
    let features = ds.features();
    let labels = ds.labels();
    let outcomes = (0..plan.num_folds)
        .into_par_iter()
        .map(|fold| {
            let train = plan.train_indices(fold);
            let test = plan.test_indices(fold);
            if test.is_empty() {
                return Err(Error::Stratification(format!("fold {fold} is empty")));
            }
            let train_y: Vec<Label> = train.iter().map(|&i| labels[i]).collect();
            if !train_y.contains(&Label::Person) || !train_y.contains(&Label::NoPerson) {
                return Err(Error::Stratification(format!(
                    "training portion for fold {fold} lacks a class"
                )));
            }
            let train_x: Vec<_> = train.iter().map(|&i| features[i]).collect();
            let model = trainer.fit(&train_x, &train_y)?;
            let predicted: Vec<(usize, Label)> = test.iter().map(|&i| (i, model.predict(&features[i]))).collect();
            let mut counts = ConfusionCounts::default();
            for &(i, p) in &predicted {
                counts.record(p, labels[i]);
            }
            Ok((
                FoldResult {
                    fold,
                    metrics: MetricsReport::from_counts(counts),
                },
                predicted,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut predictions = vec![Label::NoPerson; ds.len()];
    let mut folds = Vec::with_capacity(outcomes.len());
    for (fold, predicted) in outcomes {
        for (i, p) in predicted {
            predictions[i] = p;
        }
        folds.push(fold);
    }
    Ok(CvResult::from_folds(folds, predictions))
}
