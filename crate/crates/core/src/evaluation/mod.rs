//! Metrics, cross-validation, hyperparameter sweeps, and per-condition
//! robustness evaluation.

mod cv;
mod metrics;
mod sweep;

pub use cv::{cross_validate, CvResult, FoldResult};
pub use metrics::{
    accuracy, confusion, sensitivity, specificity, ConfusionCounts, Metric, MetricsReport, Ratio,
};
pub use sweep::{sweep, SweepFamily, SweepOptions, SweepRow};

use serde::{Deserialize, Serialize};

use crate::classifiers::Classifier;
use crate::dataset::{ConditionTag, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionMetrics {
    pub condition: ConditionTag,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub overall: MetricsReport,
    /// Conditions present in the data, in tag order.
    pub conditions: Vec<ConditionMetrics>,
}

impl ConditionReport {
    pub fn get(&self, tag: ConditionTag) -> Option<&MetricsReport> {
        self.conditions
            .iter()
            .find(|c| c.condition == tag)
            .map(|c| &c.metrics)
    }
}

/// Metrics on the whole dataset and on each condition subset.
pub fn evaluate_by_condition<C: Classifier + ?Sized>(model: &C, ds: &Dataset) -> Result<ConditionReport> {
    if ds.is_empty() {
        return Err(Error::InvalidInput("cannot evaluate on an empty dataset".into()));
    }
    let mut per_tag = [ConfusionCounts::default(); ConditionTag::ALL.len()];
    for s in &ds.samples {
        let slot = ConditionTag::ALL.iter().position(|&t| t == s.condition).unwrap_or(0);
        per_tag[slot].record(model.predict(s.features()), s.label);
    }
    let conditions: Vec<ConditionMetrics> = ConditionTag::ALL
        .iter()
        .zip(per_tag)
        .filter(|(_, c)| c.total() > 0)
        .map(|(&condition, counts)| ConditionMetrics {
            condition,
            metrics: MetricsReport::from_counts(counts),
        })
        .collect();
    let overall = MetricsReport::from_counts(per_tag.into_iter().sum());
    Ok(ConditionReport { overall, conditions })
}
