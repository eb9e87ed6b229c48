//! Labeled samples, datasets, and the deterministic stratified splitting
//! that every experiment shares.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{ThermalFrame, PIXELS};
use crate::rng;

/// Occupancy label. `Person` is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    NoPerson = 0,
    Person = 1,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::NoPerson, Label::Person];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::NoPerson => "no_person",
            Label::Person => "person",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "person" => Ok(Label::Person),
            "no_person" => Ok(Label::NoPerson),
            other => Err(format!("unknown label `{other}` (expected person|no_person)")),
        }
    }
}

/// Capture condition a sample was recorded (or simulated) under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionTag {
    #[serde(rename = "baseline")]
    Baseline,
    #[serde(rename = "hot_room")]
    HotRoom,
    #[serde(rename = "water_bottle")]
    WaterBottle,
    #[serde(rename = "duvet_0")]
    Duvet0min,
    #[serde(rename = "duvet_5")]
    Duvet5min,
    #[serde(rename = "duvet_10")]
    Duvet10min,
}

impl ConditionTag {
    pub const ALL: [ConditionTag; 6] = [
        ConditionTag::Baseline,
        ConditionTag::HotRoom,
        ConditionTag::WaterBottle,
        ConditionTag::Duvet0min,
        ConditionTag::Duvet5min,
        ConditionTag::Duvet10min,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionTag::Baseline => "baseline",
            ConditionTag::HotRoom => "hot_room",
            ConditionTag::WaterBottle => "water_bottle",
            ConditionTag::Duvet0min => "duvet_0",
            ConditionTag::Duvet5min => "duvet_5",
            ConditionTag::Duvet10min => "duvet_10",
        }
    }

    /// Minutes under the duvet, for the duvet tags.
    pub fn duvet_minutes(self) -> Option<f64> {
        match self {
            ConditionTag::Duvet0min => Some(0.0),
            ConditionTag::Duvet5min => Some(5.0),
            ConditionTag::Duvet10min => Some(10.0),
            _ => None,
        }
    }
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ConditionTag::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown condition `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledSample {
    pub frame: ThermalFrame,
    pub label: Label,
    pub condition: ConditionTag,
}

impl LabeledSample {
    pub fn new(frame: ThermalFrame, label: Label, condition: ConditionTag) -> Self {
        Self {
            frame,
            label,
            condition,
        }
    }

    pub fn features(&self) -> &[f64; PIXELS] {
        self.frame.pixels()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub samples: Vec<LabeledSample>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, samples: Vec<LabeledSample>) -> Self {
        Self {
            name: name.into(),
            samples,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn features(&self) -> Vec<[f64; PIXELS]> {
        self.samples.iter().map(|s| *s.features()).collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Sample counts indexed by `Label::index`.
    pub fn class_counts(&self) -> [usize; 2] {
        let mut counts = [0; 2];
        for s in &self.samples {
            counts[s.label.index()] += 1;
        }
        counts
    }

    /// Samples at `indices`, in the order given.
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> Dataset {
        Dataset::new(name, indices.iter().map(|&i| self.samples[i]).collect())
    }

    fn class_indices(&self) -> [Vec<usize>; 2] {
        let mut by_class = [Vec::new(), Vec::new()];
        for (i, s) in self.samples.iter().enumerate() {
            by_class[s.label.index()].push(i);
        }
        by_class
    }
}

/// Per-class test size: `round(count × fraction)` with halves rounding up.
pub fn stratified_test_count(class_count: usize, test_fraction: f64) -> usize {
    // The epsilon keeps products such as 5 × 0.1 that land a hair under a
    // true half from rounding down.
    ((class_count as f64 * test_fraction + 0.5 + 1e-9).floor() as usize).min(class_count)
}

/// Stratified random train/test split. Both outputs keep the input order.
pub fn split_train_test(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Parameter(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let mut in_test = vec![false; ds.len()];
    for (class, mut indices) in ds.class_indices().into_iter().enumerate() {
        if indices.is_empty() {
            return Err(Error::Stratification(format!(
                "class {} has no samples",
                Label::ALL[class]
            )));
        }
        let n_test = stratified_test_count(indices.len(), test_fraction);
        indices.shuffle(&mut rng::stream(seed, rng::domain::SPLIT, class as u64));
        for &i in &indices[..n_test] {
            in_test[i] = true;
        }
    }
    let (test, train): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&i| in_test[i]);
    Ok((
        ds.subset(format!("{}-train", ds.name), &train),
        ds.subset(format!("{}-test", ds.name), &test),
    ))
}

/// Fold membership for k-fold cross-validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub num_folds: usize,
    pub assignment: Vec<usize>,
}

impl FoldPlan {
    pub fn new(num_folds: usize, assignment: Vec<usize>) -> Result<Self> {
        if num_folds == 0 {
            return Err(Error::Parameter("a fold plan needs at least one fold".into()));
        }
        if let Some(bad) = assignment.iter().find(|&&f| f >= num_folds) {
            return Err(Error::InvalidInput(format!(
                "fold index {bad} out of range for {num_folds} folds"
            )));
        }
        Ok(Self {
            num_folds,
            assignment,
        })
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] != fold)
            .collect()
    }

    /// Per-fold sample counts for each class, `[fold][label]`.
    pub fn class_counts(&self, ds: &Dataset) -> Vec<[usize; 2]> {
        let mut counts = vec![[0; 2]; self.num_folds];
        for (s, &f) in ds.samples.iter().zip(&self.assignment) {
            counts[f][s.label.index()] += 1;
        }
        counts
    }

    /// Largest spread of any class's count across folds.
    pub fn max_class_imbalance(&self, ds: &Dataset) -> usize {
        let counts = self.class_counts(ds);
        (0..2)
            .map(|c| {
                let per_fold = counts.iter().map(|f| f[c]);
                per_fold.clone().max().unwrap_or(0) - per_fold.min().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    pub fn check_matches(&self, ds: &Dataset) -> Result<()> {
        if self.assignment.len() != ds.len() {
            return Err(Error::InvalidInput(format!(
                "fold plan covers {} samples but dataset has {}",
                self.assignment.len(),
                ds.len()
            )));
        }
        Ok(())
    }
}

/// Stratified k-fold assignment. Each class is shuffled with its own seeded
/// stream and dealt round-robin; the deal continues where the previous
/// class stopped so fold sizes stay balanced overall.
pub fn make_folds(ds: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Parameter(format!("need at least 2 folds, got {k}")));
    }
    let mut assignment = vec![0; ds.len()];
    let mut next = 0;
    for (class, mut indices) in ds.class_indices().into_iter().enumerate() {
        if indices.len() < k {
            return Err(Error::Stratification(format!(
                "class {} has {} samples, fewer than {k} folds",
                Label::ALL[class],
                indices.len()
            )));
        }
        indices.shuffle(&mut rng::stream(seed, rng::domain::FOLDS, class as u64));
        for i in indices {
            assignment[i] = next;
            next = (next + 1) % k;
        }
    }
    FoldPlan::new(k, assignment)
}
