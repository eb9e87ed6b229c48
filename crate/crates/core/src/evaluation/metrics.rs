//! Confusion counts and the three rates derived from them. Rates are kept
//! as exact integer ratios; a rate whose denominator is zero is
//! `Metric::Undefined` rather than a number.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dataset::Label;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, tn: u64, fn_: u64) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, predicted: Label, truth: Label) {
        match (predicted, truth) {
            (Label::Person, Label::Person) => self.tp += 1,
            (Label::Person, Label::NoPerson) => self.fp += 1,
            (Label::NoPerson, Label::NoPerson) => self.tn += 1,
            (Label::NoPerson, Label::Person) => self.fn_ += 1,
        }
    }
}

impl std::ops::Add for ConfusionCounts {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.tp + o.tp, self.fp + o.fp, self.tn + o.tn, self.fn_ + o.fn_)
    }
}

impl std::iter::Sum for ConfusionCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

pub fn confusion(predicted: &[Label], truth: &[Label]) -> Result<ConfusionCounts> {
    if predicted.len() != truth.len() {
        return Err(Error::InvalidInput(format!(
            "{} predictions for {} ground-truth labels",
            predicted.len(),
            truth.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::InvalidInput("no predictions to count".into()));
    }
    let mut c = ConfusionCounts::default();
    for (&p, &t) in predicted.iter().zip(truth) {
        c.record(p, t);
    }
    Ok(c)
}

/// `numerator / denominator` with `denominator > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub numerator: u64,
    pub denominator: u64,
}

impl Ratio {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Defined(Ratio),
    Undefined,
}

impl Metric {
    fn of(numerator: u64, denominator: u64) -> Self {
        if denominator == 0 {
            Metric::Undefined
        } else {
            Metric::Defined(Ratio {
                numerator,
                denominator,
            })
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Metric::Defined(r) => Some(r.value()),
            Metric::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Metric::Defined(_))
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::Defined(r) => write!(f, "{:.4}", r.value()),
            Metric::Undefined => f.write_str("undefined"),
        }
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

/// `(TP + TN) / total`; an empty count has no accuracy.
pub fn accuracy(c: &ConfusionCounts) -> Result<Ratio> {
    match Metric::of(c.tp + c.tn, c.total()) {
        Metric::Defined(r) => Ok(r),
        Metric::Undefined => Err(Error::InvalidInput("accuracy of zero predictions".into())),
    }
}

/// `TP / (TP + FN)`.
pub fn sensitivity(c: &ConfusionCounts) -> Metric {
    Metric::of(c.tp, c.tp + c.fn_)
}

/// `TN / (TN + FP)`.
pub fn specificity(c: &ConfusionCounts) -> Metric {
    Metric::of(c.tn, c.tn + c.fp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub counts: ConfusionCounts,
    pub accuracy: Metric,
    pub sensitivity: Metric,
    pub specificity: Metric,
}

impl MetricsReport {
    pub fn from_counts(counts: ConfusionCounts) -> Self {
        Self {
            counts,
            accuracy: Metric::of(counts.tp + counts.tn, counts.total()),
            sensitivity: sensitivity(&counts),
            specificity: specificity(&counts),
        }
    }

    pub fn from_predictions(predicted: &[Label], truth: &[Label]) -> Result<Self> {
        Ok(Self::from_counts(confusion(predicted, truth)?))
    }
}

/// Metrics are derived data: the reader recomputes them from the counts
/// and rejects a file whose stored values disagree.
impl<'de> Deserialize<'de> for MetricsReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Stored {
            counts: ConfusionCounts,
            accuracy: Option<f64>,
            sensitivity: Option<f64>,
            specificity: Option<f64>,
        }
        let stored = Stored::deserialize(d)?;
        let report = MetricsReport::from_counts(stored.counts);
        let pairs = [
            ("accuracy", stored.accuracy, report.accuracy),
            ("sensitivity", stored.sensitivity, report.sensitivity),
            ("specificity", stored.specificity, report.specificity),
        ];
        for (name, found, expected) in pairs {
            if found != expected.value() {
                return Err(D::Error::custom(format!(
                    "{name} {found:?} does not match counts (expected {:?})",
                    expected.value()
                )));
            }
        }
        Ok(report)
    }
}
