//! JSON run reports.
//!
//! A report records which command ran, the tool version, the fully
//! resolved configuration and the command's results. Stored metrics are
//! checked against their confusion counts on load.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::trace::EventRecord;
use super::write_atomic;
use crate::error::{Error, Result};
use crate::evaluation::{ConditionMetrics, CvResult, MetricsReport, SweepRow};

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub format_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub results: ReportBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case", deny_unknown_fields)]
pub enum ReportBody {
    Simulate {
        set: String,
        samples: usize,
        /// Indexed by label: no_person, person.
        class_counts: [usize; 2],
    },
    Split {
        train: usize,
        test: usize,
        train_class_counts: [usize; 2],
        test_class_counts: [usize; 2],
    },
    Cv {
        classifier: String,
        result: CvResult,
    },
    Sweep {
        family: String,
        rows: Vec<SweepRow>,
    },
    Train {
        classifier: String,
        samples: usize,
        training_metrics: MetricsReport,
    },
    Eval {
        metrics: MetricsReport,
        by_condition: Option<Vec<ConditionMetrics>>,
    },
    Predict {
        samples: usize,
        /// Indexed by label: no_person, person.
        predicted_counts: [usize; 2],
    },
    Monitor {
        frames: usize,
        events: Vec<EventRecord>,
    },
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>, results: ReportBody) -> Self {
        Self {
            format_version: REPORT_VERSION,
            tool: "thermal-sense".to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            results,
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report values serialize");
    s.push('\n');
    s
}

pub fn write_report(report: &Report) -> String {
    pretty(report)
}

/// Checks `format_version` before anything else so that a newer file is
/// reported as such rather than as a schema mismatch.
pub fn read_report(text: &str) -> Result<Report> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::format(1, "format_version", "missing or not an integer"))?;
    let found = u32::try_from(found).unwrap_or(u32::MAX);
    if found > REPORT_VERSION {
        return Err(Error::Version {
            kind: "report",
            found,
            supported: REPORT_VERSION,
        });
    }
    if found == 0 {
        return Err(Error::format(1, "format_version", "version 0 does not exist"));
    }
    Ok(serde_json::from_value(value)?)
}

pub fn save_report(report: &Report, path: &Path) -> Result<()> {
    write_atomic(path, write_report(report).as_bytes())
}

pub fn load_report(path: &Path) -> Result<Report> {
    read_report(&std::fs::read_to_string(path)?)
}

pub fn write_metrics(metrics: &MetricsReport) -> String {
    pretty(metrics)
}

pub fn read_metrics(text: &str) -> Result<MetricsReport> {
    Ok(serde_json::from_str(text)?)
}
