use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{cross_validate, CvResult};
use crate::classifiers::{ClassifierSpec, KernelKind, NnHyperParams, SvmParams, Weighting};
use crate::dataset::{Dataset, FoldPlan};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// Linear, polynomial, RBF and sigmoid kernels.
    SvmKernels,
    /// k ∈ {1, 3, 5, 7} × {uniform, distance}.
    KnnGrid,
    /// Hidden widths 1, 2, 4, …, 1024.
    NnWidths,
}

impl SweepFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepFamily::SvmKernels => "svm-kernels",
            SweepFamily::KnnGrid => "knn-grid",
            SweepFamily::NnWidths => "nn-widths",
        }
    }
}

impl fmt::Display for SweepFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "svm-kernels" => Ok(SweepFamily::SvmKernels),
            "knn-grid" => Ok(SweepFamily::KnnGrid),
            "nn-widths" => Ok(SweepFamily::NnWidths),
            other => Err(format!("unknown sweep family `{other}` (svm-kernels|knn-grid|nn-widths)")),
        }
    }
}

/// Settings shared by every cell of a sweep.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepOptions {
    pub svm: SvmParams,
    pub nn_hp: NnHyperParams,
    pub nn_seed: u64,
}

impl SweepFamily {
    pub fn configs(self, opts: &SweepOptions) -> Vec<(String, ClassifierSpec)> {
        match self {
            SweepFamily::SvmKernels => KernelKind::ALL
                .iter()
                .map(|&kernel| {
                    (
                        kernel.to_string(),
                        ClassifierSpec::Svm(SvmParams { kernel, ..opts.svm }),
                    )
                })
                .collect(),
            SweepFamily::KnnGrid => [1, 3, 5, 7]
                .iter()
                .flat_map(|&k| {
                    [Weighting::Uniform, Weighting::Distance]
                        .map(|weighting| (format!("k={k} {weighting}"), ClassifierSpec::Knn { k, weighting }))
                })
                .collect(),
            SweepFamily::NnWidths => (0..=10)
                .map(|p| {
                    let hidden = 1usize << p;
                    (
                        format!("hidden={hidden}"),
                        ClassifierSpec::Nn {
                            hidden,
                            hp: opts.nn_hp,
                            seed: opts.nn_seed,
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub config: String,
    pub result: CvResult,
}

/// Cross-validates every configuration of `family` on the same folds.
pub fn sweep(ds: &Dataset, plan: &FoldPlan, family: SweepFamily, opts: &SweepOptions) -> Result<Vec<SweepRow>> {
    family
        .configs(opts)
        .into_par_iter()
        .map(|(config, spec)| {
            Ok(SweepRow {
                config,
                result: cross_validate(ds, plan, &spec)?,
            })
        })
        .collect()
}
