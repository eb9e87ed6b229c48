//! Bed-occupancy classification from 8×8 thermopile frames.
//!
//! The crate covers the whole pipeline: sensor-faithful frames and
//! datasets, a synthetic scene simulator, three classifiers written from
//! scratch (SVM, k-NN, one-hidden-layer network), cross-validation and
//! robustness evaluation, a bed-exit alert monitor, and the text formats
//! used to persist all of it.

pub mod classifiers;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod frame;
pub mod monitor;
pub mod persistence;
pub mod rng;
pub mod simulator;

pub use dataset::{
    make_folds, split_train_test, ConditionTag, Dataset, FoldPlan, Label, LabeledSample,
};
pub use error::{Error, Result};
pub use frame::{flatten, quantize, unflatten, ThermalFrame, GRID, PIXELS};
