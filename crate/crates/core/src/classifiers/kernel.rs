use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Linear,
    Polynomial,
    Rbf,
    Sigmoid,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [
        KernelKind::Linear,
        KernelKind::Polynomial,
        KernelKind::Rbf,
        KernelKind::Sigmoid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Linear => "linear",
            KernelKind::Polynomial => "poly",
            KernelKind::Rbf => "rbf",
            KernelKind::Sigmoid => "sigmoid",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "linear" => Ok(KernelKind::Linear),
            "poly" | "polynomial" => Ok(KernelKind::Polynomial),
            "rbf" => Ok(KernelKind::Rbf),
            "sigmoid" => Ok(KernelKind::Sigmoid),
            other => Err(format!("unknown kernel `{other}` (linear|poly|rbf|sigmoid)")),
        }
    }
}

/// A fully resolved kernel. `degree` only matters for the polynomial
/// kernel, `coef0` for polynomial and sigmoid, `gamma` for all but linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub degree: u32,
    pub gamma: f64,
    pub coef0: f64,
}

impl KernelSpec {
    pub fn linear() -> Self {
        Self {
            kind: KernelKind::Linear,
            degree: 3,
            gamma: 1.0,
            coef0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() || !self.coef0.is_finite() {
            return Err(Error::Parameter("kernel gamma and coef0 must be finite".into()));
        }
        if self.kind == KernelKind::Rbf && self.gamma <= 0.0 {
            return Err(Error::Parameter(format!("rbf gamma must be > 0, got {}", self.gamma)));
        }
        Ok(())
    }

    /// Kernel value for equal-length vectors; callers guarantee the length.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Linear => dot(x, y),
            KernelKind::Polynomial => (self.gamma * dot(x, y) + self.coef0).powi(self.degree as i32),
            KernelKind::Rbf => (-self.gamma * squared_distance(x, y)).exp(),
            KernelKind::Sigmoid => (self.gamma * dot(x, y) + self.coef0).tanh(),
        }
    }
}

pub fn kernel_eval(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!(
            "kernel arguments differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    Ok(spec.apply(x, y))
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}
