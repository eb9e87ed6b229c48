//! Soft-margin SVM trained with sequential minimal optimization.
//!
//! The dual problem is
//!
//! ```text
//! min ½ αᵀQα − eᵀα   s.t.  yᵀα = 0,  0 ≤ αᵢ ≤ C,   Qᵢⱼ = yᵢyⱼK(xᵢ, xⱼ)
//! ```
//!
//! Each iteration picks the maximal KKT-violating pair (i, j), solves the
//! two-variable subproblem analytically, and updates the gradient
//! `G = Qα − e`. Training stops once the violation gap
//! `max_{I_up} −yG − min_{I_low} −yG` drops below `tol`.

use super::kernel::{dot, KernelKind, KernelSpec};
use super::{Classifier, FeatureVector, Standardizer};
use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::frame::PIXELS;

/// Label returned when the decision value is exactly zero.
pub const DECISION_TIE: Label = Label::Person;

/// Curvature floor for non-PSD kernels (sigmoid) and duplicate points.
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub kernel: KernelKind,
    pub c: f64,
    pub tol: f64,
    /// Pair updates before giving up.
    pub max_iter: usize,
    /// `None` resolves to `1 / (64 · Var)` over the standardized training
    /// features.
    pub gamma: Option<f64>,
    pub degree: u32,
    pub coef0: f64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            kernel: KernelKind::Linear,
            c: 1.0,
            tol: 1e-3,
            max_iter: 1_000_000,
            gamma: None,
            degree: 3,
            coef0: 0.0,
        }
    }
}

impl SvmParams {
    pub fn with_kernel(kernel: KernelKind) -> Self {
        Self {
            kernel,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub kernel: KernelSpec,
    pub c: f64,
    pub tol: f64,
    pub standardizer: Standardizer,
    /// Standardized support vectors.
    pub support_vectors: Vec<FeatureVector>,
    /// `αᵢ·yᵢ` for each support vector.
    pub dual_coef: Vec<f64>,
    /// Position of each support vector in the training set.
    pub support_indices: Vec<usize>,
    pub bias: f64,
}

fn sign(label: Label) -> f64 {
    match label {
        Label::Person => 1.0,
        Label::NoPerson => -1.0,
    }
}

fn resolve_gamma(params: &SvmParams, z: &[FeatureVector]) -> f64 {
    if let Some(g) = params.gamma {
        return g;
    }
    let n = (z.len() * PIXELS) as f64;
    let mean = z.iter().flatten().sum::<f64>() / n;
    let var = z.iter().flatten().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var > 0.0 {
        1.0 / (PIXELS as f64 * var)
    } else {
        1.0
    }
}

pub fn train_svm(features: &[FeatureVector], labels: &[Label], params: &SvmParams) -> Result<SvmModel> {
    if features.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "{} feature vectors but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if !labels.contains(&Label::Person) || !labels.contains(&Label::NoPerson) {
        return Err(Error::Stratification("SVM training needs both classes".into()));
    }
    if !(params.c > 0.0 && params.c.is_finite()) {
        return Err(Error::Parameter(format!("C must be positive, got {}", params.c)));
    }
    if params.tol.is_nan() || params.tol <= 0.0 {
        return Err(Error::Parameter(format!("tol must be positive, got {}", params.tol)));
    }

    let standardizer = Standardizer::fit(features);
    let z: Vec<FeatureVector> = features.iter().map(|x| standardizer.transform(x)).collect();
    let kernel = KernelSpec {
        kind: params.kernel,
        degree: params.degree,
        gamma: resolve_gamma(params, &z),
        coef0: params.coef0,
    };
    kernel.validate()?;

    let n = z.len();
    let y: Vec<f64> = labels.iter().map(|&l| sign(l)).collect();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = y[i] * y[j] * kernel.apply(&z[i], &z[j]);
            q[i * n + j] = v;
            q[j * n + i] = v;
        }
    }

    let c = params.c;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut converged = false;
    let mut gap = f64::INFINITY;

    for _ in 0..params.max_iter {
        let (mut i, mut up) = (usize::MAX, f64::NEG_INFINITY);
        let (mut j, mut low) = (usize::MAX, f64::INFINITY);
        for t in 0..n {
            let v = -y[t] * grad[t];
            let in_up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
            let in_low = (y[t] < 0.0 && alpha[t] < c) || (y[t] > 0.0 && alpha[t] > 0.0);
            if in_up && v > up {
                up = v;
                i = t;
            }
            if in_low && v < low {
                low = v;
                j = t;
            }
        }
        gap = up - low;
        if i == usize::MAX || j == usize::MAX || gap < params.tol {
            converged = true;
            break;
        }

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let (qii, qjj, qij) = (q[i * n + i], q[j * n + j], q[i * n + j]);
        if y[i] != y[j] {
            let quad = (qii + qjj + 2.0 * qij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (qii + qjj - 2.0 * qij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        let (row_i, row_j) = (&q[i * n..(i + 1) * n], &q[j * n..(j + 1) * n]);
        for t in 0..n {
            grad[t] += row_i[t] * di + row_j[t] * dj;
        }
    }

    if !converged {
        return Err(Error::Training(format!(
            "SMO did not converge within {} iterations; max KKT violation {gap:.3e} (tol {})",
            params.max_iter, params.tol
        )));
    }

    // Offset: average over free vectors, or the midpoint of the feasible
    // interval when every α sits at a bound.
    let (mut upper, mut lower) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free_sum, mut free_count) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            free_sum += yg;
            free_count += 1;
        }
    }
    let rho = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        (upper + lower) / 2.0
    };

    let support_indices: Vec<usize> = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    Ok(SvmModel {
        kernel,
        c,
        tol: params.tol,
        standardizer,
        support_vectors: support_indices.iter().map(|&t| z[t]).collect(),
        dual_coef: support_indices.iter().map(|&t| alpha[t] * y[t]).collect(),
        support_indices,
        bias: -rho,
    })
}

impl SvmModel {
    /// Signed decision value `Σ αᵢyᵢ K(sᵢ, z) + b` for a raw feature vector.
    pub fn decision(&self, x: &FeatureVector) -> f64 {
        let z = self.standardizer.transform(x);
        self.support_vectors
            .iter()
            .zip(&self.dual_coef)
            .map(|(s, a)| a * self.kernel.apply(s, &z))
            .sum::<f64>()
            + self.bias
    }

    /// Training-set multipliers αᵢ, zero for non-support vectors.
    pub fn alphas(&self, n_train: usize) -> Vec<f64> {
        let mut alpha = vec![0.0; n_train];
        for (&i, a) in self.support_indices.iter().zip(&self.dual_coef) {
            alpha[i] = a.abs();
        }
        alpha
    }

    /// `Σ αᵢyᵢ`, zero at any feasible point of the dual.
    pub fn dual_balance(&self) -> f64 {
        self.dual_coef.iter().sum()
    }

    /// Hyperplane `(w, b)` in raw feature space, linear kernel only.
    pub fn linear_weights(&self) -> Option<(Vec<f64>, f64)> {
        if self.kernel.kind != KernelKind::Linear {
            return None;
        }
        let mut w_std = [0.0; PIXELS];
        for (s, a) in self.support_vectors.iter().zip(&self.dual_coef) {
            for (w, v) in w_std.iter_mut().zip(s) {
                *w += a * v;
            }
        }
        let sd = &self.standardizer;
        let w: Vec<f64> = w_std.iter().zip(&sd.scale).map(|(w, s)| w / s).collect();
        let b = self.bias - dot(&w, &sd.mean);
        Some((w, b))
    }
}

impl Classifier for SvmModel {
    fn predict(&self, x: &FeatureVector) -> Label {
        if self.decision(x) >= 0.0 {
            DECISION_TIE
        } else {
            Label::NoPerson
        }
    }
}
