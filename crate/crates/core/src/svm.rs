//! Regularized dual SVM.
//!
//! The solver maximizes
//!
//! ```text
//! L(β) = (1 − λ₁) Σ β_i − ½ Σ Σ β_i β_j y_i y_j (K_ij + 2λ₂ δ_ij)
//! s.t.   0 ≤ β_i ≤ C,   Σ β_i y_i = 0
//! ```
//!
//! On `β ≥ 0` the ℓ1 penalty is linear and the squared ℓ2 penalty is a
//! diagonal shift, so the ordinary pairwise (SMO) updates apply unchanged.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{GramMatrix, Kernel, KernelSpec};

/// Floor for the curvature of a pair update.
const TAU: f64 = 1e-12;

pub const MODEL_FORMAT_VERSION: &str = "1.0";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularizationParams {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(default)]
    pub lambda1: f64,
    #[serde(default)]
    pub lambda2: f64,
}

impl Default for RegularizationParams {
    fn default() -> Self {
        RegularizationParams {
            c: 1.0,
            lambda1: 0.0,
            lambda2: 0.0,
        }
    }
}

impl RegularizationParams {
    pub fn new(c: f64, lambda1: f64, lambda2: f64) -> Self {
        RegularizationParams { c, lambda1, lambda2 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::Config(format!("C must be positive, got {}", self.c)));
        }
        if !(0.0..1.0).contains(&self.lambda1) {
            return Err(Error::Config(format!(
                "lambda1 must lie in [0, 1), got {}",
                self.lambda1
            )));
        }
        if !(self.lambda2 >= 0.0 && self.lambda2.is_finite()) {
            return Err(Error::Config(format!(
                "lambda2 must be non-negative, got {}",
                self.lambda2
            )));
        }
        Ok(())
    }

    /// Threshold below which a coefficient is treated as zero.
    pub fn sv_threshold(&self) -> f64 {
        1e-8 * self.c
    }

    /// Target margin `y_i f(x_i)` on free support vectors.
    fn margin(&self) -> f64 {
        1.0 - self.lambda1
    }

    fn diag_shift(&self) -> f64 {
        2.0 * self.lambda2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-6,
            max_iter: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub iterations: usize,
    pub final_objective: f64,
    /// Largest gap between the most violating pair at exit.
    pub kkt_violation: f64,
    pub converged: bool,
}

fn check_labels(y: &[f64]) -> Result<()> {
    if let Some(v) = y.iter().find(|v| **v != 1.0 && **v != -1.0) {
        return Err(Error::Argument(format!("label {v} is not ±1")));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(Error::Training("training labels contain a single class".into()));
    }
    Ok(())
}

/// Dual objective (maximization form) of `betas`.
pub fn dual_objective(betas: &[f64], k: &GramMatrix, y: &[f64], reg: &RegularizationParams) -> f64 {
    let shift = reg.diag_shift();
    let m = betas.len();
    let mut quad = 0.0;
    for i in 0..m {
        if betas[i] == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for j in 0..m {
            s += betas[j] * y[j] * k.get(i, j);
        }
        s += shift * betas[i] * y[i];
        quad += betas[i] * y[i] * s;
    }
    reg.margin() * betas.iter().sum::<f64>() - 0.5 * quad
}

/// Solves the regularized dual with maximal-violating-pair SMO.
///
/// Pair selection is deterministic: the largest violation wins and ties go
/// to the lowest index. Hitting `max_iter` is not an error; the report says
/// `converged = false` and the (feasible) iterate is returned.
pub fn solve_dual(
    k: &GramMatrix,
    y: &[f64],
    reg: &RegularizationParams,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, TrainReport)> {
    let m = k.len();
    if y.len() != m {
        return Err(Error::Argument(format!(
            "{} labels for a {m}x{m} kernel matrix",
            y.len()
        )));
    }
    check_labels(y)?;
    reg.validate()?;
    if k.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("kernel matrix has non-finite entries".into()));
    }

    let c = reg.c;
    let p = reg.margin();
    let shift = reg.diag_shift();
    let kt = |i: usize, j: usize| k.get(i, j) + if i == j { shift } else { 0.0 };

    let mut beta = vec![0.0; m];
    // Gradient of the minimization form ½βᵀQβ − p·Σβ, with Q_ij = y_i y_j K̃_ij.
    let mut grad = vec![-p; m];
    let mut iterations = 0;
    let mut gap;
    #[cfg(debug_assertions)]
    let mut last_obj = 0.0_f64;

    loop {
        let (sel_i, sel_j, g_max, g_min) = select_pair(&beta, &grad, y, c);
        gap = g_max - g_min;
        if gap <= tol || iterations >= max_iter {
            break;
        }
        let (i, j) = (sel_i.unwrap(), sel_j.unwrap());
        iterations += 1;

        let old_i = beta[i];
        let old_j = beta[j];
        let kii = kt(i, i);
        let kjj = kt(j, j);
        let kij = kt(i, j);

        if y[i] != y[j] {
            let quad = (kii + kjj - 2.0 * kij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = beta[i] - beta[j];
            beta[i] += delta;
            beta[j] += delta;
            if diff > 0.0 {
                if beta[j] < 0.0 {
                    beta[j] = 0.0;
                    beta[i] = diff;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = -diff;
            }
            if diff > 0.0 {
                if beta[i] > c {
                    beta[i] = c;
                    beta[j] = c - diff;
                }
            } else if beta[j] > c {
                beta[j] = c;
                beta[i] = c + diff;
            }
        } else {
            let quad = (kii + kjj - 2.0 * kij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = beta[i] + beta[j];
            beta[i] -= delta;
            beta[j] += delta;
            if sum > c {
                if beta[i] > c {
                    beta[i] = c;
                    beta[j] = sum - c;
                }
            } else if beta[j] < 0.0 {
                beta[j] = 0.0;
                beta[i] = sum;
            }
            if sum > c {
                if beta[j] > c {
                    beta[j] = c;
                    beta[i] = sum - c;
                }
            } else if beta[i] < 0.0 {
                beta[i] = 0.0;
                beta[j] = sum;
            }
        }

        let di = beta[i] - old_i;
        let dj = beta[j] - old_j;
        for t in 0..m {
            grad[t] += y[t] * (y[i] * kt(t, i) * di + y[j] * kt(t, j) * dj);
        }

        #[cfg(debug_assertions)]
        {
            let obj = objective_from_gradient(&beta, &grad, p);
            debug_assert!(
                obj >= last_obj - 1e-10 * (1.0 + last_obj.abs()),
                "dual objective decreased: {last_obj} -> {obj}"
            );
            last_obj = obj;
        }
    }

    let report = TrainReport {
        iterations,
        final_objective: objective_from_gradient(&beta, &grad, p),
        kkt_violation: gap.max(0.0),
        converged: gap <= tol,
    };
    Ok((beta, report))
}

/// `−(½βᵀQβ − pΣβ) = −½ Σ β_i (G_i − p)`.
fn objective_from_gradient(beta: &[f64], grad: &[f64], p: f64) -> f64 {
    -0.5 * beta.iter().zip(grad).map(|(b, g)| b * (g - p)).sum::<f64>()
}

/// Returns the maximal violating pair and the extreme values of `−y_t G_t`
/// over the "can move up" and "can move down" index sets.
fn select_pair(
    beta: &[f64],
    grad: &[f64],
    y: &[f64],
    c: f64,
) -> (Option<usize>, Option<usize>, f64, f64) {
    let mut g_max = f64::NEG_INFINITY;
    let mut g_min = f64::INFINITY;
    let mut i_sel = None;
    let mut j_sel = None;
    for t in 0..beta.len() {
        let v = -y[t] * grad[t];
        let up = (y[t] > 0.0 && beta[t] < c) || (y[t] < 0.0 && beta[t] > 0.0);
        let low = (y[t] < 0.0 && beta[t] < c) || (y[t] > 0.0 && beta[t] > 0.0);
        if up && v > g_max {
            g_max = v;
            i_sel = Some(t);
        }
        if low && v < g_min {
            g_min = v;
            j_sel = Some(t);
        }
    }
    (i_sel, j_sel, g_max, g_min)
}

/// `Σ_j β_j y_j K̃_ij` for every `i`.
fn kernel_sums(betas: &[f64], k: &GramMatrix, y: &[f64], reg: &RegularizationParams) -> Vec<f64> {
    let shift = reg.diag_shift();
    (0..betas.len())
        .map(|i| {
            let row = k.row(i);
            let s: f64 = row
                .iter()
                .zip(betas.iter().zip(y))
                .map(|(kij, (b, yj))| b * yj * kij)
                .sum();
            s + shift * betas[i] * y[i]
        })
        .collect()
}

/// Offset `b` of the decision function.
///
/// Averages `y_i·(1 − λ₁) − Σ_j β_j y_j K̃_ij` over free support vectors.
/// Without free support vectors, takes the midpoint of the interval of
/// offsets consistent with the bound-constrained points.
pub fn compute_bias(
    betas: &[f64],
    k: &GramMatrix,
    y: &[f64],
    reg: &RegularizationParams,
) -> Result<f64> {
    let eps = reg.sv_threshold();
    let c = reg.c;
    if betas.iter().all(|b| *b <= eps) {
        return Err(Error::Training("no support vectors".into()));
    }
    let sums = kernel_sums(betas, k, y, reg);
    let t = reg.margin();

    let free: Vec<f64> = (0..betas.len())
        .filter(|&i| betas[i] > eps && betas[i] < c - eps)
        .map(|i| y[i] * t - sums[i])
        .collect();
    if !free.is_empty() {
        return Ok(free.iter().sum::<f64>() / free.len() as f64);
    }

    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for i in 0..betas.len() {
        let candidate = y[i] * t - sums[i];
        let at_zero = betas[i] <= eps;
        // β = 0 needs y f ≥ t; β = C needs y f ≤ t.
        if (y[i] > 0.0) == at_zero {
            lower = lower.max(candidate);
        } else {
            upper = upper.min(candidate);
        }
    }
    Ok(match (lower.is_finite(), upper.is_finite()) {
        (true, true) => 0.5 * (lower + upper),
        (true, false) => lower,
        (false, true) => upper,
        (false, false) => 0.0,
    })
}

/// Per-point KKT residual of a solved dual, measured on `y_i f(x_i)` with the
/// shifted kernel. Returns the largest violation.
pub fn kkt_violation(
    betas: &[f64],
    k: &GramMatrix,
    y: &[f64],
    reg: &RegularizationParams,
    bias: f64,
) -> f64 {
    let eps = reg.sv_threshold();
    let t = reg.margin();
    let sums = kernel_sums(betas, k, y, reg);
    let mut worst: f64 = 0.0;
    for i in 0..betas.len() {
        let margin = y[i] * (sums[i] + bias);
        let v = if betas[i] <= eps {
            (t - margin).max(0.0)
        } else if betas[i] >= reg.c - eps {
            (margin - t).max(0.0)
        } else {
            (margin - t).abs()
        };
        worst = worst.max(v);
    }
    worst
}

/// A trained kernel SVM.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub format_version: String,
    pub kernel: KernelSpec,
    pub reg: RegularizationParams,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
    pub betas: Vec<f64>,
    pub bias: f64,
}

impl SvmModel {
    /// Trains on `points` with a freshly computed Gram matrix.
    pub fn fit(
        points: &[Vec<f64>],
        labels: &[f64],
        kernel: &KernelSpec,
        reg: &RegularizationParams,
        opts: &SolverOptions,
    ) -> Result<(SvmModel, TrainReport)> {
        let d = points
            .first()
            .map(|p| p.len())
            .ok_or_else(|| Error::Argument("empty training set".into()))?;
        let gram = Kernel::new(kernel, d)?.gram(points)?;
        Self::fit_with_gram(points, labels, kernel, &gram, reg, opts)
    }

    /// Trains with a precomputed Gram matrix of `points` under `kernel`.
    pub fn fit_with_gram(
        points: &[Vec<f64>],
        labels: &[f64],
        kernel: &KernelSpec,
        gram: &GramMatrix,
        reg: &RegularizationParams,
        opts: &SolverOptions,
    ) -> Result<(SvmModel, TrainReport)> {
        if points.len() != gram.len() || labels.len() != gram.len() {
            return Err(Error::Argument(format!(
                "{} points, {} labels and a {}-row Gram matrix",
                points.len(),
                labels.len(),
                gram.len()
            )));
        }
        let (betas, report) = solve_dual(gram, labels, reg, opts.tol, opts.max_iter)?;
        let bias = compute_bias(&betas, gram, labels, reg)?;
        Ok((
            SvmModel {
                format_version: MODEL_FORMAT_VERSION.to_string(),
                kernel: kernel.clone(),
                reg: *reg,
                points: points.to_vec(),
                labels: labels.to_vec(),
                betas,
                bias,
            },
            report,
        ))
    }

    pub fn n_features(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    pub fn support_indices(&self) -> Vec<usize> {
        let eps = self.reg.sv_threshold();
        (0..self.betas.len()).filter(|&i| self.betas[i] > eps).collect()
    }

    pub fn support_points(&self) -> Vec<Vec<f64>> {
        self.support_indices()
            .into_iter()
            .map(|i| self.points[i].clone())
            .collect()
    }

    fn support_set(&self) -> (Vec<Vec<f64>>, Vec<f64>) {
        let idx = self.support_indices();
        let pts = idx.iter().map(|&i| self.points[i].clone()).collect();
        let w = idx.iter().map(|&i| self.betas[i] * self.labels[i]).collect();
        (pts, w)
    }

    /// `f(x) = Σ β_i y_i K(x_i, x) + b` over support vectors.
    pub fn decision_function(&self, x: &[f64]) -> Result<f64> {
        let (pts, w) = self.support_set();
        if pts.is_empty() {
            return self.check_dim(x).map(|_| self.bias);
        }
        let row = Kernel::new(&self.kernel, self.n_features())?.row(&pts, x)?;
        Ok(dot_sum(&row, &w) + self.bias)
    }

    /// Scores for many points; feature states of support vectors are built once.
    pub fn decision_values(&self, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
        for x in xs {
            self.check_dim(x)?;
        }
        let (pts, w) = self.support_set();
        if pts.is_empty() || xs.is_empty() {
            return Ok(vec![self.bias; xs.len()]);
        }
        let cross = Kernel::new(&self.kernel, self.n_features())?.cross(&pts, xs)?;
        Ok(cross.iter().map(|row| dot_sum(row, &w) + self.bias).collect())
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features() {
            return Err(Error::Argument(format!(
                "point has {} features, model expects {}",
                x.len(),
                self.n_features()
            )));
        }
        Ok(())
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.decision_function(x).map(sign)
    }

    pub fn accuracy(&self, xs: &[Vec<f64>], ys: &[f64]) -> Result<f64> {
        if xs.is_empty() {
            return Err(Error::Argument("accuracy of an empty evaluation set".into()));
        }
        if xs.len() != ys.len() {
            return Err(Error::Argument(format!(
                "{} points but {} labels",
                xs.len(),
                ys.len()
            )));
        }
        let scores = self.decision_values(xs)?;
        let hits = scores
            .iter()
            .zip(ys)
            .filter(|(s, y)| sign(**s) == **y)
            .count();
        Ok(hits as f64 / xs.len() as f64)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<SvmModel> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let version = value
            .get("format_version")
            .and_then(|v| v.as_str())
            .unwrap_or("")
            .to_string();
        crate::check_format_version(&version, MODEL_FORMAT_VERSION)?;
        let model: SvmModel = serde_json::from_value(value)?;
        if model.points.len() != model.betas.len() || model.labels.len() != model.betas.len() {
            return Err(Error::Data("model arrays have inconsistent lengths".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<SvmModel> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn dot_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sign` with `sign(0) = +1`.
pub fn sign(score: f64) -> f64 {
    if score >= 0.0 {
        1.0
    } else {
        -1.0
    }
}
