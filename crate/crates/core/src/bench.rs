//! Dataset × model accuracy benchmark with per-cell hyper-parameter tuning.
//!
//! Each cell prepares its dataset, splits a validation fold off the training
//! portion, picks the kernel parameter (`h` or `alpha`), `C` and `lambda2`
//! with the best validation accuracy (first in grid order on ties), refits
//! on the whole training portion and scores the held-out test portion.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{prepare, DatasetConfig, Prepared, SplitConfig};
use crate::datasets::split_indices;
use crate::error::{Error, Result};
use crate::feature_map::{DataMap, FeatureMapSpec};
use crate::kernels::{GramMatrix, Kernel, KernelSpec, RbfForm};
use crate::svm::{kkt_violation, sign, solve_dual, compute_bias, RegularizationParams, SolverOptions, SvmModel};

pub const BENCH_FORMAT_VERSION: &str = "1.0";
pub const BENCH_CSV_HEADER: &str =
    "dataset,model,params,alpha,test_accuracy,train_accuracy,runtime_s,seed";

fn default_val_frac() -> f64 {
    0.25
}

/// Candidate grids searched on the validation fold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuningGrid {
    #[serde(default = "default_val_frac")]
    pub val_frac: f64,
    #[serde(default)]
    pub seed: u64,
    pub h: Vec<f64>,
    pub alpha: Vec<f64>,
    #[serde(rename = "C")]
    pub c: Vec<f64>,
    pub lambda2: Vec<f64>,
}

impl Default for TuningGrid {
    fn default() -> Self {
        TuningGrid {
            val_frac: default_val_frac(),
            seed: 0,
            h: vec![0.1, 0.5, 1.0, 2.0],
            alpha: vec![0.5, 1.0, 2.0],
            c: vec![1.0, 10.0, 100.0],
            lambda2: vec![0.0, 0.01, 0.1],
        }
    }
}

fn default_depth() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Rbf {
        #[serde(default)]
        form: RbfForm,
    },
    Quantum {
        paulis: Vec<String>,
        #[serde(default = "default_depth")]
        depth: usize,
        #[serde(default)]
        data_map: DataMap,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub name: String,
    #[serde(flatten)]
    pub kind: ModelKind,
    /// Overrides the suite-wide kernel-parameter grid for this model.
    #[serde(default)]
    pub grid: Option<Vec<f64>>,
}

impl ModelConfig {
    fn candidates(&self, tuning: &TuningGrid) -> Vec<(KernelSpec, Option<f64>)> {
        match &self.kind {
            ModelKind::Rbf { form } => self
                .grid
                .as_ref()
                .unwrap_or(&tuning.h)
                .iter()
                .map(|&h| (KernelSpec::Rbf { h, form: *form }, None))
                .collect(),
            ModelKind::Quantum {
                paulis,
                depth,
                data_map,
            } => self
                .grid
                .as_ref()
                .unwrap_or(&tuning.alpha)
                .iter()
                .map(|&alpha| {
                    let fm = FeatureMapSpec {
                        paulis: paulis.clone(),
                        alpha,
                        depth: *depth,
                        data_map: *data_map,
                    };
                    (KernelSpec::Quantum(fm), Some(alpha))
                })
                .collect(),
        }
    }
}

/// A trend assertion over finished cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum TrendCheck {
    AtLeast {
        dataset: String,
        model: String,
        value: f64,
    },
    AtMost {
        dataset: String,
        model: String,
        value: f64,
    },
    /// `model` strictly above `other` on `dataset`.
    Exceeds {
        dataset: String,
        model: String,
        other: String,
    },
    /// `|model − other| ≤ tol` on `dataset`.
    Close {
        dataset: String,
        model: String,
        other: String,
        tol: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSuite {
    #[serde(default = "default_version")]
    pub format_version: String,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub tuning: TuningGrid,
    #[serde(default)]
    pub solver: SolverOptions,
    pub datasets: Vec<DatasetConfig>,
    pub models: Vec<ModelConfig>,
    #[serde(default)]
    pub trends: Vec<TrendCheck>,
}

fn default_version() -> String {
    BENCH_FORMAT_VERSION.to_string()
}

impl BenchSuite {
    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(v) = table.get("format_version").and_then(|v| v.as_str()) {
            crate::check_format_version(v, BENCH_FORMAT_VERSION)?;
        }
        let suite: BenchSuite = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if suite.datasets.is_empty() || suite.models.is_empty() {
            return Err(Error::Config("suite needs at least one dataset and one model".into()));
        }
        if suite.tuning.c.is_empty() || suite.tuning.lambda2.is_empty() {
            return Err(Error::Config("tuning grids for C and lambda2 must be non-empty".into()));
        }
        Ok(suite)
    }

    /// Loads a suite; relative CSV paths resolve against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut suite = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for d in &mut suite.datasets {
            d.resolve_paths(base);
        }
        Ok(suite)
    }
}

/// Hyper-parameters picked for a cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub kernel: KernelSpec,
    pub reg: RegularizationParams,
    pub val_accuracy: f64,
}

/// One (dataset, model) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub dataset: String,
    pub model: String,
    pub params: String,
    pub alpha: Option<f64>,
    pub test_accuracy: Option<f64>,
    pub train_accuracy: Option<f64>,
    pub runtime_s: f64,
    pub seed: u64,
    pub converged: bool,
    pub kkt_violation: f64,
    pub selection: Option<Selection>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub rows: Vec<CellResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrendOutcome {
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

/// Scores of a dual solution on rows `eval` of a Gram matrix whose columns
/// `fit` hold the training points.
fn scores_from_gram(
    gram: &GramMatrix,
    fit: &[usize],
    eval: &[usize],
    betas: &[f64],
    y_fit: &[f64],
    bias: f64,
) -> Vec<f64> {
    eval.iter()
        .map(|&e| {
            fit.iter()
                .enumerate()
                .filter(|(k, _)| betas[*k] != 0.0)
                .map(|(k, &j)| betas[k] * y_fit[k] * gram.get(e, j))
                .sum::<f64>()
                + bias
        })
        .collect()
}

fn accuracy_of(scores: &[f64], y: &[f64]) -> f64 {
    let hits = scores.iter().zip(y).filter(|(s, y)| sign(**s) == **y).count();
    hits as f64 / y.len() as f64
}

/// Validation accuracy of `(C, λ₂)` for a kernel whose train Gram is `gram`.
fn validation_accuracy(
    gram: &GramMatrix,
    y: &[f64],
    fit: &[usize],
    val: &[usize],
    reg: &RegularizationParams,
    solver: &SolverOptions,
) -> Result<f64> {
    let sub = gram.subset(fit);
    let y_fit: Vec<f64> = fit.iter().map(|&i| y[i]).collect();
    let (betas, _) = solve_dual(&sub, &y_fit, reg, solver.tol, solver.max_iter)?;
    let bias = compute_bias(&betas, &sub, &y_fit, reg)?;
    let scores = scores_from_gram(gram, fit, val, &betas, &y_fit, bias);
    let y_val: Vec<f64> = val.iter().map(|&i| y[i]).collect();
    Ok(accuracy_of(&scores, &y_val))
}

/// Searches kernel candidates × `C` × `lambda2` on a validation fold of
/// `prep.train`. Returns the winning selection and its train Gram matrix.
pub fn tune(
    prep: &Prepared,
    candidates: &[(KernelSpec, Option<f64>)],
    c_grid: &[f64],
    lambda2_grid: &[f64],
    tuning: &TuningGrid,
    solver: &SolverOptions,
) -> Result<(Selection, GramMatrix)> {
    let split = split_indices(&prep.train.y, tuning.val_frac, tuning.seed)?;
    let d = prep.train.n_features();
    let mut best: Option<(Selection, GramMatrix)> = None;
    for (spec, _) in candidates {
        let gram = Kernel::new(spec, d)?.gram(&prep.train.x)?;
        for &c in c_grid {
            for &lambda2 in lambda2_grid {
                let reg = RegularizationParams::new(c, 0.0, lambda2);
                let acc =
                    validation_accuracy(&gram, &prep.train.y, &split.train, &split.test, &reg, solver)?;
                if best.as_ref().is_none_or(|(b, _)| acc > b.val_accuracy) {
                    best = Some((
                        Selection {
                            kernel: spec.clone(),
                            reg,
                            val_accuracy: acc,
                        },
                        gram.clone(),
                    ));
                }
            }
        }
    }
    best.ok_or_else(|| Error::Config("empty tuning grid".into()))
}

fn describe(sel: &Selection) -> String {
    let kernel = match &sel.kernel {
        KernelSpec::Rbf { h, .. } => format!("h={h}"),
        KernelSpec::Quantum(fm) => format!("paulis={};depth={}", fm.label(), fm.depth),
        KernelSpec::Linear => "linear".to_string(),
    };
    format!("{kernel};C={};lambda2={}", sel.reg.c, sel.reg.lambda2)
}

/// Tunes, refits and scores one model on prepared data.
pub fn run_cell(
    prep: &Prepared,
    model: &ModelConfig,
    tuning: &TuningGrid,
    solver: &SolverOptions,
) -> Result<(SvmModel, CellOutcome)> {
    let candidates = model.candidates(tuning);
    let (sel, gram) = tune(prep, &candidates, &tuning.c, &tuning.lambda2, tuning, solver)?;
    let (fitted, report) =
        SvmModel::fit_with_gram(&prep.train.x, &prep.train.y, &sel.kernel, &gram, &sel.reg, solver)?;
    let kkt = kkt_violation(&fitted.betas, &gram, &prep.train.y, &sel.reg, fitted.bias);
    let all: Vec<usize> = (0..prep.train.len()).collect();
    let train_scores = scores_from_gram(&gram, &all, &all, &fitted.betas, &prep.train.y, fitted.bias);
    let train_accuracy = accuracy_of(&train_scores, &prep.train.y);
    let test_accuracy = fitted.accuracy(&prep.test.x, &prep.test.y)?;
    Ok((
        fitted,
        CellOutcome {
            selection: sel,
            train_accuracy,
            test_accuracy,
            converged: report.converged,
            kkt_violation: kkt,
        },
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellOutcome {
    pub selection: Selection,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub converged: bool,
    pub kkt_violation: f64,
}

/// Runs every (dataset, model) cell. Cells run in parallel; rows come back
/// in (dataset, model) declaration order. A failing cell is recorded in its
/// row and does not stop the run.
pub fn run_suite(suite: &BenchSuite) -> BenchResult {
    let prepared: Vec<std::result::Result<Prepared, String>> = suite
        .datasets
        .par_iter()
        .map(|d| prepare(d, &suite.split).map_err(|e| e.to_string()))
        .collect();

    let cells: Vec<(usize, usize)> = (0..suite.datasets.len())
        .flat_map(|d| (0..suite.models.len()).map(move |m| (d, m)))
        .collect();

    let rows = cells
        .par_iter()
        .map(|&(di, mi)| {
            let dataset = suite.datasets[di].display_name();
            let model = &suite.models[mi];
            let start = Instant::now();
            let outcome = match &prepared[di] {
                Ok(prep) => run_cell(prep, model, &suite.tuning, &suite.solver)
                    .map(|(_, o)| o)
                    .map_err(|e| e.to_string()),
                Err(e) => Err(e.clone()),
            };
            let runtime_s = start.elapsed().as_secs_f64();
            let mut row = CellResult {
                dataset,
                model: model.name.clone(),
                params: String::new(),
                alpha: None,
                test_accuracy: None,
                train_accuracy: None,
                runtime_s,
                seed: suite.split.seed,
                converged: false,
                kkt_violation: f64::NAN,
                selection: None,
                error: None,
            };
            match outcome {
                Ok(o) => {
                    row.params = describe(&o.selection);
                    row.alpha = match &o.selection.kernel {
                        KernelSpec::Quantum(fm) => Some(fm.alpha),
                        _ => None,
                    };
                    row.test_accuracy = Some(o.test_accuracy);
                    row.train_accuracy = Some(o.train_accuracy);
                    row.converged = o.converged;
                    row.kkt_violation = o.kkt_violation;
                    row.selection = Some(o.selection);
                }
                Err(e) => {
                    row.params = format!("error: {e}");
                    row.error = Some(e);
                }
            }
            row
        })
        .collect();
    BenchResult { rows }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl BenchResult {
    /// Renders the result table. `runtime_s` is left empty unless
    /// `with_runtime`, so reruns are byte-identical.
    pub fn to_csv(&self, with_runtime: bool) -> String {
        let mut out = String::from(BENCH_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let runtime = if with_runtime {
                format!("{:.3}", r.runtime_s)
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                csv_field(&r.dataset),
                csv_field(&r.model),
                csv_field(&r.params),
                opt(r.alpha),
                opt(r.test_accuracy),
                opt(r.train_accuracy),
                runtime,
                r.seed
            );
        }
        out
    }

    pub fn cell(&self, dataset: &str, model: &str) -> Option<&CellResult> {
        self.rows
            .iter()
            .find(|r| r.dataset == dataset && r.model == model)
    }

    fn test_acc(&self, dataset: &str, model: &str) -> std::result::Result<f64, String> {
        let cell = self
            .cell(dataset, model)
            .ok_or_else(|| format!("no cell ({dataset}, {model})"))?;
        cell.test_accuracy
            .ok_or_else(|| format!("cell ({dataset}, {model}) failed: {}", cell.params))
    }

    pub fn evaluate_trends(&self, checks: &[TrendCheck]) -> Vec<TrendOutcome> {
        checks.iter().map(|c| self.evaluate_trend(c)).collect()
    }

    fn evaluate_trend(&self, check: &TrendCheck) -> TrendOutcome {
        let (description, result) = match check {
            TrendCheck::AtLeast { dataset, model, value } => (
                format!("{dataset}: {model} >= {value}"),
                self.test_acc(dataset, model)
                    .map(|a| (a >= *value, format!("{model}={a:.4}"))),
            ),
            TrendCheck::AtMost { dataset, model, value } => (
                format!("{dataset}: {model} <= {value}"),
                self.test_acc(dataset, model)
                    .map(|a| (a <= *value, format!("{model}={a:.4}"))),
            ),
            TrendCheck::Exceeds { dataset, model, other } => (
                format!("{dataset}: {model} > {other}"),
                self.test_acc(dataset, model).and_then(|a| {
                    self.test_acc(dataset, other)
                        .map(|b| (a > b, format!("{model}={a:.4}, {other}={b:.4}")))
                }),
            ),
            TrendCheck::Close { dataset, model, other, tol } => (
                format!("{dataset}: |{model} - {other}| <= {tol}"),
                self.test_acc(dataset, model).and_then(|a| {
                    self.test_acc(dataset, other)
                        .map(|b| ((a - b).abs() <= *tol, format!("{model}={a:.4}, {other}={b:.4}")))
                }),
            ),
        };
        match result {
            Ok((passed, detail)) => TrendOutcome {
                description,
                passed,
                detail,
            },
            Err(detail) => TrendOutcome {
                description,
                passed: false,
                detail,
            },
        }
    }
}

/// Train/test gap with and without the tuned ℓ2 penalty for one feature map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingReport {
    pub c: f64,
    pub lambda2: f64,
    pub gap_tuned: f64,
    pub gap_unregularized: f64,
    pub train_tuned: f64,
    pub test_tuned: f64,
    pub train_unregularized: f64,
    pub test_unregularized: f64,
}

/// Tunes `(C, λ₂)` for a fixed feature map, then compares the train − test
/// accuracy gap of the tuned `λ₂` against `λ₂ = 0` at the same `C`.
pub fn l2_smoothing_study(
    prep: &Prepared,
    fm: &FeatureMapSpec,
    tuning: &TuningGrid,
    solver: &SolverOptions,
) -> Result<SmoothingReport> {
    let spec = KernelSpec::Quantum(fm.clone());
    let (sel, gram) = tune(prep, &[(spec.clone(), Some(fm.alpha))], &tuning.c, &tuning.lambda2, tuning, solver)?;
    let measure = |lambda2: f64| -> Result<(f64, f64)> {
        let reg = RegularizationParams::new(sel.reg.c, 0.0, lambda2);
        let (model, _) = SvmModel::fit_with_gram(&prep.train.x, &prep.train.y, &spec, &gram, &reg, solver)?;
        let all: Vec<usize> = (0..prep.train.len()).collect();
        let s = scores_from_gram(&gram, &all, &all, &model.betas, &prep.train.y, model.bias);
        Ok((accuracy_of(&s, &prep.train.y), model.accuracy(&prep.test.x, &prep.test.y)?))
    };
    let (train_tuned, test_tuned) = measure(sel.reg.lambda2)?;
    let (train_unregularized, test_unregularized) = measure(0.0)?;
    Ok(SmoothingReport {
        c: sel.reg.c,
        lambda2: sel.reg.lambda2,
        gap_tuned: train_tuned - test_tuned,
        gap_unregularized: train_unregularized - test_unregularized,
        train_tuned,
        test_tuned,
        train_unregularized,
        test_unregularized,
    })
}
