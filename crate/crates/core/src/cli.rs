//! Command-line front end: `gen`, `train`, `grid` and `bench`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data or
//! training error, 3 failed benchmark trend check.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bench::{run_suite, BenchSuite, BENCH_FORMAT_VERSION};
use crate::config::{prepare, DatasetConfig, DatasetSource, OutputConfig, RunConfig, SplitConfig, CONFIG_FORMAT_VERSION};
use crate::datasets::{self, AdhocParams, GENERATOR_VERSION};
use crate::error::{Error, Result};
use crate::feature_map::{DataMap, FeatureMapSpec};
use crate::grid::{evaluate_grid, write_grid_csv, Bounds};
use crate::kernels::{KernelSpec, RbfForm};
use crate::svm::{RegularizationParams, SolverOptions, SvmModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_TREND: i32 = 3;

/// Quantum-kernel SVM toolkit.
#[derive(Debug, Parser)]
#[command(name = "qsvm", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset CSV plus a metadata sidecar.
    Gen(GenArgs),
    /// Train a model on a dataset and report accuracies.
    Train(Box<TrainArgs>),
    /// Evaluate a trained 2-D model over a lattice.
    Grid(GridArgs),
    /// Run a dataset × model benchmark suite.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeneratorKind {
    Xor,
    Adhoc,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long = "type", value_enum)]
    pub kind: GeneratorKind,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// XOR cluster spread.
    #[arg(long, default_value_t = 0.3)]
    pub noise_sd: f64,
    /// Minimum |expectation| for ad-hoc points.
    #[arg(long, default_value_t = 0.3)]
    pub gap: f64,
    /// Ad-hoc lattice resolution per axis.
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long)]
    pub force: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelKind {
    Quantum,
    Rbf,
    Linear,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Run configuration document; replaces the dataset/kernel/reg flags.
    #[arg(long, conflicts_with_all = ["data", "kernel"])]
    pub config: Option<PathBuf>,
    /// Dataset CSV (`f1,...,fd,label`).
    #[arg(long, required_unless_present = "config")]
    pub data: Option<PathBuf>,
    /// Original class ids mapped to -1 and +1, e.g. `0,1`.
    #[arg(long, value_delimiter = ',')]
    pub classes: Option<Vec<String>>,
    #[arg(long, value_enum, required_unless_present = "config")]
    pub kernel: Option<KernelKind>,
    #[arg(long, value_delimiter = ',')]
    pub paulis: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value = "product_shifted")]
    pub data_map: String,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub squared_exponential: bool,
    #[arg(long = "C", alias = "c", default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub l1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub l2: f64,
    #[arg(long, default_value_t = 0.3)]
    pub test_frac: f64,
    #[arg(long, default_value_t = 42)]
    pub split_seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    /// Keep features as-is instead of scaling onto [0, 2π].
    #[arg(long)]
    pub no_scale: bool,
    /// Model output path (config and split sidecars are written beside it).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Treat solver non-convergence as an error.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub resolution: usize,
    /// `x1_min,x1_max,x2_min,x2_max`; defaults to the padded data box.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub bounds: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.1)]
    pub pad: f64,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub suite: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Fill the runtime_s column (makes reruns differ byte-wise).
    #[arg(long)]
    pub record_runtime: bool,
    #[arg(long)]
    pub force: bool,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Train(a) => cmd_train(&a, out),
        Command::Grid(a) => cmd_grid(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Argument(_) | Error::FormatVersion { .. } | Error::UnsupportedTerm(_) => {
            EXIT_USAGE
        }
        _ => EXIT_DATA,
    }
}

fn refuse_overwrite(path: &Path, force: bool) -> Result<()> {
    if path.exists() && !force {
        return Err(Error::Config(format!(
            "{} exists; pass --force to overwrite",
            path.display()
        )));
    }
    Ok(())
}

/// `<path without extension>.<suffix>`
pub fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    refuse_overwrite(&a.out, a.force)?;
    let (ds, params) = match a.kind {
        GeneratorKind::Xor => (
            datasets::gen_xor(a.m, a.noise_sd, a.seed)?,
            json!({ "m": a.m, "noise_sd": a.noise_sd }),
        ),
        GeneratorKind::Adhoc => (
            datasets::gen_adhoc_complex(
                a.m,
                &AdhocParams {
                    gap: a.gap,
                    grid: a.grid,
                },
                a.seed,
            )?,
            json!({ "m": a.m, "gap": a.gap, "grid": a.grid }),
        ),
    };
    ds.save_csv(&a.out)?;
    let meta = json!({
        "format_version": GENERATOR_VERSION,
        "generator": ds.name,
        "generator_version": GENERATOR_VERSION,
        "seed": a.seed,
        "params": params,
    });
    let meta_path = sidecar(&a.out, "meta.json");
    write_json(&meta_path, &meta)?;
    let (pos, neg) = ds.class_counts();
    let _ = writeln!(
        out,
        "wrote {} ({} points: {pos} positive, {neg} negative)",
        a.out.display(),
        ds.len()
    );
    Ok(EXIT_OK)
}

fn config_from_flags(a: &TrainArgs) -> Result<RunConfig> {
    let data = a.data.clone().expect("clap enforces --data");
    let path = std::fs::canonicalize(&data).map_err(|e| Error::io(&data, e))?;
    let kernel = match a.kernel.expect("clap enforces --kernel") {
        KernelKind::Quantum => {
            if a.paulis.is_empty() {
                return Err(Error::Config("--kernel quantum needs --paulis".into()));
            }
            KernelSpec::Quantum(FeatureMapSpec {
                paulis: a.paulis.clone(),
                alpha: a.alpha,
                depth: a.depth,
                data_map: a.data_map.parse::<DataMap>()?,
            })
        }
        KernelKind::Rbf => KernelSpec::Rbf {
            h: a.h.ok_or_else(|| Error::Config("--kernel rbf needs --h".into()))?,
            form: if a.squared_exponential {
                RbfForm::SquaredExponential
            } else {
                RbfForm::Norm
            },
        },
        KernelKind::Linear => KernelSpec::Linear,
    };
    let classes = match a.classes.as_deref() {
        None => None,
        Some([neg, pos]) => Some([neg.clone(), pos.clone()]),
        Some(c) => return Err(Error::Config(format!("--classes takes two ids, got {}", c.len()))),
    };
    let cfg = RunConfig {
        format_version: CONFIG_FORMAT_VERSION.to_string(),
        dataset: DatasetConfig {
            source: DatasetSource::Csv {
                path,
                classes,
                balance: false,
                max_per_class: None,
                balance_seed: 0,
                standardize: true,
            },
            name: None,
            scale: !a.no_scale,
        },
        kernel,
        reg: RegularizationParams::new(a.c, a.l1, a.l2),
        split: SplitConfig {
            test_frac: a.test_frac,
            seed: a.split_seed,
        },
        solver: SolverOptions {
            tol: a.tol,
            max_iter: a.max_iter,
        },
        output: OutputConfig {
            model: a.out.clone(),
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Result of `train`, as printed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainSummary {
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub n_support: usize,
    pub report: crate::svm::TrainReport,
}

/// Runs a configured training job. When the config names an output path,
/// writes the model plus `.config.toml`, `.split.json` and `.train.csv`
/// (training points in model space) beside it.
pub fn train_from_config(cfg: &RunConfig, force: bool) -> Result<(SvmModel, TrainSummary)> {
    if let Some(path) = &cfg.output.model {
        refuse_overwrite(path, force)?;
    }
    let prep = prepare(&cfg.dataset, &cfg.split)?;
    let (model, report) =
        SvmModel::fit(&prep.train.x, &prep.train.y, &cfg.kernel, &cfg.reg, &cfg.solver)?;
    let summary = TrainSummary {
        train_accuracy: model.accuracy(&prep.train.x, &prep.train.y)?,
        test_accuracy: model.accuracy(&prep.test.x, &prep.test.y)?,
        n_support: model.support_indices().len(),
        report,
    };
    if let Some(path) = &cfg.output.model {
        model.save(path)?;
        let cfg_path = sidecar(path, "config.toml");
        std::fs::write(&cfg_path, cfg.to_toml()?).map_err(|e| Error::io(&cfg_path, e))?;
        prep.train.save_csv(&sidecar(path, "train.csv"))?;
        write_json(
            &sidecar(path, "split.json"),
            &json!({
                "format_version": CONFIG_FORMAT_VERSION,
                "train": prep.split.train,
                "test": prep.split.test,
                "scale": prep.scale,
            }),
        )?;
    }
    Ok((model, summary))
}

pub fn cmd_train(a: &TrainArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = match &a.config {
        Some(path) => RunConfig::load(path)?,
        None => config_from_flags(a)?,
    };
    if a.out.is_some() {
        cfg.output.model = a.out.clone();
    }
    let (_, s) = train_from_config(&cfg, a.force)?;
    let _ = writeln!(out, "train_accuracy={}", s.train_accuracy);
    let _ = writeln!(out, "test_accuracy={}", s.test_accuracy);
    let _ = writeln!(out, "support_vectors={}", s.n_support);
    let _ = writeln!(out, "iterations={}", s.report.iterations);
    let _ = writeln!(out, "final_objective={}", s.report.final_objective);
    let _ = writeln!(out, "kkt_violation={:e}", s.report.kkt_violation);
    let _ = writeln!(out, "converged={}", s.report.converged);
    if !s.report.converged && a.strict {
        return Err(Error::Training(format!(
            "solver stopped after {} iterations with KKT gap {:e}",
            s.report.iterations, s.report.kkt_violation
        )));
    }
    Ok(EXIT_OK)
}

pub fn cmd_grid(a: &GridArgs, out: &mut dyn Write) -> Result<i32> {
    refuse_overwrite(&a.out, a.force)?;
    let model = SvmModel::load(&a.model)?;
    let bounds = match &a.bounds {
        Some(b) if b.len() == 4 => Bounds {
            x1: (b[0], b[1]),
            x2: (b[2], b[3]),
        },
        Some(b) => {
            return Err(Error::Config(format!(
                "--bounds takes x1_min,x1_max,x2_min,x2_max; got {} values",
                b.len()
            )))
        }
        None => Bounds::padded_bbox(&model.points, a.pad)?,
    };
    let rows = evaluate_grid(&model, &bounds, a.resolution)?;
    write_grid_csv(&rows, &a.out)?;
    write_json(
        &sidecar(&a.out, "meta.json"),
        &json!({
            "format_version": "1.0",
            "model": a.model,
            "bounds": bounds,
            "resolution": a.resolution,
        }),
    )?;
    let _ = writeln!(out, "wrote {} ({} rows)", a.out.display(), rows.len());
    Ok(EXIT_OK)
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32> {
    refuse_overwrite(&a.out, a.force)?;
    let suite = BenchSuite::load(&a.suite)?;
    let result = run_suite(&suite);
    std::fs::write(&a.out, result.to_csv(a.record_runtime)).map_err(|e| Error::io(&a.out, e))?;
    let trends = result.evaluate_trends(&suite.trends);
    write_json(
        &sidecar(&a.out, "meta.json"),
        &json!({
            "format_version": BENCH_FORMAT_VERSION,
            "suite": a.suite,
            "trends": trends.iter().map(|t| json!({
                "check": t.description,
                "passed": t.passed,
                "detail": t.detail,
            })).collect::<Vec<_>>(),
        }),
    )?;
    for r in &result.rows {
        if let Some(e) = &r.error {
            let _ = writeln!(out, "cell ({}, {}) failed: {e}", r.dataset, r.model);
        }
    }
    let _ = writeln!(out, "wrote {} ({} rows)", a.out.display(), result.rows.len());
    let mut failed = 0;
    for t in &trends {
        let tag = if t.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{tag} {} ({})", t.description, t.detail);
        failed += usize::from(!t.passed);
    }
    let _ = writeln!(out, "trend checks: {} passed, {failed} failed", trends.len() - failed);
    Ok(if failed == 0 { EXIT_OK } else { EXIT_TREND })
}
