//! Run configuration documents and the preprocessing pipeline they drive.
//!
//! Configs are TOML with `[dataset]`, `[kernel]`, `[reg]`, `[split]`,
//! `[solver]` and `[output]` sections:
//!
//! ```toml
//! format_version = "1.0"
//!
//! [dataset]
//! source = "xor"        # xor | adhoc | csv
//! m = 200
//! noise_sd = 0.3
//! seed = 7
//!
//! [kernel]
//! kind = "quantum"      # quantum | rbf | linear
//! paulis = ["Y"]
//! alpha = 1.0
//! depth = 2
//! data_map = "product_shifted"
//!
//! [reg]
//! C = 10.0
//! lambda1 = 0.0
//! lambda2 = 0.0
//!
//! [split]
//! test_frac = 0.3
//! seed = 42
//!
//! [output]
//! model = "model.json"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::datasets::{
    self, balance_classes, fit_pca_2d, split_indices, standardize, AdhocParams, ClassPair,
    Dataset, PcaTransform, ScaleRecord, SplitIndices,
};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::svm::{RegularizationParams, SolverOptions};

pub const CONFIG_FORMAT_VERSION: &str = "1.0";

fn default_true() -> bool {
    true
}

fn default_noise() -> f64 {
    0.3
}

fn default_gap() -> f64 {
    0.3
}

fn default_grid() -> usize {
    100
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DatasetSource {
    Xor {
        m: usize,
        #[serde(default = "default_noise")]
        noise_sd: f64,
        seed: u64,
    },
    Adhoc {
        m: usize,
        #[serde(default = "default_gap")]
        gap: f64,
        #[serde(default = "default_grid")]
        grid: usize,
        seed: u64,
    },
    Csv {
        path: PathBuf,
        /// `[negative, positive]` original class identifiers.
        #[serde(default)]
        classes: Option<[String; 2]>,
        #[serde(default)]
        balance: bool,
        #[serde(default)]
        max_per_class: Option<usize>,
        #[serde(default)]
        balance_seed: u64,
        #[serde(default = "default_true")]
        standardize: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    #[serde(flatten)]
    pub source: DatasetSource,
    /// Display name; defaults to the source kind or file stem.
    #[serde(default)]
    pub name: Option<String>,
    /// Map features onto `[0, 2π]` with training-set min/max.
    #[serde(default = "default_true")]
    pub scale: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub test_frac: f64,
    pub seed: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            test_frac: 0.3,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub model: Option<PathBuf>,
}

fn default_version() -> String {
    CONFIG_FORMAT_VERSION.to_string()
}

/// Everything needed to reproduce one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(default = "default_version")]
    pub format_version: String,
    pub dataset: DatasetConfig,
    pub kernel: KernelSpec,
    #[serde(default)]
    pub reg: RegularizationParams,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let value: toml::Table =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(v) = value.get("format_version") {
            let v = v
                .as_str()
                .ok_or_else(|| Error::Config("format_version must be a string".into()))?;
            crate::check_format_version(v, CONFIG_FORMAT_VERSION)?;
        }
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.dataset.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.kernel.validate().map_err(|e| match e {
            Error::Argument(m) => Error::Config(m),
            other => other,
        })?;
        self.reg.validate()?;
        if !(self.split.test_frac > 0.0 && self.split.test_frac < 1.0) {
            return Err(Error::Config(format!(
                "split.test_frac must lie in (0, 1), got {}",
                self.split.test_frac
            )));
        }
        Ok(())
    }
}

impl DatasetConfig {
    pub fn new(source: DatasetSource) -> Self {
        DatasetConfig {
            source,
            name: None,
            scale: true,
        }
    }

    /// Makes a relative CSV path relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let DatasetSource::Csv { path, .. } = &mut self.source {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }

    pub fn display_name(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match &self.source {
            DatasetSource::Xor { .. } => "xor".into(),
            DatasetSource::Adhoc { .. } => "adhoc".into(),
            DatasetSource::Csv { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "csv".into()),
        }
    }

    /// Generates or loads the raw dataset (class subsetting and balancing
    /// included, no feature transforms).
    pub fn load_raw(&self) -> Result<Dataset> {
        let mut ds = match &self.source {
            DatasetSource::Xor { m, noise_sd, seed } => datasets::gen_xor(*m, *noise_sd, *seed)?,
            DatasetSource::Adhoc { m, gap, grid, seed } => datasets::gen_adhoc_complex(
                *m,
                &AdhocParams {
                    gap: *gap,
                    grid: *grid,
                },
                *seed,
            )?,
            DatasetSource::Csv {
                path,
                classes,
                balance,
                max_per_class,
                balance_seed,
                ..
            } => {
                let pair = classes.as_ref().map(|[n, p]| ClassPair::new(n, p));
                let ds = datasets::load_csv(path, pair.as_ref())?;
                if *balance || max_per_class.is_some() {
                    balance_classes(&ds, *max_per_class, *balance_seed)
                } else {
                    ds
                }
            }
        };
        ds.name = self.display_name();
        Ok(ds)
    }
}

/// Output of the preprocessing pipeline.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub train: Dataset,
    pub test: Dataset,
    pub split: SplitIndices,
    pub pca: Option<PcaTransform>,
    pub scale: Option<ScaleRecord>,
}

impl Prepared {
    /// All points, train and test, in original row order.
    pub fn all_points(&self) -> Vec<Vec<f64>> {
        let n = self.split.train.len() + self.split.test.len();
        let mut out = vec![Vec::new(); n];
        for (k, &i) in self.split.train.iter().enumerate() {
            out[i] = self.train.x[k].clone();
        }
        for (k, &i) in self.split.test.iter().enumerate() {
            out[i] = self.test.x[k].clone();
        }
        out
    }
}

/// Subset/balance → PCA (if more than two features) → split → scale with
/// training statistics.
pub fn prepare(dataset: &DatasetConfig, split: &SplitConfig) -> Result<Prepared> {
    let raw = dataset.load_raw()?;
    prepare_dataset(raw, dataset, split)
}

pub fn prepare_dataset(
    mut ds: Dataset,
    dataset: &DatasetConfig,
    split: &SplitConfig,
) -> Result<Prepared> {
    if ds.is_empty() {
        return Err(Error::Data(format!("dataset '{}' is empty", ds.name)));
    }
    let mut pca = None;
    if ds.n_features() > 2 {
        let std = matches!(dataset.source, DatasetSource::Csv { standardize: true, .. });
        let input = if std { standardize(&ds.x) } else { ds.x.clone() };
        let t = fit_pca_2d(&input)?;
        ds.x = t.apply(&input)?;
        pca = Some(t);
    }
    let s = split_indices(&ds.y, split.test_frac, split.seed)?;
    let mut train = ds.subset(&s.train);
    let mut test = ds.subset(&s.test);
    let mut scale = None;
    if dataset.scale {
        let rec = ScaleRecord::fit(&train.x)?;
        train.x = rec.apply(&train.x)?;
        test.x = rec.apply(&test.x)?;
        scale = Some(rec);
    }
    Ok(Prepared {
        train,
        test,
        split: s,
        pca,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const XOR_RUN: &str = r#"
format_version = "1.0"

[dataset]
source = "xor"
m = 60
seed = 7

[kernel]
kind = "quantum"
paulis = ["Y"]
alpha = 1.0

[reg]
C = 10.0

[split]
test_frac = 0.3
seed = 1
"#;

    #[test]
    fn parse_and_round_trip() {
        let cfg = RunConfig::from_toml(XOR_RUN).unwrap();
        assert_eq!(
            cfg.dataset.source,
            DatasetSource::Xor {
                m: 60,
                noise_sd: 0.3,
                seed: 7
            }
        );
        assert_eq!(cfg.reg, RegularizationParams::new(10.0, 0.0, 0.0));
        assert_eq!(cfg.solver, SolverOptions::default());
        let back = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = XOR_RUN.replace("C = 10.0", "C = 10.0\nlambda1 = 1.5");
        assert!(matches!(RunConfig::from_toml(&bad), Err(Error::Config(_))));
        let bad = XOR_RUN.replace("format_version = \"1.0\"", "format_version = \"3.1\"");
        assert!(matches!(
            RunConfig::from_toml(&bad),
            Err(Error::FormatVersion { .. })
        ));
        let bad = XOR_RUN.replace("test_frac = 0.3", "test_frac = 1.3");
        assert!(RunConfig::from_toml(&bad).is_err());
    }

    #[test]
    fn pipeline_scales_with_train_statistics() {
        let cfg = RunConfig::from_toml(XOR_RUN).unwrap();
        let prep = prepare(&cfg.dataset, &cfg.split).unwrap();
        let rec = prep.scale.as_ref().unwrap();
        let raw = cfg.dataset.load_raw().unwrap();
        let train_raw = raw.subset(&prep.split.train);
        assert_eq!(*rec, ScaleRecord::fit(&train_raw.x).unwrap());
        for p in &prep.train.x {
            assert!(p.iter().all(|v| (0.0..=std::f64::consts::TAU).contains(v)));
        }
        assert_eq!(prep.train.len() + prep.test.len(), 60);
    }
}
