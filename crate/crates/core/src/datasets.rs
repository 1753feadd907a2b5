//! Benchmark data: generators, CSV ingestion and preprocessing.
//!
//! Preprocessing runs in a fixed order: class subsetting, PCA to two
//! dimensions when there are more features, scaling into `[0, 2π]` with
//! statistics taken from the training portion only, and a stratified split.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_map::{FeatureMap, FeatureMapSpec};

pub const GENERATOR_VERSION: &str = "1.0";

/// Feature matrix with ±1 labels.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub seed: u64,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.x.first().map_or(0, |r| r.len())
    }

    /// `(#positive, #negative)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.y.iter().filter(|v| **v > 0.0).count();
        (pos, self.y.len() - pos)
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            name: self.name.clone(),
            x: idx.iter().map(|&i| self.x[i].clone()).collect(),
            y: idx.iter().map(|&i| self.y[i]).collect(),
            seed: self.seed,
        }
    }

    pub fn with_features(&self, x: Vec<Vec<f64>>) -> Dataset {
        Dataset {
            x,
            ..self.clone()
        }
    }

    /// Writes `f1,...,fd,label` with labels as `-1`/`1`.
    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        let d = self.n_features();
        let mut header: Vec<String> = (1..=d).map(|i| format!("f{i}")).collect();
        header.push("label".into());
        w.write_record(&header).map_err(|e| csv_io(path, e))?;
        for (row, label) in self.x.iter().zip(&self.y) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(format!("{}", *label as i64));
            w.write_record(&rec).map_err(|e| csv_io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e.to_string()))
}

/// Which original class identifiers map to −1 and +1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPair {
    pub negative: String,
    pub positive: String,
}

impl ClassPair {
    pub fn new(negative: impl Into<String>, positive: impl Into<String>) -> Self {
        ClassPair {
            negative: negative.into(),
            positive: positive.into(),
        }
    }
}

/// Reads a dataset CSV (`f1,...,fd,label`).
///
/// With `classes = None` the file must hold exactly two label values; the
/// numerically (or lexically) smaller one becomes −1. With a [`ClassPair`],
/// rows of other classes are dropped first.
pub fn load_csv(path: &Path, classes: Option<&ClassPair>) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(file);
    let parse_err = |row: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        row,
        message,
    };
    let header = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let n_cols = header.len();
    if n_cols < 2 || header.get(n_cols - 1).map(str::trim) != Some("label") {
        return Err(parse_err(1, "header must be f1,...,fd,label".into()));
    }

    let mut x = Vec::new();
    let mut raw_labels = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        // header is line 1
        let row = i + 2;
        let rec = rec.map_err(|e| parse_err(row, e.to_string()))?;
        if rec.len() != n_cols {
            return Err(parse_err(
                row,
                format!("expected {n_cols} columns, found {}", rec.len()),
            ));
        }
        let label = rec[n_cols - 1].trim().to_string();
        if let Some(pair) = classes {
            if label != pair.negative && label != pair.positive {
                continue;
            }
        }
        let features = rec
            .iter()
            .take(n_cols - 1)
            .enumerate()
            .map(|(c, cell)| {
                let v: f64 = cell.trim().parse().map_err(|_| {
                    parse_err(row, format!("column {}: '{cell}' is not a number", c + 1))
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(parse_err(row, format!("column {}: non-finite value", c + 1)))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        x.push(features);
        raw_labels.push(label);
    }

    let pair = match classes {
        Some(p) => p.clone(),
        None => {
            let distinct: BTreeSet<&str> = raw_labels.iter().map(String::as_str).collect();
            if distinct.len() != 2 {
                return Err(Error::Data(format!(
                    "{}: expected exactly 2 classes, found {}",
                    path.display(),
                    distinct.len()
                )));
            }
            let mut v: Vec<&str> = distinct.into_iter().collect();
            v.sort_by(|a, b| match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(p), Ok(q)) => p.total_cmp(&q),
                _ => a.cmp(b),
            });
            ClassPair::new(v[0], v[1])
        }
    };
    let y = raw_labels
        .iter()
        .map(|l| if *l == pair.positive { 1.0 } else { -1.0 })
        .collect();

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Dataset {
        name,
        x,
        y,
        seed: 0,
    })
}

fn check_even(m: usize) -> Result<()> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "sample count must be an even number >= 4, got {m}"
        )));
    }
    Ok(())
}

/// Four Gaussian blobs in an XOR layout inside `[0, 2π]²`.
///
/// Centers sit at `π ± π/2` on each axis; `(+,+)` and `(−,−)` quadrants are
/// class +1. Points are clamped to the square.
pub fn gen_xor(m: usize, noise_sd: f64, seed: u64) -> Result<Dataset> {
    check_even(m)?;
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(Error::Argument(format!("noise_sd must be >= 0, got {noise_sd}")));
    }
    let q = FRAC_PI_2;
    let noise = Normal::new(0.0, noise_sd).map_err(|e| Error::Argument(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    for i in 0..m {
        let label = if i % 2 == 0 { 1.0 } else { -1.0 };
        let flip = if (i / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let (cx, cy) = if label > 0.0 {
            (flip * q, flip * q)
        } else {
            (flip * q, -flip * q)
        };
        let px = (PI + cx + noise.sample(&mut rng)).clamp(0.0, TAU);
        let py = (PI + cy + noise.sample(&mut rng)).clamp(0.0, TAU);
        x.push(vec![px, py]);
        y.push(label);
    }
    Ok(Dataset {
        name: "xor".into(),
        x,
        y,
        seed,
    })
}

/// Parameters for the feature-map-separable generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdhocParams {
    pub gap: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_grid() -> usize {
    100
}

impl Default for AdhocParams {
    fn default() -> Self {
        AdhocParams {
            gap: 0.3,
            grid: default_grid(),
        }
    }
}

/// The labelling feature map of the ad-hoc generator.
pub fn adhoc_feature_map() -> FeatureMapSpec {
    FeatureMapSpec::new(&["Z", "ZZ"], 1.0)
}

/// Haar-random unitary of size `dim` (QR of a complex Gaussian matrix with
/// the phases of `R`'s diagonal divided out).
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    // modified Gram-Schmidt on columns
    for k in 0..dim {
        for j in 0..k {
            let proj: Complex64 = (0..dim).map(|r| cols[j][r].conj() * cols[k][r]).sum();
            for r in 0..dim {
                let v = cols[j][r] * proj;
                cols[k][r] -= v;
            }
        }
        let norm = cols[k].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[k] {
            *v /= norm;
        }
    }
    // row-major matrix U[r][c] = cols[c][r]
    (0..dim)
        .map(|r| (0..dim).map(|c| cols[c][r]).collect())
        .collect()
}

/// `⟨Φ(x)| V† (Z⊗Z) V |Φ(x)⟩` for the ad-hoc labelling circuit.
pub fn adhoc_expectation(map: &FeatureMap, v: &[Vec<Complex64>], x: &[f64]) -> Result<f64> {
    let state = map.state(x)?;
    let amps = state.amplitudes();
    let mut exp = 0.0;
    for (k, row) in v.iter().enumerate() {
        let a: Complex64 = row.iter().zip(amps).map(|(u, s)| u * s).sum();
        let parity = if (k.count_ones() & 1) == 0 { 1.0 } else { -1.0 };
        exp += parity * a.norm_sqr();
    }
    Ok(exp)
}

/// Points on a `grid × grid` lattice over `[0, 2π)²`, labelled by the sign
/// of the ad-hoc expectation and kept only when `|expectation| ≥ gap`.
pub fn gen_adhoc_complex(m: usize, params: &AdhocParams, seed: u64) -> Result<Dataset> {
    check_even(m)?;
    if !(params.gap > 0.0) {
        return Err(Error::Argument(format!("gap must be positive, got {}", params.gap)));
    }
    if params.grid < 2 {
        return Err(Error::Argument("grid resolution must be >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_unitary(4, &mut rng);
    let map = FeatureMap::new(&adhoc_feature_map(), 2)?;
    let step = TAU / params.grid as f64;

    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for a in 0..params.grid {
        for b in 0..params.grid {
            let p = vec![a as f64 * step, b as f64 * step];
            let e = adhoc_expectation(&map, &v, &p)?;
            if e >= params.gap {
                pos.push(p);
            } else if e <= -params.gap {
                neg.push(p);
            }
        }
    }
    let half = m / 2;
    if pos.len() < half || neg.len() < half {
        return Err(Error::Generation(format!(
            "only {} / {} lattice points clear gap {}; use a smaller gap or fewer samples",
            pos.len(),
            neg.len(),
            params.gap
        )));
    }
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut x = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    for (p, n) in pos.into_iter().zip(neg).take(half) {
        x.push(p);
        y.push(1.0);
        x.push(n);
        y.push(-1.0);
    }
    Ok(Dataset {
        name: "adhoc".into(),
        x,
        y,
        seed,
    })
}

/// Keeps an equal number of points per class (the minority count, further
/// capped by `max_per_class`), chosen by a seeded shuffle and kept in
/// original order.
pub fn balance_classes(ds: &Dataset, max_per_class: Option<usize>, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<usize> = (0..ds.len()).filter(|&i| ds.y[i] > 0.0).collect();
    let mut neg: Vec<usize> = (0..ds.len()).filter(|&i| ds.y[i] < 0.0).collect();
    let mut keep = pos.len().min(neg.len());
    if let Some(cap) = max_per_class {
        keep = keep.min(cap);
    }
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut idx: Vec<usize> = pos[..keep].iter().chain(&neg[..keep]).copied().collect();
    idx.sort_unstable();
    ds.subset(&idx)
}

/// Per-feature z-score. Constant features become 0.
pub fn standardize(x: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = x.len();
    let d = x.first().map_or(0, |r| r.len());
    let mean: Vec<f64> = (0..d)
        .map(|c| x.iter().map(|r| r[c]).sum::<f64>() / m as f64)
        .collect();
    let sd: Vec<f64> = (0..d)
        .map(|c| {
            let var = x.iter().map(|r| (r[c] - mean[c]).powi(2)).sum::<f64>() / (m.max(2) - 1) as f64;
            var.sqrt()
        })
        .collect();
    x.iter()
        .map(|r| {
            (0..d)
                .map(|c| if sd[c] > 0.0 { (r[c] - mean[c]) / sd[c] } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Projection onto the top two principal axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcaTransform {
    pub mean: Vec<f64>,
    /// Two orthonormal rows of length `d`.
    pub components: [Vec<f64>; 2],
    /// Sample variance along each component, descending.
    pub explained_variance: [f64; 2],
}

pub fn fit_pca_2d(x: &[Vec<f64>]) -> Result<PcaTransform> {
    let m = x.len();
    let d = x.first().map_or(0, |r| r.len());
    if m < 3 || d < 2 {
        return Err(Error::Argument(format!(
            "PCA needs at least 3 points and 2 features, got {m}x{d}"
        )));
    }
    if x.iter().any(|r| r.len() != d) {
        return Err(Error::Argument("ragged feature matrix".into()));
    }
    let mean: Vec<f64> = (0..d)
        .map(|c| x.iter().map(|r| r[c]).sum::<f64>() / m as f64)
        .collect();
    let centered = DMatrix::from_fn(m, d, |i, j| x[i][j] - mean[j]);
    let cov = (centered.transpose() * &centered) / (m - 1) as f64;
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let top = eig.eigenvalues[order[0]];
    let second = eig.eigenvalues[order[1]];
    if !(top > 0.0) || second <= 1e-12 * top {
        return Err(Error::Degenerate(
            "data has fewer than 2 directions of non-zero variance".into(),
        ));
    }
    let component = |k: usize| -> Vec<f64> {
        let col = eig.eigenvectors.column(order[k]);
        let mut v: Vec<f64> = col.iter().copied().collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        let pivot = v
            .iter()
            .copied()
            .fold(0.0_f64, |best, a| if a.abs() > best.abs() { a } else { best });
        if pivot < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
        v
    };
    Ok(PcaTransform {
        mean,
        components: [component(0), component(1)],
        explained_variance: [top, second],
    })
}

impl PcaTransform {
    /// `(X − mean) · componentsᵀ`.
    pub fn apply(&self, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let d = self.mean.len();
        x.iter()
            .map(|r| {
                if r.len() != d {
                    return Err(Error::Argument(format!(
                        "point has {} features, PCA was fit on {d}",
                        r.len()
                    )));
                }
                Ok(self
                    .components
                    .iter()
                    .map(|c| (0..d).map(|j| (r[j] - self.mean[j]) * c[j]).sum())
                    .collect())
            })
            .collect()
    }
}

pub fn apply_pca(t: &PcaTransform, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    t.apply(x)
}

/// Per-feature min/max used to map training data onto `[0, 2π]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleRecord {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl ScaleRecord {
    pub fn fit(x: &[Vec<f64>]) -> Result<Self> {
        let d = x
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::Argument("cannot scale an empty matrix".into()))?;
        let mut min = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for r in x {
            if r.len() != d {
                return Err(Error::Argument("ragged feature matrix".into()));
            }
            for c in 0..d {
                min[c] = min[c].min(r[c]);
                max[c] = max[c].max(r[c]);
            }
        }
        if let Some(c) = (0..d).find(|&c| !(max[c] > min[c])) {
            return Err(Error::Degenerate(format!("feature {} is constant", c + 1)));
        }
        Ok(ScaleRecord { min, max })
    }

    /// Affine map, no clamping: values outside the fitted range land
    /// outside `[0, 2π]`.
    pub fn apply(&self, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let d = self.min.len();
        x.iter()
            .map(|r| {
                if r.len() != d {
                    return Err(Error::Argument(format!(
                        "point has {} features, scaling was fit on {d}",
                        r.len()
                    )));
                }
                Ok((0..d)
                    .map(|c| TAU * (r[c] - self.min[c]) / (self.max[c] - self.min[c]))
                    .collect())
            })
            .collect()
    }
}

pub fn scale_to_angle_range(x: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, ScaleRecord)> {
    let rec = ScaleRecord::fit(x)?;
    Ok((rec.apply(x)?, rec))
}

/// Row indices of a train/test partition, each ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified split. Each class contributes `round(n_c · test_frac)` test
/// points (at least one, leaving at least one for training).
pub fn split_indices(y: &[f64], test_frac: f64, seed: u64) -> Result<SplitIndices> {
    if !(test_frac > 0.0 && test_frac < 1.0) {
        return Err(Error::Argument(format!(
            "test fraction must lie in (0, 1), got {test_frac}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [1.0, -1.0] {
        let mut idx: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        if idx.len() < 2 {
            return Err(Error::Split(format!(
                "class {class:+} has {} point(s); at least 2 are needed",
                idx.len()
            )));
        }
        let n_test = ((idx.len() as f64 * test_frac).round() as usize).clamp(1, idx.len() - 1);
        idx.shuffle(&mut rng);
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices { train, test })
}

pub fn train_test_split(ds: &Dataset, test_frac: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let s = split_indices(&ds.y, test_frac, seed)?;
    Ok((ds.subset(&s.train), ds.subset(&s.test)))
}
