//! Kernel functions and Gram matrices.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feature_map::{FeatureMap, FeatureMapSpec};
use crate::simulator::StateVector;

/// Which distance expression the RBF kernel uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RbfForm {
    /// `exp(−‖u − v‖ / h)`
    #[default]
    Norm,
    /// `exp(−‖u − v‖² / 2h²)`
    SquaredExponential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec {
    Quantum(FeatureMapSpec),
    Rbf {
        h: f64,
        #[serde(default)]
        form: RbfForm,
    },
    /// Plain dot product. Used for analytic checks.
    Linear,
}

impl KernelSpec {
    pub fn rbf(h: f64) -> Self {
        KernelSpec::Rbf {
            h,
            form: RbfForm::Norm,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Quantum(fm) => fm.validate(),
            KernelSpec::Rbf { h, .. } if !(*h > 0.0 && h.is_finite()) => {
                Err(Error::Argument(format!("RBF width h must be positive, got {h}")))
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            KernelSpec::Quantum(fm) => format!("Pauli {}", fm.label()),
            KernelSpec::Rbf { .. } => "RBF".to_string(),
            KernelSpec::Linear => "Linear".to_string(),
        }
    }
}

/// `|⟨Φ(x)|Φ(z)⟩|²`.
pub fn quantum_kernel(x: &[f64], z: &[f64], fm: &FeatureMapSpec) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::Argument(format!(
            "points have {} and {} features",
            x.len(),
            z.len()
        )));
    }
    let map = FeatureMap::new(fm, x.len())?;
    fidelity(&map.state(x)?, &map.state(z)?)
}

fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner_product(b)?.norm_sqr())
}

pub fn rbf_kernel(x: &[f64], z: &[f64], h: f64) -> Result<f64> {
    rbf_kernel_with(x, z, h, RbfForm::Norm)
}

pub fn rbf_kernel_with(x: &[f64], z: &[f64], h: f64, form: RbfForm) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Argument(format!("RBF width h must be positive, got {h}")));
    }
    let d2 = squared_distance(x, z)?;
    Ok(match form {
        RbfForm::Norm => (-d2.sqrt() / h).exp(),
        RbfForm::SquaredExponential => (-d2 / (2.0 * h * h)).exp(),
    })
}

fn squared_distance(x: &[f64], z: &[f64]) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::Argument(format!(
            "points have {} and {} features",
            x.len(),
            z.len()
        )));
    }
    Ok(x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum())
}

fn dot(x: &[f64], z: &[f64]) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::Argument(format!(
            "points have {} and {} features",
            x.len(),
            z.len()
        )));
    }
    Ok(x.iter().zip(z).map(|(a, b)| a * b).sum())
}

/// Points prepared for repeated kernel evaluation. For quantum kernels this
/// holds one feature state per point so no state is built twice.
enum Embedded<'a> {
    States(Vec<StateVector>),
    Points(&'a [Vec<f64>]),
}

/// A kernel spec bound to a feature dimension.
#[derive(Clone, Debug)]
pub struct Kernel {
    spec: KernelSpec,
    n_features: usize,
    map: Option<FeatureMap>,
}

impl Kernel {
    pub fn new(spec: &KernelSpec, n_features: usize) -> Result<Self> {
        spec.validate()?;
        let map = match spec {
            KernelSpec::Quantum(fm) => Some(FeatureMap::new(fm, n_features)?),
            _ => None,
        };
        Ok(Kernel {
            spec: spec.clone(),
            n_features,
            map,
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn eval(&self, x: &[f64], z: &[f64]) -> Result<f64> {
        match (&self.spec, &self.map) {
            (KernelSpec::Quantum(_), Some(map)) => fidelity(&map.state(x)?, &map.state(z)?),
            (KernelSpec::Rbf { h, form }, _) => rbf_kernel_with(x, z, *h, *form),
            (KernelSpec::Linear, _) => dot(x, z),
            (KernelSpec::Quantum(_), None) => unreachable!("quantum kernel without a feature map"),
        }
    }

    fn embed<'a>(&self, points: &'a [Vec<f64>]) -> Result<Embedded<'a>> {
        check_dims(points, self.n_features)?;
        Ok(match &self.map {
            Some(map) => Embedded::States(
                points
                    .par_iter()
                    .map(|p| map.state(p))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => Embedded::Points(points),
        })
    }

    fn pair(&self, a: &Embedded<'_>, i: usize, b: &Embedded<'_>, j: usize) -> Result<f64> {
        match (a, b) {
            (Embedded::States(sa), Embedded::States(sb)) => fidelity(&sa[i], &sb[j]),
            (Embedded::Points(pa), Embedded::Points(pb)) => self.eval(&pa[i], &pb[j]),
            _ => unreachable!("mixed embeddings"),
        }
    }

    pub fn gram(&self, points: &[Vec<f64>]) -> Result<GramMatrix> {
        if points.is_empty() {
            return Err(Error::Argument("Gram matrix of an empty point set".into()));
        }
        let emb = self.embed(points)?;
        let m = points.len();
        let upper: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i| (i..m).map(|j| self.pair(&emb, i, &emb, j)).collect())
            .collect::<Result<_>>()?;
        let mut values = vec![0.0; m * m];
        for (i, row) in upper.iter().enumerate() {
            for (offset, &v) in row.iter().enumerate() {
                let j = i + offset;
                values[i * m + j] = v;
                values[j * m + i] = v;
            }
        }
        Ok(GramMatrix { m, values })
    }

    /// `out[i][j] = K(eval_i, train_j)`.
    pub fn cross(&self, train: &[Vec<f64>], eval: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let et = self.embed(train)?;
        let ee = self.embed(eval)?;
        (0..eval.len())
            .into_par_iter()
            .map(|i| (0..train.len()).map(|j| self.pair(&ee, i, &et, j)).collect())
            .collect()
    }

    /// Row of kernel values against `train` for a single point.
    pub fn row(&self, train: &[Vec<f64>], x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_features {
            return Err(Error::Argument(format!(
                "point has {} features, kernel expects {}",
                x.len(),
                self.n_features
            )));
        }
        match &self.map {
            Some(map) => {
                let sx = map.state(x)?;
                train
                    .iter()
                    .map(|t| fidelity(&map.state(t)?, &sx))
                    .collect()
            }
            None => train.iter().map(|t| self.eval(t, x)).collect(),
        }
    }
}

fn check_dims(points: &[Vec<f64>], d: usize) -> Result<()> {
    match points.iter().position(|p| p.len() != d) {
        Some(i) => Err(Error::Argument(format!(
            "point {i} has {} features, expected {d}",
            points[i].len()
        ))),
        None => Ok(()),
    }
}

fn dimension_of(points: &[Vec<f64>]) -> Result<usize> {
    points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::Argument("empty point set".into()))
}

/// Symmetric kernel matrix over one point set, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    m: usize,
    values: Vec<f64>,
}

impl GramMatrix {
    /// Wraps a row-major `m × m` buffer without checking symmetry.
    pub fn from_row_major(m: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != m * m || m == 0 {
            return Err(Error::Argument(format!(
                "{} values do not form a non-empty {m}x{m} matrix",
                values.len()
            )));
        }
        Ok(GramMatrix { m, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Argument("Gram rows must form a square matrix".into()));
        }
        Self::from_row_major(m, rows.concat())
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// `K + shift · I`.
    pub fn shifted_diagonal(&self, shift: f64) -> GramMatrix {
        let mut values = self.values.clone();
        for i in 0..self.m {
            values[i * self.m + i] += shift;
        }
        GramMatrix { m: self.m, values }
    }

    /// Selects the sub-matrix on `idx × idx`.
    pub fn subset(&self, idx: &[usize]) -> GramMatrix {
        let values = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        GramMatrix {
            m: idx.len(),
            values,
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.m {
            for j in i + 1..self.m {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Writes the matrix as CSV: a `m,<m>` header line, then one row per line.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str(&format!("m,{}\n", self.m));
        for i in 0..self.m {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
    }
}

pub fn gram_matrix(points: &[Vec<f64>], spec: &KernelSpec) -> Result<GramMatrix> {
    Kernel::new(spec, dimension_of(points)?)?.gram(points)
}

/// Gram matrix from independent pairwise kernel calls, rebuilding feature
/// states for every pair. Slow; kept to check the cached path against.
pub fn gram_matrix_uncached(points: &[Vec<f64>], spec: &KernelSpec) -> Result<GramMatrix> {
    let m = points.len();
    let d = dimension_of(points)?;
    check_dims(points, d)?;
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let v = match spec {
                KernelSpec::Quantum(fm) => quantum_kernel(&points[i], &points[j], fm)?,
                other => Kernel::new(other, d)?.eval(&points[i], &points[j])?,
            };
            values[i * m + j] = v;
            values[j * m + i] = v;
        }
    }
    Ok(GramMatrix { m, values })
}

pub fn cross_matrix(
    train: &[Vec<f64>],
    eval: &[Vec<f64>],
    spec: &KernelSpec,
) -> Result<Vec<Vec<f64>>> {
    Kernel::new(spec, dimension_of(train)?)?.cross(train, eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn rbf_values() {
        assert_eq!(rbf_kernel(&[1.0, 2.0], &[1.0, 2.0], 0.3).unwrap(), 1.0);
        assert!((rbf_kernel(&[0.0, 0.0], &[0.0, 0.7], 0.7).unwrap() - 1.0 / E).abs() < 1e-15);
        assert!((rbf_kernel(&[0.0, 0.0], &[3.0, 4.0], 5.0).unwrap() - 1.0 / E).abs() < 1e-15);
        let sq = rbf_kernel_with(&[0.0], &[2.0], 2.0, RbfForm::SquaredExponential).unwrap();
        assert!((sq - (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rbf_rejects_non_positive_width() {
        assert!(matches!(rbf_kernel(&[0.0], &[1.0], 0.0), Err(Error::Argument(_))));
        assert!(matches!(rbf_kernel(&[0.0], &[1.0], -1.0), Err(Error::Argument(_))));
        assert!(KernelSpec::rbf(0.0).validate().is_err());
    }

    #[test]
    fn quantum_kernel_identities() {
        let fm = FeatureMapSpec::new(&["Z", "ZZ"], 2.0);
        let x = [0.5, 1.2];
        assert!((quantum_kernel(&x, &x, &fm).unwrap() - 1.0).abs() < 1e-10);
        let flat = FeatureMapSpec::new(&["Y", "YY"], 0.0);
        assert!((quantum_kernel(&x, &[3.0, 0.1], &flat).unwrap() - 1.0).abs() < 1e-12);
        assert!(quantum_kernel(&x, &[1.0], &fm).is_err());
    }

    #[test]
    fn small_gram_matrices() {
        for spec in [
            KernelSpec::rbf(0.5),
            KernelSpec::Quantum(FeatureMapSpec::new(&["Y", "YY"], 1.0)),
        ] {
            let g = gram_matrix(&[vec![0.3, 0.4]], &spec).unwrap();
            assert_eq!(g.len(), 1);
            assert!((g.get(0, 0) - 1.0).abs() < 1e-12);
            let p = vec![1.1, 2.2];
            let g = gram_matrix(&[p.clone(), p], &spec).unwrap();
            for v in g.as_slice() {
                assert!((v - 1.0).abs() < 1e-12);
            }
        }
        assert!(gram_matrix(&[], &KernelSpec::rbf(1.0)).is_err());
        assert!(gram_matrix(&[vec![1.0], vec![1.0, 2.0]], &KernelSpec::rbf(1.0)).is_err());
    }

    #[test]
    fn kernel_spec_document() {
        let k: KernelSpec =
            toml::from_str("kind = \"quantum\"\npaulis = [\"Y\"]\nalpha = 1.0\n").unwrap();
        assert_eq!(k, KernelSpec::Quantum(FeatureMapSpec::new(&["Y"], 1.0)));
        let k: KernelSpec = toml::from_str("kind = \"rbf\"\nh = 0.5\n").unwrap();
        assert_eq!(k, KernelSpec::rbf(0.5));
    }

    #[test]
    fn cross_matches_gram_on_same_set() {
        let pts = vec![vec![0.1, 0.2], vec![2.0, 5.0], vec![4.4, 1.0]];
        let spec = KernelSpec::Quantum(FeatureMapSpec::new(&["Z", "ZZ"], 1.5));
        let g = gram_matrix(&pts, &spec).unwrap();
        let c = cross_matrix(&pts, &pts, &spec).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((c[i][j] - g.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_csv_export() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let g = gram_matrix(&[vec![0.0], vec![1.0]], &KernelSpec::rbf(1.0)).unwrap();
        g.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "m,2");
        assert_eq!(lines.len(), 3);
        let parsed: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, g.get(0, 1));
    }
}
