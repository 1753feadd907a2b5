//! Decision-boundary grids: model scores over a uniform lattice.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::svm::{sign, SvmModel};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub x1: (f64, f64),
    pub x2: (f64, f64),
}

impl Bounds {
    /// Bounding box of `points` (first two coordinates), widened by `pad`
    /// times the extent on every side.
    pub fn padded_bbox(points: &[Vec<f64>], pad: f64) -> Result<Bounds> {
        if points.is_empty() || points.iter().any(|p| p.len() != 2) {
            return Err(Error::Argument("grid bounds need non-empty 2-D points".into()));
        }
        let range = |c: usize| {
            let lo = points.iter().map(|p| p[c]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[c]).fold(f64::NEG_INFINITY, f64::max);
            let mut ext = hi - lo;
            if ext == 0.0 {
                ext = 1.0;
            }
            (lo - pad * ext, hi + pad * ext)
        };
        Ok(Bounds {
            x1: range(0),
            x2: range(1),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub x1: f64,
    pub x2: f64,
    pub score: f64,
    pub label: i8,
}

fn lattice(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i == n - 1 { hi } else { lo + step * i as f64 })
}

/// Scores a `resolution × resolution` lattice (x1 outer, x2 inner).
pub fn evaluate_grid(model: &SvmModel, bounds: &Bounds, resolution: usize) -> Result<Vec<GridRow>> {
    if resolution < 2 {
        return Err(Error::Argument(format!("grid resolution must be >= 2, got {resolution}")));
    }
    for (lo, hi) in [bounds.x1, bounds.x2] {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Argument(format!("grid bounds ({lo}, {hi}) must be finite with lo < hi")));
        }
    }
    if model.n_features() != 2 {
        return Err(Error::Argument(format!(
            "decision grids need a 2-feature model, this one has {}",
            model.n_features()
        )));
    }
    let points: Vec<Vec<f64>> = lattice(bounds.x1.0, bounds.x1.1, resolution)
        .flat_map(|a| lattice(bounds.x2.0, bounds.x2.1, resolution).map(move |b| vec![a, b]))
        .collect();
    let scores = model.decision_values(&points)?;
    Ok(points
        .iter()
        .zip(scores)
        .map(|(p, score)| GridRow {
            x1: p[0],
            x2: p[1],
            score,
            label: sign(score) as i8,
        })
        .collect())
}

/// Writes the grid with header `x1,x2,score,label`.
pub fn write_grid_csv(rows: &[GridRow], path: &Path) -> Result<()> {
    let mut out = String::from("x1,x2,score,label\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.x1, r.x2, r.score, r.label));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelSpec;
    use crate::svm::{RegularizationParams, SolverOptions};

    fn two_point_model() -> SvmModel {
        SvmModel::fit(
            &[vec![2.0, 0.0], vec![0.0, 0.0]],
            &[1.0, -1.0],
            &KernelSpec::Linear,
            &RegularizationParams::new(1e6, 0.0, 0.0),
            &SolverOptions::default(),
        )
        .unwrap()
        .0
    }

    #[test]
    fn two_by_two_hits_corners() {
        let b = Bounds {
            x1: (0.0, 1.0),
            x2: (0.0, 1.0),
        };
        let rows = evaluate_grid(&two_point_model(), &b, 2).unwrap();
        let corners: Vec<(f64, f64)> = rows.iter().map(|r| (r.x1, r.x2)).collect();
        assert_eq!(corners, [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
        for r in &rows {
            assert_eq!(r.label, if r.score >= 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn midpoint_scores_zero() {
        let b = Bounds {
            x1: (0.0, 2.0),
            x2: (-1.0, 1.0),
        };
        let rows = evaluate_grid(&two_point_model(), &b, 3).unwrap();
        let mid = rows.iter().find(|r| r.x1 == 1.0 && r.x2 == 0.0).unwrap();
        assert!(mid.score.abs() < 1e-9);
        assert_eq!(mid.label, 1);
    }

    #[test]
    fn padded_bounds() {
        let b = Bounds::padded_bbox(&[vec![0.0, 1.0], vec![10.0, 3.0]], 0.1).unwrap();
        assert_eq!(b.x1, (-1.0, 11.0));
        assert!((b.x2.0 - 0.8).abs() < 1e-12 && (b.x2.1 - 3.2).abs() < 1e-12);
    }

    #[test]
    fn resolution_guard() {
        let b = Bounds {
            x1: (0.0, 1.0),
            x2: (0.0, 1.0),
        };
        assert!(evaluate_grid(&two_point_model(), &b, 1).is_err());
    }
}
