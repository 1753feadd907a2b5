//! # qsvm
//!
//! Quantum-kernel support vector machines, simulated classically.
//!
//! Data points are encoded as statevectors by Pauli-rotation feature-map
//! circuits ([`feature_map`]), compared through the state fidelity kernel
//! ([`kernels`]), and classified by a dual SVM with ℓ1/ℓ2 penalties
//! ([`svm`]). A classical RBF kernel is provided as the baseline.
//! [`datasets`] generates and preprocesses benchmark data, and [`bench`]
//! runs the dataset × model accuracy table.
//!
//! ```
//! use qsvm::{FeatureMapSpec, KernelSpec, RegularizationParams, SolverOptions, SvmModel};
//!
//! let points = vec![vec![0.5, 0.5], vec![5.5, 5.5], vec![0.5, 5.5], vec![5.5, 0.5]];
//! let labels = [1.0, 1.0, -1.0, -1.0];
//! let kernel = KernelSpec::Quantum(FeatureMapSpec::new(&["Y"], 1.0).with_depth(1));
//! let reg = RegularizationParams::new(10.0, 0.0, 0.0);
//! let (model, report) =
//!     SvmModel::fit(&points, &labels, &kernel, &reg, &SolverOptions::default()).unwrap();
//! assert!(report.converged);
//! assert_eq!(model.accuracy(&points, &labels).unwrap(), 1.0);
//! ```

pub mod bench;
pub mod cli;
pub mod config;
pub mod datasets;
pub mod error;
pub mod feature_map;
pub mod grid;
pub mod kernels;
pub mod simulator;
pub mod svm;

pub use datasets::{Dataset, PcaTransform, ScaleRecord};
pub use error::{Error, Result};
pub use feature_map::{build_feature_state, DataMap, FeatureMap, FeatureMapSpec};
pub use kernels::{cross_matrix, gram_matrix, GramMatrix, Kernel, KernelSpec, RbfForm};
pub use simulator::{Axis, PauliString, StateVector};
pub use svm::{RegularizationParams, SolverOptions, SvmModel, TrainReport};

/// Accepts `found` when its major component equals that of `expected`.
pub(crate) fn check_format_version(found: &str, expected: &str) -> Result<()> {
    let major = |v: &str| v.split('.').next().and_then(|m| m.parse::<u32>().ok());
    let want = major(expected).expect("static version string");
    match major(found) {
        Some(m) if m == want => Ok(()),
        _ => Err(Error::FormatVersion {
            found: found.to_string(),
            expected: want,
        }),
    }
}
