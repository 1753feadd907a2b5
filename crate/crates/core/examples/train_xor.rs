// Train, save and reload a Pauli-Y model on XOR.
//
// `cargo run --release --example train_xor -- [out_dir]`

use std::path::Path;

use qsvm::config::{prepare, DatasetConfig, DatasetSource, SplitConfig};
use qsvm::{FeatureMapSpec, KernelSpec, RegularizationParams, SolverOptions, SvmModel};

pub fn run(out_dir: &Path) -> qsvm::Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| qsvm::Error::io(out_dir, e))?;
    let data = DatasetConfig::new(DatasetSource::Xor {
        m: 200,
        noise_sd: 0.3,
        seed: 7,
    });
    let prep = prepare(&data, &SplitConfig::default())?;
    let reg = RegularizationParams::new(10.0, 0.0, 0.0);
    let opts = SolverOptions::default();

    for kernel in [
        KernelSpec::Quantum(FeatureMapSpec::new(&["Y"], 1.0).with_depth(1)),
        KernelSpec::rbf(1.0),
    ] {
        let (model, report) = SvmModel::fit(&prep.train.x, &prep.train.y, &kernel, &reg, &opts)?;
        println!(
            "{:>8}: train {:.3}  test {:.3}  support vectors {}  ({} iterations, KKT {:.1e})",
            kernel.label(),
            model.accuracy(&prep.train.x, &prep.train.y)?,
            model.accuracy(&prep.test.x, &prep.test.y)?,
            model.support_indices().len(),
            report.iterations,
            report.kkt_violation
        );
        if matches!(kernel, KernelSpec::Quantum(_)) {
            let path = out_dir.join("xor_pauli_y.json");
            model.save(&path)?;
            let back = SvmModel::load(&path)?;
            assert_eq!(back.decision_values(&prep.test.x)?, model.decision_values(&prep.test.x)?);
            println!("  saved and reloaded {}", path.display());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsvm::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/train_xor".into());
    run(Path::new(&out))
}
