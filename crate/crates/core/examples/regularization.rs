// ℓ2 smoothing: tuned λ₂ against λ₂ = 0 on the breast-cancer benchmark
// with a Y+YY map at α = 2, plus a λ₂ sweep.
//
// `cargo run --release --example regularization`

use std::path::Path;

use qsvm::bench::{l2_smoothing_study, BenchSuite, SmoothingReport};
use qsvm::config::prepare;
use qsvm::{gram_matrix, FeatureMapSpec, KernelSpec, RegularizationParams, SvmModel};

/// Uses the dataset, split and tuning grid of the benchmark suite.
pub fn run(suite_path: &Path) -> qsvm::Result<SmoothingReport> {
    let suite = BenchSuite::load(suite_path)?;
    let data = suite
        .datasets
        .iter()
        .find(|d| d.display_name() == "Breast Cancer")
        .ok_or_else(|| qsvm::Error::Config("suite has no Breast Cancer dataset".into()))?;
    let prep = prepare(data, &suite.split)?;
    // depth 1 as in the suite: at depth 2 the single-Y rotations cancel
    let fm = FeatureMapSpec::new(&["Y", "YY"], 2.0).with_depth(1);
    let r = l2_smoothing_study(&prep, &fm, &suite.tuning, &suite.solver)?;
    println!("tuned C = {}, λ₂ = {}", r.c, r.lambda2);
    println!("  λ₂ = 0      train {:.3} test {:.3} gap {:+.3}", r.train_unregularized, r.test_unregularized, r.gap_unregularized);
    println!("  λ₂ = tuned  train {:.3} test {:.3} gap {:+.3}", r.train_tuned, r.test_tuned, r.gap_tuned);

    let kernel = KernelSpec::Quantum(fm);
    let gram = gram_matrix(&prep.train.x, &kernel)?;
    println!("λ₂ sweep at C = {}:", r.c);
    for lambda2 in [0.0, 0.01, 0.1, 1.0, 10.0] {
        let reg = RegularizationParams::new(r.c, 0.0, lambda2);
        let (model, _) =
            SvmModel::fit_with_gram(&prep.train.x, &prep.train.y, &kernel, &gram, &reg, &suite.solver)?;
        let norm = model.betas.iter().map(|b| b * b).sum::<f64>().sqrt();
        println!(
            "  λ₂ = {lambda2:<5} ‖β‖₂ = {norm:8.3}  train {:.3}  test {:.3}",
            model.accuracy(&prep.train.x, &prep.train.y)?,
            model.accuracy(&prep.test.x, &prep.test.y)?
        );
    }
    Ok(r)
}

#[allow(dead_code)]
fn main() -> qsvm::Result<()> {
    let suite = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/benchmark.toml");
    run(&suite)?;
    Ok(())
}
