// Decision-boundary grid for a Z+ZZ model on the ad-hoc dataset.
// Writes `grid.csv` and `train.csv` in the same coordinates.
//
// `cargo run --release --example decision_grid -- [out_dir]`

use std::path::Path;

use qsvm::datasets::{gen_adhoc_complex, train_test_split, AdhocParams};
use qsvm::grid::{evaluate_grid, write_grid_csv, Bounds};
use qsvm::{FeatureMapSpec, KernelSpec, RegularizationParams, SolverOptions, SvmModel};

pub fn run(out_dir: &Path, resolution: usize) -> qsvm::Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| qsvm::Error::io(out_dir, e))?;
    let ds = gen_adhoc_complex(120, &AdhocParams::default(), 7)?;
    let (train, test) = train_test_split(&ds, 0.3, 42)?;
    let kernel = KernelSpec::Quantum(FeatureMapSpec::new(&["Z", "ZZ"], 1.0));
    let reg = RegularizationParams::new(10.0, 0.0, 0.0);
    let (model, _) = SvmModel::fit(&train.x, &train.y, &kernel, &reg, &SolverOptions::default())?;
    println!("test accuracy {:.3}", model.accuracy(&test.x, &test.y)?);

    let bounds = Bounds::padded_bbox(&model.points, 0.1)?;
    let rows = evaluate_grid(&model, &bounds, resolution)?;
    let positive = rows.iter().filter(|r| r.label > 0).count();
    println!("{} grid cells, {:.1}% predicted +1", rows.len(), 100.0 * positive as f64 / rows.len() as f64);
    write_grid_csv(&rows, &out_dir.join("grid.csv"))?;
    train.save_csv(&out_dir.join("train.csv"))?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsvm::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/decision_grid".into());
    run(Path::new(&out), 60)
}
