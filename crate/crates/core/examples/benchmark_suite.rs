// The five-dataset × seven-model accuracy table.
//
// `cargo run --release --example benchmark_suite -- [suite.toml] [out.csv]`

use std::path::Path;

use qsvm::bench::{run_suite, BenchSuite};

pub fn run(suite_path: &Path, out: &Path) -> qsvm::Result<bool> {
    let suite = BenchSuite::load(suite_path)?;
    let result = run_suite(&suite);
    println!("{:<14} {:<12} {:>6} {:>6}  params", "dataset", "model", "test", "train");
    for r in &result.rows {
        let acc = |a: Option<f64>| a.map_or("-".to_string(), |v| format!("{v:.3}"));
        println!(
            "{:<14} {:<12} {:>6} {:>6}  {}",
            r.dataset,
            r.model,
            acc(r.test_accuracy),
            acc(r.train_accuracy),
            r.params
        );
    }
    if let Some(dir) = out.parent() {
        std::fs::create_dir_all(dir).map_err(|e| qsvm::Error::io(dir, e))?;
    }
    std::fs::write(out, result.to_csv(false)).map_err(|e| qsvm::Error::io(out, e))?;
    let mut all = true;
    for t in result.evaluate_trends(&suite.trends) {
        println!("{} {} ({})", if t.passed { "PASS" } else { "FAIL" }, t.description, t.detail);
        all &= t.passed;
    }
    Ok(all)
}

#[allow(dead_code)]
fn main() -> qsvm::Result<()> {
    let mut args = std::env::args().skip(1);
    let default_suite = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/benchmark.toml");
    let suite = args.next().map(Into::into).unwrap_or(default_suite);
    let out = args.next().unwrap_or_else(|| "out/benchmark.csv".into());
    run(&suite, Path::new(&out))?;
    Ok(())
}
