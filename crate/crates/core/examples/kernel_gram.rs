// Quantum and RBF Gram matrices on XOR data, exported as CSV.
//
// `cargo run --example kernel_gram -- [out_dir]`

use std::path::Path;

use qsvm::datasets::gen_xor;
use qsvm::{gram_matrix, FeatureMapSpec, KernelSpec};

pub fn run(out_dir: &Path) -> qsvm::Result<()> {
    std::fs::create_dir_all(out_dir).map_err(|e| qsvm::Error::io(out_dir, e))?;
    let ds = gen_xor(40, 0.3, 1)?;
    let kernels = [
        ("quantum_y", KernelSpec::Quantum(FeatureMapSpec::new(&["Y"], 1.0).with_depth(1))),
        ("quantum_zzz", KernelSpec::Quantum(FeatureMapSpec::new(&["Z", "ZZ"], 1.0))),
        ("rbf", KernelSpec::rbf(1.0)),
    ];
    for (name, spec) in &kernels {
        let k = gram_matrix(&ds.x, spec)?;
        // mean kernel value within vs across classes
        let (mut same, mut diff, mut ns, mut nd) = (0.0, 0.0, 0, 0);
        for i in 0..k.len() {
            for j in 0..i {
                if ds.y[i] == ds.y[j] {
                    same += k.get(i, j);
                    ns += 1;
                } else {
                    diff += k.get(i, j);
                    nd += 1;
                }
            }
        }
        println!(
            "{:>11}: same-class {:.3}, cross-class {:.3}, asymmetry {:.1e}",
            spec.label(),
            same / ns as f64,
            diff / nd as f64,
            k.max_asymmetry()
        );
        k.write_csv(&out_dir.join(format!("gram_{name}.csv")))?;
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsvm::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/kernel_gram".into());
    run(Path::new(&out))
}
