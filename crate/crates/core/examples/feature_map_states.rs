// Expanding a Pauli feature map and embedding points.
//
// `cargo run --example feature_map_states`

use qsvm::feature_map::expand_terms;
use qsvm::{DataMap, FeatureMap, FeatureMapSpec};

pub fn run() -> qsvm::Result<()> {
    let spec = FeatureMapSpec::new(&["Z", "ZZ"], 1.0);
    let terms = expand_terms(&spec, 3)?;
    println!("{} on 3 features, depth {}:", spec.label(), spec.depth);
    for t in &terms {
        println!("  {} on {:?}", t.pauli, t.subset);
    }

    let x = [0.4, 2.0, 5.1];
    for data_map in [DataMap::ProductShifted, DataMap::PlainProduct] {
        let fm = FeatureMap::new(&spec.clone().with_data_map(data_map), 3)?;
        let psi = fm.state(&x)?;
        let top = psi
            .amplitudes()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(k, a)| (k, a.norm_sqr()))
            .unwrap();
        println!("{data_map:?}: most likely basis state |{:03b}> with p = {:.4}", top.0, top.1);
    }

    // A lone Pauli-Y map cancels itself at depth 2 since H·Y·H = −Y.
    let y2 = FeatureMap::new(&FeatureMapSpec::new(&["Y"], 1.0), 2)?;
    let y1 = FeatureMap::new(&FeatureMapSpec::new(&["Y"], 1.0).with_depth(1), 2)?;
    let a = [1.0, 2.5];
    let b = [4.0, 0.3];
    let fid = |fm: &FeatureMap| -> qsvm::Result<f64> {
        Ok(fm.state(&a)?.inner_product(&fm.state(&b)?)?.norm_sqr())
    };
    println!("Pauli Y fidelity: depth 2 = {:.6}, depth 1 = {:.6}", fid(&y2)?, fid(&y1)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qsvm::Result<()> {
    run()
}
