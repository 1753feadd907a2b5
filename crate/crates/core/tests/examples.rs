use std::path::Path;

mod statevector {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/statevector.rs"));
}
mod feature_map_states {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/feature_map_states.rs"));
}
mod kernel_gram {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kernel_gram.rs"));
}
mod train_xor {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/train_xor.rs"));
}
mod regularization {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/regularization.rs"));
}
mod decision_grid {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/decision_grid.rs"));
}
mod benchmark_suite {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/benchmark_suite.rs"));
}

fn suite() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/benchmark.toml")
}

#[test]
fn statevector_example_runs() {
    statevector::run().unwrap();
}

#[test]
fn feature_map_example_runs() {
    feature_map_states::run().unwrap();
}

#[test]
fn kernel_gram_example_writes_matrices() {
    let dir = tempfile::tempdir().unwrap();
    kernel_gram::run(dir.path()).unwrap();
    for name in ["gram_quantum_y.csv", "gram_quantum_zzz.csv", "gram_rbf.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.starts_with("m,40\n"));
    }
}

#[test]
fn train_xor_example_runs() {
    let dir = tempfile::tempdir().unwrap();
    train_xor::run(dir.path()).unwrap();
    assert!(dir.path().join("xor_pauli_y.json").exists());
}

#[test]
fn regularization_example_runs() {
    let r = regularization::run(&suite()).unwrap();
    assert!(r.gap_tuned.is_finite() && r.gap_unregularized.is_finite());
}

#[test]
fn decision_grid_example_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    decision_grid::run(dir.path(), 10).unwrap();
    let grid = std::fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 101);
    let train = std::fs::read_to_string(dir.path().join("train.csv")).unwrap();
    assert!(train.starts_with("f1,f2,label\n"));
}

#[test]
fn benchmark_example_writes_full_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    benchmark_suite::run(&suite(), &out).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 36);
}
