//! Drive a full experiment from a configuration: every enabled suite writes
//! its artifact into one output directory, and the theory/empirical pair can
//! be compared afterwards.

use attrinet::config::{compare, comparison_table_csv, ExperimentConfig};

fn main() -> attrinet::Result<()> {
    let cfg_json = r#"{
        "params": {
            "k": 2,
            "pi": [0.3, 0.7],
            "kappa": [[2.0, 1.0], [1.0, 2.0]],
            "m": [1, 1],
            "gamma": 1.0
        },
        "n": 50000,
        "reps": 20000,
        "c": 0.2,
        "schemes": [
            {"kind": "uniform"},
            {"kind": "degree"},
            {"kind": "pagerank_walk", "c": 0.2}
        ],
        "alpha": 0.01,
        "p": 0.5,
        "seed": 2718,
        "fringe_cap": 3,
        "write_graph": true,
        "toggles": {
            "theory": true,
            "generate": true,
            "pagerank": true,
            "sample": true,
            "fringe": true,
            "bias": true
        }
    }"#;
    let cfg = ExperimentConfig::from_json(cfg_json)?;

    let dir = tempfile::tempdir().expect("temp dir");
    let summary = attrinet::config::run_experiment(&cfg, dir.path())?;
    println!("suites run: {:?}", summary.suites_run);

    let mut names: Vec<_> = std::fs::read_dir(dir.path())
        .expect("read dir")
        .map(|e| e.expect("entry").file_name().into_string().unwrap())
        .collect();
    names.sort();
    println!("artifacts: {names:?}");

    let theory = std::fs::read_to_string(dir.path().join("theory.json"))?;
    let samples = std::fs::read_to_string(dir.path().join("samples.json"))?;
    let rows = compare(&theory, &samples)?;
    println!("\ntheory vs empirical:\n{}", comparison_table_csv(&rows));
    Ok(())
}
