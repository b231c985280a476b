use std::path::PathBuf;

use lowdiam::experiment::{run, run_manifest, Algorithm, DiameterSpec, ExperimentConfig, GraphSource, OutputPaths};
use lowdiam::graph::generate::GeneratorSpec;

fn config(algorithm: Algorithm, dir: &std::path::Path) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(
        GraphSource::Generated {
            generator: GeneratorSpec::Grid,
            nodes: 36,
            seed: 5,
        },
        algorithm,
        DiameterSpec::Value(6.0),
    );
    c.trials = 40;
    c.seed = 99;
    if algorithm == Algorithm::Separator {
        c.epsilon = Some(0.5);
    }
    c.outputs = OutputPaths {
        result: Some(PathBuf::from("result.json")),
        stats: Some(PathBuf::from("stats.csv")),
        manifest: Some(PathBuf::from("manifest.json")),
    };
    c.with_output_dir(dir)
}

#[test]
fn outputs_do_not_depend_on_the_thread_count() {
    for algorithm in [Algorithm::Ldd, Algorithm::Separator, Algorithm::KpathLdd] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let mut one = config(algorithm, a.path());
        one.jobs = Some(1);
        let mut four = config(algorithm, b.path());
        four.jobs = Some(4);
        run(&one).unwrap();
        run(&four).unwrap();
        for name in ["result.json", "stats.csv"] {
            let x = std::fs::read(a.path().join(name)).unwrap();
            let y = std::fs::read(b.path().join(name)).unwrap();
            assert!(x == y, "{} differs for {}", name, algorithm.name());
        }
    }
}

#[test]
fn a_manifest_replays_to_the_same_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let c = config(Algorithm::Ldd, dir.path());
    run(&c).unwrap();
    let first = std::fs::read(dir.path().join("stats.csv")).unwrap();
    let manifest = dir.path().join("manifest.json");
    let outcome = run_manifest(&manifest).unwrap();
    assert_eq!(outcome.manifest.config.seed, 99);
    assert_eq!(std::fs::read(dir.path().join("stats.csv")).unwrap(), first);
}

#[test]
fn the_stats_csv_has_one_row_per_edge() {
    let dir = tempfile::tempdir().unwrap();
    run(&config(Algorithm::Ldd, dir.path())).unwrap();
    let mut reader = csv::Reader::from_path(dir.path().join("stats.csv")).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["edge_id", "u", "v", "length", "cuts", "trials", "rate", "wilson_lo", "wilson_hi"]
    );
    // 6x6 grid: 2 * 6 * 5 edges
    assert_eq!(reader.records().count(), 60);
}
