use std::path::Path;
use std::process::{Command, Output};

fn lowdiam(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowdiam"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generated_path_gives_one_stats_row_per_edge() {
    let dir = tempfile::tempdir().unwrap();
    ok(&lowdiam(dir.path(), &["gen", "--kind", "path", "--n", "64", "-o", "path.txt"]));
    ok(&lowdiam(
        dir.path(),
        &["ldd", "-i", "path.txt", "-D", "8", "--trials", "200", "--stats", "rates.csv", "-o", "out.json"],
    ));
    let csv = std::fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    assert_eq!(csv.lines().count(), 64);
    assert!(csv.starts_with("edge_id,u,v,length,cuts,trials,rate,wilson_lo,wilson_hi"));
}

#[test]
fn separator_with_automatic_diameter_prints_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = lowdiam(dir.path(), &["separator", "--kind", "grid", "--n", "36", "--epsilon", "0.5"]);
    ok(&out);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn reruns_are_byte_identical_and_manifests_replay() {
    let dir = tempfile::tempdir().unwrap();
    let args = |tag: &str| {
        vec![
            "kpath-ldd".to_string(),
            "--kind".into(),
            "grid".into(),
            "--n".into(),
            "36".into(),
            "-D".into(),
            "8".into(),
            "--trials".into(),
            "20".into(),
            "--seed".into(),
            "4".into(),
            "-o".into(),
            format!("{tag}.json"),
            "--stats".into(),
            format!("{tag}.csv"),
            "--manifest".into(),
            format!("{tag}.manifest.json"),
        ]
    };
    for tag in ["a", "b"] {
        let a: Vec<String> = args(tag);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        ok(&lowdiam(dir.path(), &refs));
    }
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a.csv"), read("b.csv"));

    let before = read("a.csv");
    std::fs::remove_file(dir.path().join("a.csv")).unwrap();
    ok(&lowdiam(dir.path(), &["run", "--manifest", "a.manifest.json"]));
    assert_eq!(read("a.csv"), before);
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = lowdiam(dir.path(), &["ldd", "-i", "nope.txt", "-D", "4"]);
    assert_eq!(missing.status.code(), Some(2));
    std::fs::write(dir.path().join("bad.txt"), "0 1 -2\n").unwrap();
    let bad = lowdiam(dir.path(), &["ldd", "-i", "bad.txt", "-D", "4"]);
    assert_eq!(bad.status.code(), Some(2));
    let zero = lowdiam(dir.path(), &["ldd", "--kind", "path", "--n", "8", "-D", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_lowdiam"))
            .current_dir(dir.path())
            .env("LOWDIAM_SEED", seed)
            .args(["ldd", "--kind", "grid", "--n", "25", "-D", "4"])
            .output()
            .unwrap();
        ok(&out);
        out.stdout
    };
    assert_eq!(run("3"), run("3"));
}
