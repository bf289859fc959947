use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn l1lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l1lab")).args(args).output().expect("binary runs")
}

fn run_with(sub: &str, config: &str, extra: &[&str]) -> (TempDir, Output) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("config.json");
    fs::write(&cfg, config).unwrap();
    let out = dir.path().join("out");
    let mut args = vec![sub, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let output = l1lab(&args);
    (dir, output)
}

fn read(dir: &TempDir, file: &str) -> String {
    fs::read_to_string(dir.path().join("out").join(file)).unwrap()
}

fn rows(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    row[header.iter().position(|h| h == name).unwrap()].parse().unwrap()
}

const DISJOINT: &str = r#"{"seed": 7,
    "e": {"kind": "disjoint", "dim": 3, "r": 1.0, "atoms": 3},
    "f": {"kind": "disjoint", "dim": 3, "p": 1.0, "atoms": 3}}"#;

#[test]
fn embed_isometry_case() {
    let (dir, out) = run_with("embed", DISJOINT, &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir, "embed.csv");
    let (header, body) = rows(&csv);
    assert_eq!(
        header.join(","),
        "config_hash,seed,instance,l,t,m1,m2,k1,k2,t_over_l,distortion,k1_certified,k2_certified,s,distortion_ls,passes"
    );
    assert_eq!(body.len(), 8);
    for row in &body {
        assert_eq!(row[1], "7");
        assert_eq!(row[0].len(), 16);
        assert!((field(&header, row, "distortion") - 1.0).abs() <= 1e-9);
        assert!((field(&header, row, "t_over_l") - 1.0).abs() <= 1e-9);
        assert_eq!(row.last().unwrap(), "true");
    }
    let summary = read(&dir, "embed_summary.txt");
    assert!(summary.contains(&format!("config_hash: {}", body[0][0])));
    assert!(summary.contains("seed: 7"));
    assert!(summary.ends_with("result: PASS\n"));
}

#[test]
fn reruns_are_byte_identical() {
    let (a, _) = run_with("embed", DISJOINT, &["--budget", "8"]);
    let (b, _) = run_with("embed", DISJOINT, &["--budget", "8"]);
    assert_eq!(read(&a, "embed.csv"), read(&b, "embed.csv"));
    assert_eq!(read(&a, "embed_summary.txt"), read(&b, "embed_summary.txt"));
}

#[test]
fn seed_flag_overrides_and_changes_hash() {
    let (a, _) = run_with("embed", DISJOINT, &[]);
    let (b, out) = run_with("embed", DISJOINT, &["--seed", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let (ra, rb) = (rows(&read(&a, "embed.csv")).1, rows(&read(&b, "embed.csv")).1);
    assert_eq!(rb[0][1], "8");
    assert_ne!(ra[0][0], rb[0][0]);
}

#[test]
fn usage_errors_exit_with_two() {
    let (_d, out) = run_with("embed", DISJOINT, &["--budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));

    let (_d, out) = run_with("embed", r#"{"e": {"dim": 2}}"#, &[]);
    assert_eq!(out.status.code(), Some(2), "missing seed");

    let (_d, out) = run_with("embed", r#"{"seed": 1, "f": {"p": 2.5}}"#, &[]);
    assert_eq!(out.status.code(), Some(2), "p > 2");

    let (_d, out) = run_with("embed", r#"{"seed": 1, "e": {"r": 2.0}, "f": {"p": 1.5}}"#, &[]);
    assert_eq!(out.status.code(), Some(2), "r > p belongs to remark2");

    let (_d, out) = run_with("remark2", r#"{"seed": 1, "e": {"r": 1.0}, "f": {"p": 1.5}}"#, &[]);
    assert_eq!(out.status.code(), Some(2), "r <= p is the wrong regime");

    let (_d, out) = run_with("sketch", r#"{"seed": 1, "e": {"r": 1.0}}"#, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("s = 2 boundary"));

    assert_ne!(l1lab(&["embed"]).status.code(), Some(0), "missing --config");
}

#[test]
fn failed_growth_check_aborts_with_one() {
    let cfg = r#"{"seed": 1, "e": {"dim": 2, "r": 1.5}, "f": {"dim": 2, "atoms": 1000},
        "orlicz": {"kind": "power", "p": 1.9}}"#;
    let (dir, out) = run_with("sketch", cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    let summary = read(&dir, "sketch_summary.txt");
    assert!(summary.contains("growth check failed"));
    let (_, body) = rows(&read(&dir, "sketch.csv"));
    assert_eq!(body.len(), 1);
    assert_eq!(body[0][2], "growth");
}

#[test]
fn remark2_scalar_case_and_schema() {
    let cfg = r#"{"seed": 3, "e": {"kind": "gaussian", "r": 2.0, "atoms": 1024},
        "f": {"kind": "disjoint", "p": 1.0}, "schedule": [1, 2, 4], "budget": 16}"#;
    let (dir, out) = run_with("remark2", cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let (header, body) = rows(&read(&dir, "remark2.csv"));
    assert_eq!(body.len(), 3);
    assert!((field(&header, &body[0], "distortion") - 1.0).abs() <= 1e-9);
    assert_eq!(body.iter().map(|r| r[2].as_str()).collect::<Vec<_>>(), ["1", "2", "4"]);
}

#[test]
fn norm_estimate_and_density_subcommands() {
    let cfg = r#"{"seed": 2, "norm": {"kind": "lp", "p": 2.0}, "vectors": [[3.0, 4.0], [1.0, 0.0, 0.0]]}"#;
    let (dir, out) = run_with("norm", cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let (header, body) = rows(&read(&dir, "norm.csv"));
    assert_eq!(field(&header, &body[0], "norm"), 5.0);
    assert_eq!(field(&header, &body[1], "norm"), 1.0);

    let cfg = r#"{"seed": 2, "norm": {"kind": "orlicz", "m": {"kind": "power_log", "p": 1.3, "q": 1.0}},
        "mode": {"mode": "concavity", "r": 2.0}, "e": {"dim": 3}, "budget": 8}"#;
    let (dir, out) = run_with("estimate", cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let (header, body) = rows(&read(&dir, "estimate.csv"));
    let samples: Vec<f64> = body.iter().map(|r| field(&header, r, "samples")).collect();
    assert_eq!(samples, [1.0, 2.0, 4.0, 8.0]);
    let values: Vec<f64> = body.iter().map(|r| field(&header, r, "constant")).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));

    let cfg = r#"{"seed": 2, "e": {"r": 1.5}, "f": {"kind": "stable", "dim": 2, "p": 1.8, "atoms": 300},
        "density_iterations": 2}"#;
    let (dir, out) = run_with("density", cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let (header, body) = rows(&read(&dir, "density.csv"));
    assert_eq!(body.len(), 300);
    let mass: f64 = body.iter().map(|r| field(&header, r, "weight") * field(&header, r, "h")).sum();
    assert!((mass - 1.0).abs() < 1e-9);
}

#[test]
fn out_defaults_to_config_entry() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_config");
    let cfg = format!(
        r#"{{"seed": 1, "out": {:?}, "norm": {{"kind": "linf"}}, "vectors": [[-2.0, 1.0]]}}"#,
        target.to_str().unwrap()
    );
    let path = dir.path().join("c.json");
    fs::write(&path, cfg).unwrap();
    let out = l1lab(&["norm", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(Path::new(&target.join("norm.csv")).exists());
}
