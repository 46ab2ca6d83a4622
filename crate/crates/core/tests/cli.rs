use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use grasspair::random::{random_pair, rng};
use grasspair::substrate::write_matrix;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_grasspair"));
    c.env_remove("GRASSPAIR_SEED");
    c
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write_pair(dir: &Path, n: usize, ks: usize, kt: usize, seed: u64) -> (PathBuf, PathBuf) {
    let pair = random_pair(n, ks, kt, &mut rng(seed));
    let (p, q) = (dir.join("p.json"), dir.join("q.json"));
    write_matrix(&p, &pair.p).unwrap();
    write_matrix(&q, &pair.q).unwrap();
    (p, q)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_equal_ranks_succeeds_with_certificate() {
    let d = scratch("analyze_ok");
    let (p, q) = write_pair(&d, 6, 3, 3, 1);
    let out = bin()
        .args(["analyze", "--p"])
        .arg(&p)
        .arg("--q")
        .arg(&q)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["label"], "Delta_fin(3,3)");
    assert_eq!(v["index"], 0);
    assert!(v["certificate"]["residual_s"].as_f64().unwrap() > 1e-8);
    assert_eq!(v["probe"]["success_fraction"], 1.0);
    for key in ["dims_per_level", "decay", "distances"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn analyze_rank_mismatch_exits_two() {
    let d = scratch("analyze_mismatch");
    let (p, q) = write_pair(&d, 5, 3, 2, 2);
    let report = d.join("report.json");
    let out = bin()
        .args(["analyze", "--p"])
        .arg(&p)
        .arg("--q")
        .arg(&q)
        .arg("--json")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["label"], "Gamma_rank");
    assert!(v["certificate"].is_null());
    assert!(v["reason"].as_str().unwrap().starts_with("rank-mismatch"));
}

#[test]
fn analyze_rejects_bad_input() {
    let d = scratch("analyze_bad");
    let p = d.join("p.json");
    std::fs::write(&p, r#"{"rows":2,"cols":2,"data":[[1,0],[1,0],[0,0],[0,0]]}"#).unwrap();
    let out = bin()
        .args(["analyze", "--p"])
        .arg(&p)
        .arg("--q")
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let missing = d.join("missing.json");
    let out = bin()
        .args(["analyze", "--p"])
        .arg(&missing)
        .arg("--q")
        .arg(&p)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_comes_from_environment_when_set() {
    let d = scratch("seed");
    let (p, q) = write_pair(&d, 4, 2, 2, 3);
    let out = bin()
        .env("GRASSPAIR_SEED", "42")
        .args(["analyze", "--seed", "7", "--p"])
        .arg(&p)
        .arg("--q")
        .arg(&q)
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 42);
    let out = bin()
        .args(["analyze", "--seed", "7", "--p"])
        .arg(&p)
        .arg("--q")
        .arg(&q)
        .output()
        .unwrap();
    assert_eq!(json(&out)["seed"], 7);
}

#[test]
fn geodesic_writes_csv() {
    let d = scratch("geodesic");
    let (p, q) = write_pair(&d, 6, 3, 3, 4);
    let csv = d.join("g.csv");
    let out = bin()
        .args(["geodesic", "--samples", "5", "--p"])
        .arg(&p)
        .arg("--q")
        .arg(&q)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,distance,predicted_distance,idempotency_residual");
    assert_eq!(lines.len(), 6);
    for row in &lines[1..] {
        let f: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[1] - f[2]).abs() < 1e-8);
        assert!(f[3] < 1e-9);
    }
}

#[test]
fn geodesic_rank_mismatch_is_an_error() {
    let d = scratch("geodesic_bad");
    let (p, q) = write_pair(&d, 5, 3, 2, 5);
    let out = bin()
        .args(["geodesic", "--p"])
        .arg(&p)
        .arg("--q")
        .arg(&q)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn example_list_names_every_example() {
    let out = bin().args(["example", "--list"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    for n in grasspair::hardy::EXAMPLE_NAMES {
        assert!(names.contains(&n), "{n}");
    }
}

#[test]
fn example_files_round_trip_through_classify() {
    let d = scratch("roundtrip");
    let out = bin()
        .args([
            "example",
            "--name",
            "codivisible_blaschke",
            "--params",
            r#"{"n":2}"#,
            "--levels",
            "16,32,64",
            "--out",
        ])
        .arg(&d)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(d.join("level_32_q.json").exists());
    let from_files = bin().args(["classify", "--dir"]).arg(&d).output().unwrap();
    assert_eq!(from_files.status.code(), Some(0));
    let v = json(&from_files);
    assert_eq!(v["label"], v["expected"]);
    assert_eq!(v["label"], "Gamma_1(2)");
    let direct = bin()
        .args([
            "classify",
            "--example",
            "codivisible_blaschke",
            "--params",
            r#"{"n":2}"#,
            "--levels",
            "16,32,64",
        ])
        .output()
        .unwrap();
    assert_eq!(json(&direct)["label"], v["label"]);
    assert_eq!(json(&direct)["dims_per_level"], v["dims_per_level"]);
}

#[test]
fn classify_rejects_unknown_example_and_params() {
    let out = bin().args(["classify", "--example", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["classify", "--example", "sarason", "--params", r#"{"bogus":1}"#])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["classify", "--example", "sarason", "--levels", "32"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
