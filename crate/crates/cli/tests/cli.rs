use std::fs;

use assert_cmd::Command;
use predicates::prelude::*;

fn fracdiff() -> Command {
    Command::cargo_bin("fracdiff").unwrap()
}

const POINT_SOURCE: &str = "alpha = 2.0\ntheta = 0.0\nk_alpha = 1.0\ndomain = [-10.0, 10.0]\n\
n_cells = 200\ninitial = \"delta\"\nbc_left = { constant = { value = 0.0 } }\n\
bc_right = { constant = { value = 0.0 } }\nt_end = 1.0\nsnapshots = [0.5]\n";

#[test]
fn weights_match_table_column() {
    let out = fracdiff()
        .args(["weights", "--alpha", "1.5", "--theta", "0", "--kmax", "5"])
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,w"));
    let rows: Vec<(i64, f64)> = lines
        .map(|l| {
            let (k, w) = l.split_once(',').unwrap();
            (k.parse().unwrap(), w.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 11);
    let printed = [-1.498970, 0.574964, 0.125442, 0.020048, 0.009118, 0.005125];
    for (k, w) in rows {
        assert!(
            (w - printed[k.unsigned_abs() as usize]).abs() <= 1e-6,
            "k = {k}: {w}"
        );
    }
}

#[test]
fn negative_skewness_is_accepted() {
    fracdiff()
        .args([
            "weights", "--alpha", "0.9", "--theta", "-0.7", "--kmax", "2",
        ])
        .assert()
        .success();
}

#[test]
fn stability_order_two() {
    fracdiff()
        .args([
            "stability",
            "--alpha",
            "2",
            "--theta",
            "0",
            "--k-alpha",
            "1",
            "--h",
            "0.1",
        ])
        .assert()
        .success()
        .stdout("0.005\n");
}

#[test]
fn usage_errors_exit_two() {
    fracdiff()
        .arg("frobnicate")
        .assert()
        .code(2)
        .stderr(predicate::str::contains("Usage"));
    fracdiff()
        .args(["weights", "--alpha", "1.0", "--kmax", "3"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("alpha"));
    fracdiff()
        .args(["verify", "--suite", "nope"])
        .assert()
        .code(2);
}

#[test]
fn verify_table_suite() {
    fracdiff()
        .args(["verify", "--suite", "table1"])
        .assert()
        .success()
        .stdout(predicate::str::starts_with("[PASS]"));
}

#[test]
fn simulate_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, POINT_SOURCE).unwrap();
    let out = dir.path().join("out");
    fracdiff()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .assert()
        .success();
    for name in [
        "snapshot_0.000000.csv",
        "snapshot_0.500000.csv",
        "snapshot_1.000000.csv",
        "manifest.toml",
        "plot.gp",
    ] {
        assert!(out.join(name).is_file(), "{name}");
    }
    let first = fs::read_to_string(out.join("snapshot_0.000000.csv")).unwrap();
    assert_eq!(first.lines().nth(101), Some("0,10"));
}

#[test]
fn simulate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(
        &cfg,
        POINT_SOURCE.replace("theta = 0.0", "theta = 0.0\ncolour = 1"),
    )
    .unwrap();
    fracdiff()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .assert()
        .code(2)
        .stderr(predicate::str::contains("colour"));
    fracdiff()
        .args(["simulate", "--config"])
        .arg(dir.path().join("absent.toml"))
        .assert()
        .code(1);
}

#[test]
fn converge_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, POINT_SOURCE).unwrap();
    let out = fracdiff()
        .args(["converge", "--levels", "2", "--config"])
        .arg(&cfg)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("n_cells,h,dt,error\n"));
    let errors: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(errors.len(), 3);
    assert!(errors.windows(2).all(|w| w[1] < w[0]));
}
