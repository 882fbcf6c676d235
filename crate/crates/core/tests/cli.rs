//! End-to-end runs of the `wco` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn wco(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wco"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

/// `(row, col, re, im)` rows of a matrix CSV.
fn csv_rows(text: &str) -> Vec<(usize, usize, f64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("row"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].parse().unwrap(),
                f[1].parse().unwrap(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect()
}

#[test]
fn matrix_linear_symbol_is_diagonal() {
    let o = wco(&[
        "matrix", "--kappa", "1", "--a0", "0", "--a1", "0.5", "--b", "1", "--trunc", "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "row,col,re,im"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 64);
    for (r, c, re, im) in rows {
        let expected = if r == c { 0.5f64.powi(r as i32) } else { 0.0 };
        assert_eq!((re, im), (expected, 0.0), "entry ({r}, {c})");
    }
}

#[test]
fn matrix_z_squared_pattern() {
    let o = wco(&["matrix", "--phi", "z^2", "--psi", "1", "--trunc", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let ones: Vec<(usize, usize)> = csv_rows(&stdout(&o))
        .into_iter()
        .filter(|&(_, _, re, _)| re != 0.0)
        .map(|(r, c, _, _)| (r, c))
        .collect();
    assert_eq!(ones, vec![(0, 0), (2, 1), (4, 2), (6, 3)]);
}

#[test]
fn matrix_default_truncation_noted() {
    let o = wco(&["matrix", "--a1", "0.5"]);
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().starts_with('#'));
    assert!(text.contains("trunc=32 (default)"));
    assert_eq!(csv_rows(&text).len(), 32 * 32);
    assert!(!text.contains('\r'));
}

#[test]
fn output_is_byte_identical_and_file_routed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = wco(&[
            "check",
            "--a0",
            "0.1+0.2i",
            "--a1",
            "0.5-0.1i",
            "--b",
            "1+0.5i",
            "--kappa",
            "2",
            "--json",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["schema"], "wco-report/1");
    assert_eq!(v["symbols"]["a0"], serde_json::json!([0.1, 0.2]));

    let csv = dir.path().join("m.csv");
    let o = wco(&[
        "matrix",
        "--phi",
        "0.5z",
        "--trunc",
        "4",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&std::fs::read_to_string(&csv).unwrap()).len(), 16);
}

#[test]
fn check_examples() {
    let v = json(&wco(&[
        "check", "--a0", "0.3", "--a1", "0.4", "--b", "1", "--kappa", "1",
    ]));
    assert_eq!(
        v["verdicts"],
        serde_json::json!({"complex_symmetric_standard_J": true, "hermitian": true, "normal": true})
    );

    let v = json(&wco(&["check", "--a0", "i/2", "--a1", "1/4", "--b", "1"]));
    assert_eq!(
        v["verdicts"],
        serde_json::json!({"complex_symmetric_standard_J": true, "hermitian": false, "normal": false})
    );
    assert_eq!(v["normality_method"], "kernel-grid");

    let v = json(&wco(&["check", "--phi", "z^2", "--psi", "1"]));
    assert_eq!(v["verdicts"]["complex_symmetric_standard_J"], false);
    assert_eq!(v["transpose_sym_residual"], 1.0);
    assert_eq!(v["ppf_fit"]["recognized"], false);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["check", "--a0", "0.9", "--a1", "0.5"][..],
        &["matrix"],
        &["matrix", "--a1", "0.5", "--phi", "z"],
        &["matrix", "--phi", "2z"],
        &["matrix", "--phi", "z +"],
        &["check", "--a1", "0.5", "--grid", "2"],
        &["matrix", "--a1", "0.5", "--kappa", "0.5"],
        &["spectrum", "--a1", "0.5", "--trunc", "600"],
        &["no-such-command"],
    ] {
        let o = wco(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn spectrum_examples() {
    let o = wco(&["spectrum", "--phi", "0.5z", "--psi", "1", "--trunc", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "index,re,im,modulus"));
    let moduli: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("index"))
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    for (k, m) in moduli.iter().enumerate() {
        assert!((m - 0.5f64.powi(k as i32)).abs() < 1e-15);
    }

    let o = wco(&[
        "spectrum", "--a0", "0.3", "--a1", "0.4", "--b", "1", "--trunc", "64", "--ladder",
    ]);
    let text = stdout(&o);
    let at = text
        .lines()
        .position(|l| l == "n,target_re,target_im,distance")
        .expect("ladder block");
    let distances: Vec<f64> = text
        .lines()
        .skip(at + 1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(distances.len(), 5);
    assert!(distances.iter().all(|&d| d <= 1e-6));
}

#[test]
fn spectrum_of_involution_pairs_plus_minus_one() {
    let o = wco(&["spectrum", "--phi", "(0.5-z)/(1-0.5z)", "--trunc", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("approximate the operator spectrum"));
    let lead: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("index"))
        .take(2)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(lead.iter().any(|&x| (x - 1.0).abs() < 1e-6));
    assert!(lead.iter().any(|&x| (x + 1.0).abs() < 1e-6));
}

#[test]
fn koenigs_examples() {
    let o = wco(&["koenigs", "--phi", "0.5z/(1-0.5z)", "--trunc", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let coeffs = v["koenigs"].as_array().unwrap();
    for (k, z) in coeffs.iter().enumerate().skip(1) {
        assert!(
            (z[0].as_f64().unwrap() - 1.0).abs() < 1e-8 && z[1].as_f64().unwrap().abs() < 1e-8,
            "k = {k}"
        );
    }
    assert_eq!(v["membership"][0]["divergence_flag"], true);
    assert_eq!(v["obstruction"]["status"], "refused");
    assert_eq!(v["eigenvalue_decay"]["rigorous"], false);

    let v = json(&wco(&["koenigs", "--phi", "0.5z", "--trunc", "8"]));
    let expected: Vec<Value> = (0..=8)
        .map(|k| serde_json::json!([if k == 1 { 1.0 } else { 0.0 }, 0.0]))
        .collect();
    assert_eq!(v["koenigs"], Value::Array(expected));
    assert_eq!(v["membership"][0]["divergence_flag"], false);
    assert_eq!(v["obstruction"]["status"], "ok");

    let o = wco(&["koenigs", "--phi", "(0.6+0.8i)z"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not contractive"));
}

#[test]
fn verify_default_and_filtered() {
    let o = wco(&["verify"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    let records = v["records"].as_array().unwrap();
    assert!(records.len() >= 30);
    let ids: Vec<&str> = records
        .iter()
        .map(|r| r["test_id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    assert_eq!(ids, sorted);
    for r in records {
        let pass = r["pass"].as_bool().unwrap();
        assert_eq!(
            pass,
            r["metric"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap()
        );
    }

    let v = json(&wco(&["verify", "--filter", "ppf"]));
    let ids: Vec<String> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["test_id"].as_str().unwrap().to_string())
        .collect();
    assert!(!ids.is_empty() && ids.iter().all(|id| id.contains("ppf")));
}

#[test]
fn verify_seed_changes_sweep_not_verdicts() {
    let a = wco(&["verify", "--seed", "7"]);
    let b = wco(&["verify", "--seed", "7"]);
    let d = wco(&["verify"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, d.stdout);
    let verdicts = |o: &Output| -> Vec<(String, bool)> {
        json(o)["records"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                (
                    r["test_id"].as_str().unwrap().to_string(),
                    r["pass"].as_bool().unwrap(),
                )
            })
            .collect()
    };
    assert_eq!(verdicts(&a), verdicts(&d));
}
