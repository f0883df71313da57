use std::process::{Command, Output};

use serde_json::Value;

fn numphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numphase"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

#[test]
fn atomic_sweep_csv_has_single_header_and_all_rows() {
    let out = numphase(&["sweep-atomic", "--steps", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha_p,H_m,R_phi,mu_R_phi,X,X_mu");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines.iter().filter(|l| l.starts_with("alpha_p")).count(), 1);
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 6);
        assert!(fields[5] >= -1e-9, "X_mu negative in {line}");
    }
}

#[test]
fn oscillator_sweep_writes_file_and_reports_monotonicity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("osc.csv");
    let out = numphase(&["sweep-oscillator", "--steps", "7", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("alpha,H_m,R_phi,X\n"));
    assert_eq!(text.lines().count(), 8);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("h_increasing=true"), "{err}");
    assert!(err.contains("r_increasing=true"), "{err}");
}

#[test]
fn mu_search_is_deterministic_per_seed() {
    let args = ["mu-search", "--d", "2", "--budget", "2000", "--seed", "3"];
    let a = numphase(&args);
    let b = numphase(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    let mu = report["mu_estimate"].as_f64().unwrap();
    assert!((mu - 4.0854).abs() < 5e-3, "mu = {mu}");
}

#[test]
fn verify_exit_codes() {
    let ok = numphase(&["verify", "--suite", "theorem1", "--d", "2", "--samples", "200"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["passed"], Value::Bool(true));

    let eq6 = numphase(&["verify", "eq6", "--samples", "5"]);
    assert_eq!(eq6.status.code(), Some(0));

    let violated = numphase(&["verify", "--suite", "eq7", "--d", "2", "--mu", "10", "--samples", "50"]);
    assert_eq!(violated.status.code(), Some(2));
    let summary = json(&violated);
    assert_eq!(summary["passed"], Value::Bool(false));
    assert!(summary["min_margin"].as_f64().unwrap() < 0.0);

    let bad = numphase(&["verify", "mixed_mu", "--samples", "0"]);
    assert_eq!(bad.status.code(), Some(1));

    let unknown = numphase(&["verify", "eq9"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn eval_vacuum_and_coherent() {
    let vac = json(&numphase(&["eval", "--fock", "0", "--d", "2"]));
    for key in ["h_m", "r_phi", "x"] {
        assert_eq!(vac["evaluation"][key].as_f64().unwrap(), 0.0, "{key}");
    }
    let coh = numphase(&["eval", "--spec", r#"{"glauber_coherent":{"re":1.0,"im":0.0}}"#]);
    assert!(coh.status.success(), "{}", String::from_utf8_lossy(&coh.stderr));
    let x = json(&coh)["evaluation"]["x"].as_f64().unwrap();
    assert!(x >= 0.0, "x = {x}");
}

#[test]
fn eval_rejects_non_hermitian_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.json");
    std::fs::write(
        &path,
        r#"{"dim":2,"re":[[0.5,0.4],[0.0,0.5]],"im":[[0.0,0.0],[0.0,0.0]],"kind":"atomic"}"#,
    )
    .unwrap();
    let out = numphase(&["eval", "--matrix", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sweep_row_is_reproduced_by_eval() {
    let sweep = stdout(&numphase(&["sweep-atomic", "--steps", "7"]));
    let row: Vec<f64> = sweep.lines().nth(3).unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    let alpha = format!("{:.17e}", row[0]);
    let eval = json(&numphase(&["eval", "--alpha-p", &alpha, "--d", "2", "--mu", "4.085"]));
    let e = &eval["evaluation"];
    assert_eq!(e["kernel"], "su2");
    for (i, key) in [(1, "h_m"), (2, "r_phi"), (4, "x"), (5, "x_mu")] {
        let v = e[key].as_f64().unwrap();
        assert!((v - row[i]).abs() < 1e-9, "{key}: {v} vs {}", row[i]);
    }
}
