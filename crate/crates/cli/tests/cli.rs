use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debranges")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn thm1_passes_at_k1_and_fails_at_k2() {
    let one = run(&["certify", "--generator", "thm1", "--N", "4096", "--k", "1"]);
    assert_eq!(one.status.code(), Some(0));
    let r = report(&one);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["config"]["parameters"]["N"], 4096);
    let two = run(&["certify", "--generator", "thm1", "--N", "4096", "--k", "2"]);
    assert_eq!(two.status.code(), Some(1));
    let c = &report(&two)["result"]["certificates"][0]["certificate"];
    assert_eq!(c["g_ell2_inv"]["verdict"], "divergent");
}

#[test]
fn canonical_sine_system() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("a.csv");
    let out = run(&["canonical", "--segments", "I:pi", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["kdb_type"], std::f64::consts::PI);
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,value,error_bound"));
    // ln|sin(iπy)| at y = 64 is πy − ln 2 to double precision
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(last[0], 6.0);
    assert!((last[1] - (64.0 * std::f64::consts::PI - 2f64.ln())).abs() < 1e-9);
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    for text in [
        r#"{"schema_version": 2, "command": "canonical", "parameters": {"segments": []}}"#,
        r#"{"schema_version": 1, "command": "certify", "parameters": {"generator": "thm1", "N": 10}}"#,
        r#"{"schema_version": 1, "command": "certify", "parameters": {"generator": "thm1", "typo": 1}}"#,
        r#"{"schema_version": 1, "command": "certify", "parameters": {"generator": "thm1"}, "extra": 0}"#,
        "not json",
    ] {
        std::fs::write(&cfg, text).unwrap();
        let out = run(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{text}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["certify", "--generator", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["canonical", "--segments", "[1,2,1]:1"]).status.code(), Some(2));
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"schema_version": 1, "command": "type-estimate",
            "parameters": {"model": {"kind": "sin"}, "expected": 3.141592653589793}}"#,
    )
    .unwrap();
    let a = run(&["--config", cfg.to_str().unwrap()]);
    let b = run(&["type-estimate", "--model", "sin", "--expected", "3.141592653589793"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reports_are_reproducible() {
    let args = ["atomize", "--N", "2000", "--avoid", "0.3,-1.7", "--isometry-trials", "2", "--isometry-tol", "0.05"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
