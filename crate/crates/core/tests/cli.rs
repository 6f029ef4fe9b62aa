use std::process::Command;

fn histent(args: &[&str]) -> (i32, String, String) {
    histent_env(args, None)
}

fn histent_env(args: &[&str], tol: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_histent"));
    cmd.args(args).env_remove("HISTENT_TOL");
    if let Some(t) = tol {
        cmd.env("HISTENT_TOL", t);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn temporal_entropy_at_half() {
    let (code, out, _) = histent(&["entropy", "--times", "3", "teleportation.json", "--param", "p=0.5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2.000000\n");
}

#[test]
fn entropy_sweep_csv() {
    let (code, out, _) = histent(&["entropy", "--times", "3", "--sweep", "p=0..1:101", "teleportation.json"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "p,entropy");
    assert_eq!(lines.len(), 102);
    let mut prev = f64::NEG_INFINITY;
    for (i, line) in lines[1..].iter().enumerate() {
        let (p, s) = line.split_once(',').unwrap();
        let (p, s): (f64, f64) = (p.parse().unwrap(), s.parse().unwrap());
        assert!(p > prev);
        prev = p;
        assert!((p - i as f64 / 100.0).abs() < 1e-15);
        let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
        assert!((s - (1.0 + h(p) + h(1.0 - p))).abs() < 1e-8, "{line}");
    }
}

#[test]
fn consistency_verdicts() {
    let (code, out, _) = histent(&["consistency", "entangler.json"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("CONSISTENT"));
    let (code, out, _) = histent(&["consistency", "doubleslit.json"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("INCONSISTENT"));
}

#[test]
fn teleportation_has_eight_histories() {
    let (code, out, _) = histent(&["amplitudes", "--format", "csv", "teleportation.json"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 9);
    assert!(out.starts_with("history,re,im,probability\n\"(000,000,000)\",0.35355339059327"));
}

#[test]
fn reports_are_deterministic() {
    for fmt in ["text", "csv", "json"] {
        let a = histent(&["report", "--format", fmt, "teleportation.json"]);
        let b = histent(&["report", "--format", fmt, "teleportation.json"]);
        assert_eq!(a.0, 0);
        assert_eq!(a, b);
    }
    let (_, json, _) = histent(&["report", "--format", "json", "teleportation.json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["schedule"]["nonzero_histories"], 8);
    assert_eq!(v["consistency"]["verdict"], "CONSISTENT");
    assert_eq!(v["entropies"].as_array().unwrap().len(), 6);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"qubits": 1, "initial": "basis:0",
  "steps": [
    {"measure": "computational"},
    {"measure": [{"label": "0", "projector": [[1, 0], [0, 0]]}]}
  ]}"#,
    )
    .unwrap();
    let (code, _, err) = histent(&["probs", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("t2") && err.contains("line 4"), "{err}");

    assert_eq!(histent(&["probs", "/no/such/file.json"]).0, 1);
    assert_eq!(histent(&["entropy", "entangler.json"]).0, 1);
    assert_eq!(histent(&["probs", "--sweep", "p=0..1:3", "teleportation.json"]).0, 1);
    assert_eq!(histent(&["frobnicate", "entangler.json"]).0, 1);
    assert_eq!(histent_env(&["probs", "entangler.json"], Some("nope")).0, 1);
    assert_eq!(histent(&["entropy", "--times", "3", "teleportation.json", "--param", "q=1"]).0, 1);
}

#[test]
fn tolerance_override_is_applied() {
    let (code, out, _) = histent_env(&["consistency", "entangler.json"], Some("1e-3"));
    assert_eq!(code, 0);
    assert!(out.contains("tolerance      1e-3"), "{out}");
}

#[test]
fn output_file_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("probs.csv");
    let (code, stdout, _) = histent(&["probs", "--format", "csv", "--out", out_path.to_str().unwrap(), "entangler.json"]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    let lines: Vec<&str> = written.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "history,probability");
    for (line, label) in lines[1..].iter().zip(["\"(00,00)\"", "\"(10,11)\""]) {
        let (l, p) = line.rsplit_once(',').unwrap();
        assert_eq!(l, label);
        assert!((p.parse::<f64>().unwrap() - 0.5).abs() < 1e-15);
    }
}

#[test]
fn space_and_time_probabilities() {
    let (code, out, _) = histent(&["probs", "--space", "B", "--format", "csv", "teleportation.json"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 2);
    let (code, out, _) = histent(&["probs", "--times", "1", "--format", "csv", "teleportation.json"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1 + 4);
}

#[test]
fn nosignal_and_marginals_commands() {
    let (code, out, _) = histent(&["nosignal", "--format", "json", "entangler.json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nosignal"]["factorized_evolution"], false);
    let (code, out, _) = histent(&["marginals", "--format", "json", "doubleslit.json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["marginals"]["intermediate_max_discrepancy"].as_f64().unwrap() >= 0.1);
    assert_eq!(histent(&["nosignal", "doubleslit.json"]).0, 1);
}
