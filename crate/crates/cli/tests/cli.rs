use std::path::Path;
use std::process::{Command, Output};

fn ionlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionlogic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn synthesize_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path_s = path.to_str().unwrap().to_string();
    let mut full = vec!["synthesize"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", &path_s]);
    let o = ionlogic(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path_s
}

#[test]
fn synthesize_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for method in ["sideband1", "sideband3", "altcs2", "altcs7"] {
        for (phi, phi2) in [("0", "0"), ("1.234", "-0.5"), ("pi/2", "2.5")] {
            let f = synthesize_to(
                dir.path(),
                &format!("{method}.json"),
                &["cnot", "--method", method, "--control", "0", "--target", "1", "--phi", phi, "--phi2", phi2],
            );
            let o = ionlogic(&["verify", "--schedule", &f]);
            assert_eq!(o.status.code(), Some(0), "{method}: {}", stdout(&o));
            assert!(stdout(&o).contains("result: PASS"));
        }
    }
}

#[test]
fn explicit_target_and_cs() {
    let dir = tempfile::tempdir().unwrap();
    let f = synthesize_to(dir.path(), "c.json", &["cnot", "--method", "sideband1", "--phi", "0"]);
    let o = ionlogic(&["verify", "--schedule", &f, "--target", "cnot:0,1", "--cs", "0,1", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    // reversed roles must fail with exit code 1
    let o = ionlogic(&["verify", "--schedule", &f, "--target", "cnot:1,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("result: FAIL"));
}

#[test]
fn other_gates_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["pgate", "--ion", "0"],
        &["uphi", "--phi", "-0.7"],
        &["swap", "--l", "1189"],
        &["cz3", "--phi2", "2.5"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let f = synthesize_to(dir.path(), &format!("g{k}.json"), args);
        let o = ionlogic(&["verify", "--schedule", &f, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["pass"], serde_json::Value::Bool(true));
    }
}

#[test]
fn altcs7_needs_cutoff_nine() {
    let dir = tempfile::tempdir().unwrap();
    let f = synthesize_to(dir.path(), "c7.json", &["cnot", "--method", "altcs7", "--phi", "0.3"]);
    assert_eq!(ionlogic(&["verify", "--schedule", &f, "--cutoff", "9"]).status.code(), Some(0));
    let o = ionlogic(&["verify", "--schedule", &f, "--cutoff", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncation"));
    let o = ionlogic(&["scan", "--schedule", &f, "--cutoffs", "8,9,12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("minimal stable cutoff: 9"));
}

#[test]
fn find_swap_l_reports_1189() {
    let o = ionlogic(&["find-swap-l", "--max", "2500"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let first = text.lines().nth(1).unwrap();
    assert!(first.trim_start().starts_with("1189"), "{first}");
    assert!(first.contains("0.00023354"));
    assert!(text.contains("l=2378"));
}

#[test]
fn solve_angles_prints_known_values() {
    let o = ionlogic(&["solve-angles", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let deg = |k: &str| v[k].as_f64().unwrap().to_degrees();
    assert!((deg("alpha") - 298.2).abs() < 0.1);
    assert!((deg("beta") - 149.1).abs() < 0.1);
    assert!((deg("gamma") - 63.87).abs() < 0.1);
    assert!((deg("delta") - 131.0).abs() < 0.1);
}

#[test]
fn simulate_moves_control_excitation() {
    let dir = tempfile::tempdir().unwrap();
    let f = synthesize_to(dir.path(), "c.json", &["cnot", "--method", "sideband1"]);
    let o = ionlogic(&["simulate", "--schedule", &f, "--initial", "|10;0⟩"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("|11;0⟩"));
    assert!(stdout(&o).contains("probability 1"));
    let o = ionlogic(&["simulate", "--schedule", &f, "--initial", "|10;0>", "--cutoff", "1", "--strict"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ionlogic(&["simulate", "--schedule", &f, "--initial", "10;0", "--cutoff", "1", "--auto"]);
    assert_eq!(o.status.code(), Some(0));
    let o = ionlogic(&["simulate", "--schedule", &f, "--initial", "|1;0⟩"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unitary_restricts_to_subspace() {
    let dir = tempfile::tempdir().unwrap();
    let f = synthesize_to(dir.path(), "p.json", &["pgate"]);
    let o = ionlogic(&["unitary", "--schedule", &f, "--subspace", "cs:0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("|0;1⟩"));
    assert_eq!(text.lines().filter(|l| l.trim_start().starts_with('|')).count(), 4);
    let o = ionlogic(&["unitary", "--schedule", &f, "--subspace", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn physical_parameters() {
    let o = ionlogic(&[
        "physical", "--mu", "1e-26", "--B", "0.01", "--t", "1e-4", "--eta", "0.1", "--n", "1", "--Phi", "0", "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let theta = v["theta"].as_f64().unwrap();
    let expect = -1e-26 * 0.01 * 1e-4 * 0.1 / (2.0 * 1.054571817e-34);
    assert!(((theta - expect) / expect).abs() < 1e-11);
    assert!((v["phi"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-11);
    assert!((v["duration"].as_f64().unwrap() - 1e-4).abs() < 1e-15);
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 3] = [
        &["find-swap-l", "--max", "3000"],
        &["solve-angles"],
        &["synthesize", "cnot", "--method", "altcs7", "--phi", "0.25", "--phi2", "1"],
    ];
    for args in runs {
        let a = ionlogic(args);
        let b = ionlogic(args);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ionlogic(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(ionlogic(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ionlogic(&["synthesize", "cnot", "--method", "sideband9"]).status.code(), Some(2));
    assert_eq!(ionlogic(&["synthesize", "uphi", "--phi", "pi/"]).status.code(), Some(2));
    assert_eq!(ionlogic(&["verify", "--schedule", "/nonexistent/x.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"version": 1, "num_ions": 1, "cutoff": 4, "label": "x", "pulses": [{"ion": 0, "kind": "green", "order": 1, "theta": "pi", "phi": "0"}]}"#).unwrap();
    let o = ionlogic(&["verify", "--schedule", bad.to_str().unwrap(), "--target", "diag:0:1,1,1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pulses[0].kind"));
}
