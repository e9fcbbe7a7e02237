//! End-to-end tests driving the compiled binary: exit codes, output
//! determinism, and agreement between subcommands on shared scenarios.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmlab"))
        .args(args)
        .output()
        .expect("binary spawns")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal termination")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Emits the reference scenarios into `dir` and returns their paths.
fn emit_examples(dir: &Path) -> Vec<PathBuf> {
    let out = run(&["examples", "--out", dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    let written = report["written"].as_array().expect("written array");
    assert_eq!(written.len(), 4);
    written
        .iter()
        .map(|v| PathBuf::from(v.as_str().unwrap()))
        .collect()
}

#[test]
fn examples_emit_four_scenarios_that_all_verify() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_examples(dir.path());
    let expected_names = [
        "two_level_lambda1.json",
        "modified_two_level_lambda100.json",
        "standard_n64.json",
        "modified_standard_n64.json",
    ];
    for (path, name) in paths.iter().zip(expected_names) {
        assert_eq!(path.file_name().unwrap().to_str().unwrap(), name);
        let out = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(
            exit_code(&out),
            0,
            "{name} failed verification: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        let report = stdout_json(&out);
        assert_eq!(report["pass"], Value::Bool(true));
        assert!(report["bound_report"]["slack"].as_f64().unwrap() >= -1e-9);
    }
}

#[test]
fn verify_reports_all_bound_terms() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_examples(dir.path());
    let out = run(&["verify", paths[1].to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report = stdout_json(&out);
    for field in [
        "lhs",
        "fidelity",
        "fidelity_term",
        "drive_term",
        "slack",
        "helstrom_p_error",
        "corollary1_rhs",
        "corollary2_lhs",
        "corollary2_rhs",
    ] {
        assert!(
            report["bound_report"][field].is_number(),
            "missing bound report field {field}"
        );
    }
    for field in ["drift_actual", "drift_bound", "error_bound_margin"] {
        assert!(report[field].is_number(), "missing field {field}");
    }
    for check in ["slack_ok", "corollary1_ok", "drift_ok", "error_bound_ok"] {
        assert_eq!(report["checks"][check], Value::Bool(true));
    }
}

#[test]
fn verify_rejects_scenario_with_denormalized_omega() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_examples(dir.path());
    let text = std::fs::read_to_string(&paths[0]).unwrap();
    let mut scenario: Value = serde_json::from_str(&text).unwrap();
    scenario["omega"][0][0] = Value::from(2.0);
    let corrupted = dir.path().join("corrupted.json");
    std::fs::write(&corrupted, serde_json::to_string_pretty(&scenario).unwrap()).unwrap();

    let out = run(&["verify", corrupted.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let stderr = stderr_text(&out);
    assert!(stderr.contains("omega"), "stderr: {stderr}");
    assert!(stderr.contains("norm"), "stderr: {stderr}");
}

#[test]
fn verify_rejects_missing_file() {
    let out = run(&["verify", "/nonexistent/scenario.json"]);
    assert_eq!(exit_code(&out), 2);
    assert!(!stderr_text(&out).is_empty());
}

#[test]
fn fuzz_is_deterministic_per_seed_and_passes() {
    let args = ["fuzz", "--samples", "50", "--dim-a", "2", "--seed", "123"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0, "stderr: {}", stderr_text(&first));
    assert_eq!(first.stdout, second.stdout);

    let report = stdout_json(&first);
    assert_eq!(report["samples"], Value::from(50));
    assert_eq!(report["violation"], Value::Bool(false));
    assert!(report["min_slack"].as_f64().unwrap() >= -1e-9);
    assert!(report["min_error_bound_margin"].as_f64().unwrap() >= -1e-9);
    assert!(report["worst_report"]["fidelity"].is_number());

    let other_seed = run(&["fuzz", "--samples", "50", "--dim-a", "2", "--seed", "124"]);
    assert_ne!(first.stdout, other_seed.stdout);
}

#[test]
fn fuzz_commuting_couplings_respect_fidelity_floor() {
    let out = run(&[
        "fuzz",
        "--samples",
        "40",
        "--dim-a",
        "2",
        "--seed",
        "1",
        "--commuting",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert!(report["min_fidelity_floor_margin"].as_f64().unwrap() >= -1e-9);
    assert_eq!(report["violation"], Value::Bool(false));
}

fn write_spec(dir: &Path, name: &str, spec: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(spec).unwrap()).unwrap();
    path
}

fn read_csv_column(path: &Path, header: &str, column: &str) -> Vec<f64> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let head = lines.next().unwrap();
    assert_eq!(head, header);
    let index = head.split(',').position(|c| c == column).unwrap();
    lines
        .map(|line| line.split(',').nth(index).unwrap().parse().unwrap())
        .collect()
}

const SWEEP_HEADER: &str = "parameter,value,sample,fidelity,helstrom_p_error,lhs,fidelity_term,drive_term,slack,corr_integral";

#[test]
fn sweep_lambda_is_byte_deterministic_with_monotone_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "spec.json",
        &serde_json::json!({
            "model": "modified_two_level",
            "parameter": "lambda",
            "start": 1.0,
            "stop": 100.0,
            "steps": 7,
            "scale": "log",
            "seed": 11
        }),
    );
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for out in [&out_a, &out_b] {
        let run_out = run(&["sweep", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(exit_code(&run_out), 0, "stderr: {}", stderr_text(&run_out));
    }
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());

    let fidelities = read_csv_column(&out_a, SWEEP_HEADER, "fidelity");
    assert_eq!(fidelities.len(), 7);
    // Stronger couplings separate the apparatus branches further.
    for pair in fidelities.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-12, "fidelity not monotone: {pair:?}");
    }
    let slacks = read_csv_column(&out_a, SWEEP_HEADER, "slack");
    assert!(slacks.iter().all(|s| *s >= -1e-9));
}

#[test]
fn sweep_uncoupled_apparatus_keeps_unit_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "spec.json",
        &serde_json::json!({
            "model": "uncoupled",
            "parameter": "tau",
            "start": 0.5,
            "stop": 2.0,
            "steps": 4,
            "seed": 3,
            "dim_a": 3
        }),
    );
    let out = dir.path().join("out.csv");
    let run_out = run(&["sweep", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&run_out), 0, "stderr: {}", stderr_text(&run_out));
    for f in read_csv_column(&out, SWEEP_HEADER, "fidelity") {
        assert!((f - 1.0).abs() <= 1e-9, "uncoupled fidelity {f}");
    }
    for p in read_csv_column(&out, SWEEP_HEADER, "helstrom_p_error") {
        assert!((p - 0.5).abs() <= 1e-9, "uncoupled error probability {p}");
    }
}

#[test]
fn sweep_packet_width_matches_continuum_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "spec.json",
        &serde_json::json!({
            "model": "standard",
            "parameter": "width",
            "start": 1.0,
            "stop": 2.0,
            "steps": 3,
            "seed": 2,
            "tau": 3.0
        }),
    );
    let out = dir.path().join("out.csv");
    let run_out = run(&["sweep", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&run_out), 0, "stderr: {}", stderr_text(&run_out));
    let fidelities = read_csv_column(&out, SWEEP_HEADER, "fidelity");
    let widths = [1.0f64, 1.5, 2.0];
    for (f, w) in fidelities.iter().zip(widths) {
        let continuum = (-9.0 / (8.0 * w * w)).exp();
        assert!(
            (f - continuum).abs() <= 0.02 * continuum,
            "width {w}: lattice {f} vs continuum {continuum}"
        );
    }
}

#[test]
fn sweep_rejects_malformed_specs() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        serde_json::json!({
            "model": "two_level", "parameter": "lambda",
            "start": 1.0, "stop": 2.0, "steps": 2, "bogus": 1
        }),
        serde_json::json!({
            "model": "two_level", "parameter": "width",
            "start": 1.0, "stop": 2.0, "steps": 2
        }),
        serde_json::json!({
            "model": "two_level", "parameter": "lambda",
            "start": 1.0, "stop": 2.0, "steps": 0
        }),
        serde_json::json!({
            "model": "two_level", "parameter": "lambda",
            "start": 0.0, "stop": 2.0, "steps": 2, "scale": "log"
        }),
    ];
    for (k, case) in cases.iter().enumerate() {
        let spec = write_spec(dir.path(), &format!("case{k}.json"), case);
        let out_csv = dir.path().join(format!("case{k}.csv"));
        let out = run(&[
            "sweep",
            spec.to_str().unwrap(),
            "--out",
            out_csv.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 2, "case {k} accepted: {case}");
        assert!(!stderr_text(&out).is_empty());
        assert!(!out_csv.exists(), "case {k} wrote output despite failing");
    }
}

/// The two bound reports must agree field by field.
fn assert_reports_close(a: &Value, b: &Value, tolerance: f64) {
    let a = a.as_object().unwrap();
    let b = b.as_object().unwrap();
    assert_eq!(a.len(), b.len());
    for (field, value) in a {
        let x = value.as_f64().unwrap();
        let y = b[field].as_f64().unwrap();
        assert!(
            (x - y).abs() <= tolerance,
            "{field}: {x} vs {y} differ beyond {tolerance}"
        );
    }
}

#[test]
fn optimize_free_hamiltonian_reaches_error_free_measurement() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "spec.json",
        &serde_json::json!({
            "dim_a": 2,
            "v_max": 1.0,
            "tau_max": 2.0,
            "restarts": 6,
            "max_iters": 300
        }),
    );
    let scenario = dir.path().join("best.json");
    let out = run(&[
        "optimize",
        spec.to_str().unwrap(),
        "--seed",
        "5",
        "--out",
        scenario.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert!(report["best_p_error"].as_f64().unwrap() < 1e-6);
    assert!(report["v_norm"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert!(report["tau"].as_f64().unwrap() <= 2.0 + 1e-12);

    // The emitted scenario must re-verify with the same bound report.
    let verify = run(&["verify", scenario.to_str().unwrap()]);
    assert_eq!(exit_code(&verify), 0);
    let verify_report = stdout_json(&verify);
    assert_eq!(verify_report["pass"], Value::Bool(true));
    assert_reports_close(
        &report["bound_report"],
        &verify_report["bound_report"],
        1e-12,
    );
}

#[test]
fn optimize_zero_coupling_budget_leaves_a_coin_flip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "spec.json",
        &serde_json::json!({
            "dim_a": 2,
            "v_max": 0.0,
            "tau_max": 2.0,
            "restarts": 3,
            "max_iters": 100
        }),
    );
    let out = run(&["optimize", spec.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    assert_eq!(report["best_p_error"].as_f64().unwrap(), 0.5);
    assert_eq!(report["v_norm"].as_f64().unwrap(), 0.0);
}

#[test]
fn optimize_commuting_couplings_saturate_the_error_floor() {
    let dir = tempfile::tempdir().unwrap();
    // |H_S| = 1 and |[Q, H_S]| = 0.6, so no commuting protocol beats
    // an error probability of (1 - sqrt(1 - 0.36)) / 2 = 0.1.
    let spec = write_spec(
        dir.path(),
        "spec.json",
        &serde_json::json!({
            "dim_a": 2,
            "h_s": [[[0.8, 0.0], [0.6, 0.0]], [[0.6, 0.0], [-0.8, 0.0]]],
            "v_max": 4.0,
            "tau_max": 3.0,
            "restarts": 10,
            "max_iters": 500,
            "commuting_only": true
        }),
    );
    let out = run(&["optimize", spec.to_str().unwrap(), "--seed", "9"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_text(&out));
    let report = stdout_json(&out);
    let floor = report["commuting_error_floor"].as_f64().unwrap();
    let best = report["best_p_error"].as_f64().unwrap();
    assert!((floor - 0.1).abs() <= 1e-12, "floor {floor}");
    assert!(best >= floor - 1e-6, "best {best} beats the floor {floor}");
    assert!(best <= floor + 1e-3, "best {best} far from the floor {floor}");
}

#[test]
fn optimize_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "spec.json",
        &serde_json::json!({
            "dim_a": 2,
            "v_max": 1.0,
            "tau_max": 2.0,
            "restarts": 4,
            "max_iters": 150
        }),
    );
    let args = ["optimize", spec.to_str().unwrap(), "--seed", "21"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn optimize_rejects_malformed_specs() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        serde_json::json!({"dim_a": 2, "v_max": -1.0, "tau_max": 2.0}),
        serde_json::json!({"dim_a": 2, "v_max": 1.0, "tau_max": 0.0}),
        serde_json::json!({"dim_a": 0, "v_max": 1.0, "tau_max": 2.0}),
        serde_json::json!({"dim_a": 2, "v_max": 1.0, "tau_max": 2.0, "bogus": true}),
        serde_json::json!({"dim_a": 2, "v_max": 1.0, "tau_max": 2.0, "restarts": 0}),
    ];
    for (k, case) in cases.iter().enumerate() {
        let spec = write_spec(dir.path(), &format!("case{k}.json"), case);
        let out = run(&["optimize", spec.to_str().unwrap()]);
        assert_eq!(exit_code(&out), 2, "case {k} accepted: {case}");
        assert!(!stderr_text(&out).is_empty());
    }
}
