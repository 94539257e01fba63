//! End-to-end behavior of the `bell` binary: exit codes, report schemas,
//! and input validation.

use std::path::Path;
use std::process::{Command, Output};

fn bell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bell"))
        .args(args)
        .env_remove("BELL_THREADS")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let output = bell(args);
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).expect("stdout is valid JSON")
}

#[test]
fn chsh_report_carries_the_documented_fields() {
    let report = stdout_json(&[
        "chsh",
        "--model",
        "lhv-sign",
        "--sampling",
        "shared",
        "--angles",
        "0,0.7853981633974483,1.5707963267948966,2.356194490192345",
        "--samples",
        "2000",
        "--seed",
        "11",
    ]);
    for key in [
        "I",
        "I_std_error",
        "angles",
        "bound",
        "contexts",
        "model",
        "quantum_target",
        "samples",
        "sampling",
        "seed",
    ] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert_eq!(report["model"], "lhv-sign");
    assert_eq!(report["sampling"], "shared");
    assert_eq!(report["samples"], 2000);
    assert_eq!(report["seed"], 11);
    assert_eq!(report["bound"], 0.5);
    assert!(report["I"].as_f64().unwrap() <= 0.5 + 1e-12);
    // Shared sampling produces no disjointness certificate.
    assert!(report.get("disjointness_certificate").is_none());
    let contexts = report["contexts"].as_object().unwrap();
    assert_eq!(contexts.len(), 4);
    for (_, entry) in contexts {
        assert!(entry["E"].as_f64().unwrap().abs() <= 0.25);
        assert_eq!(entry["n"], 2000);
        assert!(entry["std_error"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn per_context_reports_certify_disjointness() {
    let report = stdout_json(&[
        "chsh",
        "--model",
        "contextual",
        "--sampling",
        "per-context",
        "--angles",
        "0,0.7853981633974483,1.5707963267948966,2.356194490192345",
        "--samples",
        "2000",
        "--seed",
        "11",
    ]);
    assert_eq!(report["disjointness_certificate"], true);
    assert_eq!(report["sampling"], "per-context");
}

#[test]
fn quantum_model_reports_the_closed_form_value() {
    let report = stdout_json(&[
        "chsh",
        "--model",
        "quantum",
        "--sampling",
        "per-context",
        "--angles",
        "0,0.7853981633974483,1.5707963267948966,2.356194490192345",
        "--samples",
        "100",
        "--seed",
        "0",
    ]);
    let i = report["I"].as_f64().unwrap();
    assert!((i - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert_eq!(report["I_std_error"], 0.0);
}

#[test]
fn incoherent_model_sampling_combinations_exit_with_usage_errors() {
    for model in ["contextual", "quantum"] {
        let output = bell(&[
            "chsh", "--model", model, "--sampling", "shared", "--angles", "0,1,2,3",
            "--samples", "100", "--seed", "0",
        ]);
        assert_eq!(output.status.code(), Some(2), "{model} + shared must be rejected");
        assert!(!output.stderr.is_empty());
        assert!(output.stdout.is_empty());
    }
}

#[test]
fn malformed_flags_exit_with_usage_errors() {
    // Three angles instead of four.
    let output = bell(&[
        "chsh", "--model", "quantum", "--sampling", "per-context", "--angles", "0,1,2",
        "--samples", "100", "--seed", "0",
    ]);
    assert_eq!(output.status.code(), Some(2));

    // Sample count below the two-trial minimum.
    let output = bell(&[
        "chsh", "--model", "quantum", "--sampling", "per-context", "--angles", "0,1,2,3",
        "--samples", "1", "--seed", "0",
    ]);
    assert_eq!(output.status.code(), Some(2));

    // Unknown model.
    let output = bell(&[
        "chsh", "--model", "psychic", "--sampling", "shared", "--angles", "0,1,2,3",
        "--samples", "100", "--seed", "0",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_nonzero_with_a_diagnostic() {
    // Missing input file.
    let output = bell(&["algebra", "--input", "/nonexistent/input.json"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).starts_with("error:"));

    // Invalid flip probability.
    let output = bell(&["spin1", "--flip-prob", "1.5", "--samples", "100", "--seed", "0"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(!output.stderr.is_empty());

    // Invalid worker cap.
    let output = Command::new(env!("CARGO_BIN_EXE_bell"))
        .args(["spin1", "--flip-prob", "0.1", "--samples", "100", "--seed", "0"])
        .env("BELL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn algebra_report_covers_measure_and_admissibility() {
    let report = stdout_json(&[
        "algebra",
        "--input",
        &fixture("algebra_tagged.json"),
        "--check-admissible",
        &fixture("compat_disjoint.json"),
    ]);
    assert_eq!(report["space_size"], 4);
    assert_eq!(report["atoms"].as_array().unwrap().len(), 4);
    assert_eq!(report["event_count"], 16);
    assert_eq!(report["measure"]["all_pass"], true);
    assert_eq!(report["admissibility"]["admissible"], false);
    let offending = report["admissibility"]["offending"].as_array().unwrap();
    assert!(!offending.is_empty());
    for entry in offending {
        let tags: Vec<&str> = entry["tags"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| t.as_str().unwrap())
            .collect();
        assert!(tags.contains(&"y") && tags.contains(&"y2"));
    }
}

#[test]
fn algebra_rejects_malformed_weights_and_wrong_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");

    // Weights are per atom: sigma({0}) on three points has two atoms, so
    // three weights cannot match.
    std::fs::write(
        &path,
        r#"{"space_size": 3, "generators": [[0]], "weights": ["1/2", "1/4", "1/4"]}"#,
    )
    .unwrap();
    let output = bell(&["algebra", "--input", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));

    // Decimal weights are not exact and must be rejected.
    std::fs::write(
        &path,
        r#"{"space_size": 2, "generators": [[0]], "weights": ["0.5", "0.5"]}"#,
    )
    .unwrap();
    let output = bell(&["algebra", "--input", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));

    // Unknown top-level keys are schema violations.
    std::fs::write(&path, r#"{"space_size": 2, "generators": [[0]], "extra": 1}"#).unwrap();
    let output = bell(&["algebra", "--input", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn failing_measures_are_reported_not_hidden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("subnormal.json");
    // Total mass 9/10: normalization must fail while the report still renders.
    std::fs::write(
        &path,
        r#"{"space_size": 2, "generators": [[0]], "weights": ["1/2", "2/5"]}"#,
    )
    .unwrap();
    let report = stdout_json(&["algebra", "--input", path.to_str().unwrap()]);
    assert_eq!(report["measure"]["all_pass"], false);
    let violations = report["measure"]["violations"].as_array().unwrap();
    assert!(violations
        .iter()
        .any(|v| v["kind"] == "normalization" && v["total"] == "9/10"));
}

#[test]
fn ks_reports_assignments_and_unsatisfiability() {
    let report = stdout_json(&["ks", "--triads", &fixture("triads_shared_x.json")]);
    assert_eq!(report["satisfiable"], true);
    let assignment = report["assignment"].as_object().unwrap();
    assert_eq!(assignment.len(), 5);
    // The shared direction plus each triad must sum to 2.
    let value = |name: &str| assignment[name].as_u64().unwrap();
    assert_eq!(value("x") + value("y") + value("z"), 2);
    assert_eq!(value("x") + value("y2") + value("z2"), 2);

    let report = stdout_json(&["ks", "--triads", &fixture("triads_unsat_fano.json")]);
    assert_eq!(report["satisfiable"], false);
    assert!(report["assignment"].is_null());
}

#[test]
fn ks_rejects_malformed_triad_documents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triads.json");
    // A triad naming an unknown direction.
    std::fs::write(
        &path,
        r#"{"directions": ["x", "y", "z"], "triads": [["x", "y", "w"]]}"#,
    )
    .unwrap();
    let output = bell(&["ks", "--triads", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));

    // A triad repeating a direction.
    std::fs::write(
        &path,
        r#"{"directions": ["x", "y", "z"], "triads": [["x", "x", "y"]]}"#,
    )
    .unwrap();
    let output = bell(&["ks", "--triads", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn spin1_report_matches_its_parameters() {
    let report = stdout_json(&["spin1", "--flip-prob", "0", "--samples", "10000", "--seed", "5"]);
    assert_eq!(report["agreement"], 1.0);
    assert_eq!(report["flip_prob"], 0.0);
    assert_eq!(report["samples"], 10000);
    assert_eq!(report["seed"], 5);
    assert!(report["marginal_one"].as_f64().unwrap() > 0.5);
}

#[test]
fn csv_reports_have_the_documented_shape()  {
    let output = bell(&[
        "chsh", "--model", "lhv-sign", "--sampling", "shared",
        "--angles", "0,0.5,1.0,1.5", "--samples", "500", "--seed", "3",
        "--format", "csv",
    ]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "context,E,std_error,n");
    assert!(lines[5].starts_with("I,"));

    let output = bell(&["spin1", "--flip-prob", "0.5", "--samples", "100", "--seed", "1",
        "--format", "csv"]);
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
}

#[test]
fn out_flag_writes_the_report_to_a_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = bell(&[
        "spin1", "--flip-prob", "0.25", "--samples", "1000", "--seed", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let written: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(written["samples"], 1000);
}
