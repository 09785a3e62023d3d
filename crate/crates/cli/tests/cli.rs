//! End-to-end tests of the `metric-forge` binary: exit-code partition,
//! error envelopes, report contents, and the on-disk artifacts.
//!
//! Exit codes under test: 0 pass, 1 usage or I/O, 2 certificate failure,
//! 3 degenerate input.

mod common;

use common::*;
use tempfile::TempDir;

// ----------------------------------------------------------------------
// Argument and config validation
// ----------------------------------------------------------------------

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["embed", "--help"]).code, 0);
    assert_eq!(run(&["--version"]).code, 0);
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(run(&["embed", "--frobnicate"]).code, 1);
    assert_eq!(run(&["no-such-command"]).code, 1);
}

#[test]
fn missing_seed_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let pts = write_file(dir.path(), "pts.csv", REAL_PROBES_CSV);
    let (code, v) = run_report(&["check-ndk", "--config", &cfg, "--points", &pts]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "usage");
    let msg = v["error"]["message"].as_str().unwrap();
    assert!(msg.contains("seed"), "message should name the missing flag: {msg}");
}

#[test]
fn missing_points_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let (code, v) = run_report(&["check-ndk", "--config", &cfg, "--seed", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn unknown_config_field_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(
        dir.path(),
        "cfg.json",
        r#"{"version":"1","kernel":{"name":"squared-difference"},"bogus":3}"#,
    );
    let pts = write_file(dir.path(), "pts.csv", REAL_PROBES_CSV);
    let (code, v) =
        run_report(&["check-ndk", "--config", &cfg, "--points", &pts, "--seed", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn config_version_must_be_present_and_supported() {
    let dir = TempDir::new().unwrap();
    let pts = write_file(dir.path(), "pts.csv", REAL_PROBES_CSV);
    for body in [
        r#"{"kernel":{"name":"squared-difference"}}"#,
        r#"{"version":"7","kernel":{"name":"squared-difference"}}"#,
    ] {
        let cfg = write_file(dir.path(), "cfg.json", body);
        let (code, v) =
            run_report(&["check-ndk", "--config", &cfg, "--points", &pts, "--seed", "1"]);
        assert_eq!(code, 1, "config {body} should be rejected");
        assert_eq!(v["error"]["kind"], "usage");
    }
}

#[test]
fn empty_points_file_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let pts = write_file(dir.path(), "pts.csv", "");
    let (code, v) =
        run_report(&["check-ndk", "--config", &cfg, "--points", &pts, "--seed", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "usage");
}

#[test]
fn ragged_points_file_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let pts = write_file(dir.path(), "pts.csv", "1.0,2.0\n3.0\n");
    let (code, _) =
        run_report(&["check-ndk", "--config", &cfg, "--points", &pts, "--seed", "1"]);
    assert_eq!(code, 1);
}

// ----------------------------------------------------------------------
// check-ndk / check-m
// ----------------------------------------------------------------------

#[test]
fn negative_definite_kernel_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let pts = write_file(dir.path(), "pts.csv", REAL_PROBES_CSV);
    let (code, v) =
        run_report(&["check-ndk", "--config", &cfg, "--points", &pts, "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["check"]["verdict"], "pass");
    assert!(v["check"]["worst_value"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn product_kernel_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("product"));
    let pts = write_file(dir.path(), "pts.csv", REAL_PROBES_CSV);
    let (code, v) =
        run_report(&["check-ndk", "--config", &cfg, "--points", &pts, "--seed", "7"]);
    assert_eq!(code, 2);
    assert_eq!(v["check"]["verdict"], "fail");
    let witness = &v["check"]["witness"];
    assert!(witness.is_object(), "a failing check must carry its witness");
    let tol = v["check"]["tolerance"].as_f64().unwrap();
    assert!(witness["value"].as_f64().unwrap() > tol);
    assert_eq!(
        witness["points"].as_array().unwrap().len(),
        witness["coefficients"].as_array().unwrap().len()
    );
}

#[test]
fn identical_points_are_degenerate() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let pts = write_file(dir.path(), "pts.csv", "1.0\n1.0\n1.0\n");
    let (code, v) =
        run_report(&["check-ndk", "--config", &cfg, "--points", &pts, "--seed", "7"]);
    assert_eq!(code, 3);
    assert_eq!(v["check"]["verdict"], "degenerate");
}

#[test]
fn check_m_defaults_to_the_quadratic_check_negated() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let pts = write_file(dir.path(), "pts.csv", REAL_PROBES_CSV);
    let args: Vec<&str> =
        vec!["--config", &cfg, "--points", &pts, "--seed", "11", "--trials", "300"];

    let (ndk_code, ndk) = run_report(&[&["check-ndk"][..], &args[..]].concat());
    let (m_code, m) = run_report(&[&["check-m"][..], &args[..]].concat());
    assert_eq!(ndk_code, 0);
    assert_eq!(m_code, 0);
    assert_eq!(m["check"]["verdict"], ndk["check"]["verdict"]);
    // Same engine, opposite sign convention: the values must mirror exactly.
    assert_eq!(
        m["check"]["worst_value"].as_f64().unwrap(),
        -ndk["check"]["worst_value"].as_f64().unwrap()
    );
}

#[test]
fn pairing_kernel_passes_the_quartic_check() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(
        dir.path(),
        "cfg.json",
        r#"{"version":"1","kernel":{"name":"pairing"},"m":4}"#,
    );
    let pts = write_file(dir.path(), "pts.csv", REAL_PROBES_CSV);
    let (code, v) =
        run_report(&["check-m", "--config", &cfg, "--points", &pts, "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["check"]["verdict"], "pass");
    assert_eq!(v["parameters"]["m"], 4);

    // The --m flag overrides nothing here but must be accepted.
    let (code, _) = run_report(&[
        "check-m", "--config", &cfg, "--points", &pts, "--seed", "5", "--m", "4",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn strict_check_rejects_duplicate_points() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", &kernel_config("squared-difference"));
    let pts = write_file(dir.path(), "pts.csv", "1.0\n2.0\n1.0\n");
    let (code, v) = run_report(&[
        "check-ndk", "--config", &cfg, "--points", &pts, "--seed", "7", "--strict",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "duplicate-point");
}

#[test]
fn term_budget_env_var_is_honored() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(
        dir.path(),
        "cfg.json",
        r#"{"version":"1","kernel":{"name":"pairing"},"m":4}"#,
    );
    let pts = write_file(dir.path(), "pts.csv", "0.0\n1.0\n");
    let base: Vec<&str> = vec!["check-m", "--config", &cfg, "--points", &pts, "--seed", "5"];

    // 2 points at m = 4 is 16 terms; a budget of 10 must refuse it.
    let r = run_with_env(&base, &[("METRIC_FORGE_BUDGET", "10")]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report()["error"]["kind"], "budget-exceeded");

    // A malformed budget is a usage error, not a silent default.
    let r = run_with_env(&base, &[("METRIC_FORGE_BUDGET", "plenty")]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report()["error"]["kind"], "usage");
}

// ----------------------------------------------------------------------
// induce
// ----------------------------------------------------------------------

#[test]
fn two_projections_induce_a_metric() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", TWO_PROJECTION_CONFIG);
    let pts = write_file(dir.path(), "pts.csv", SQUARE_PROBES_CSV);
    let (code, v) = run_report(&[
        "induce", "--config", &cfg, "--points", &pts, "--seed", "2", "--require-metric",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["linearity"], "verified");
    assert_eq!(v["separation"]["verdict"], "pass");
    assert_eq!(v["axioms"]["verdict"], "pass");
    assert_eq!(v["distance_matrix"]["max_stderr"].as_f64(), Some(0.0));
    // rho((0,0),(1,1)) = sqrt(1/2 + 1/2) = 1 exactly.
    assert_eq!(v["distance_matrix"]["rows"][0][3].as_f64(), Some(1.0));
}

#[test]
fn single_projection_is_only_a_pseudometric() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", SINGLE_PROJECTION_CONFIG);
    let pts = write_file(dir.path(), "pts.csv", SQUARE_PROBES_CSV);
    let base: Vec<&str> = vec!["induce", "--config", &cfg, "--points", &pts, "--seed", "2"];

    // Without --require-metric the run reports the failure but exits clean.
    let (code, v) = run_report(&base);
    assert_eq!(code, 0);
    assert_eq!(v["separation"]["verdict"], "fail");

    // With it, the separation failure is fatal and names the merged pair.
    let (code, v) = run_report(&[&base[..], &["--require-metric"][..]].concat());
    assert_eq!(code, 2);
    assert_eq!(v["separation"]["verdict"], "fail");
    let pair = v["separation"]["witness"]["points"].as_array().unwrap();
    assert_eq!(pair.len(), 2);
    assert_ne!(pair[0], pair[1], "witness must be two distinct probe points");
}

#[test]
fn sampler_measure_requires_a_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", SAMPLER_CONFIG);
    let pts = write_file(dir.path(), "pts.csv", "0.0\n1.0\n3.0\n");

    let (code, v) = run_report(&["induce", "--config", &cfg, "--points", &pts]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "usage");
    assert!(v["error"]["message"].as_str().unwrap().contains("seed"));

    // Seeded, the same run goes through and reports its sampling noise.
    let (code, v) =
        run_report(&["induce", "--config", &cfg, "--points", &pts, "--seed", "9"]);
    assert_eq!(code, 0);
    assert!(v["distance_matrix"]["max_stderr"].as_f64().unwrap() > 0.0);
}

// ----------------------------------------------------------------------
// embed
// ----------------------------------------------------------------------

#[test]
fn line_matrix_embeds_on_a_line() {
    let dir = TempDir::new().unwrap();
    let mat = write_file(dir.path(), "line.csv", LINE_MATRIX_CSV);
    let (code, v) = run_report(&["embed", "--matrix", &mat]);
    assert_eq!(code, 0);
    assert_eq!(v["embedding"]["verdict"], "embeddable");
    assert_eq!(v["embedding"]["rank"], 1);
    let eig: Vec<f64> = v["embedding"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!((eig[0] - 2.0).abs() <= 1e-10, "leading eigenvalue {} != 2", eig[0]);
    assert!(eig[1].abs() <= 1e-10 && eig[2].abs() <= 1e-10);
    assert!(v["embedding"]["residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn star_matrix_is_not_embeddable() {
    let dir = TempDir::new().unwrap();
    let mat = write_file(dir.path(), "star.csv", STAR_MATRIX_CSV);
    let (code, v) = run_report(&["embed", "--matrix", &mat]);
    assert_eq!(code, 2);
    assert_eq!(v["embedding"]["verdict"], "not-embeddable");
    assert!(v["embedding"]["min_eigenvalue"].as_f64().unwrap() < -1e-3);
    // Best-effort coordinates are still produced from the PSD part.
    assert_eq!(v["embedding"]["coordinates"].as_array().unwrap().len(), 4);
}

#[test]
fn one_by_one_matrix_is_rejected() {
    let dir = TempDir::new().unwrap();
    let mat = write_file(dir.path(), "tiny.csv", "a\n0.0\n");
    let (code, v) = run_report(&["embed", "--matrix", &mat]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "insufficient-data");
}

#[test]
fn malformed_matrices_are_rejected() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [
        ("ragged.csv", "0.0,1.0,2.0\n1.0,0.0\n"),
        ("asym.csv", "0.0,1.0\n2.0,0.0\n"),
        ("negative.csv", "0.0,-1.0\n-1.0,0.0\n"),
        ("diag.csv", "0.5,1.0\n1.0,0.0\n"),
        ("text.csv", "a,b\nx,y\n0.0,1.0\n"),
    ] {
        let mat = write_file(dir.path(), name, body);
        let (code, _) = run_report(&["embed", "--matrix", &mat]);
        assert_eq!(code, 1, "{name} should be rejected as malformed");
    }
}

#[test]
fn embed_can_induce_its_own_matrix() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", TWO_PROJECTION_CONFIG);
    let pts = write_file(dir.path(), "pts.csv", SQUARE_PROBES_CSV);
    let (code, v) = run_report(&["embed", "--config", &cfg, "--points", &pts]);
    assert_eq!(code, 0);
    assert_eq!(v["embedding"]["verdict"], "embeddable");
    // The induced matrix rides along in the report for this route.
    assert!(v["distance_matrix"].is_object());
}

// ----------------------------------------------------------------------
// demo-example1
// ----------------------------------------------------------------------

#[test]
fn demo_chain_holds_on_the_default_config() {
    let (code, v) = run_report(&["demo-example1", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["linearity"], "verified");
    assert_eq!(v["separation"]["verdict"], "pass");
    assert_eq!(v["axioms"]["verdict"], "pass");
    assert_eq!(v["embedding"]["verdict"], "embeddable");
    assert!(v["inner_product"]["polarization_residual"].as_f64().unwrap() <= 1e-10);
    // The planted orthogonal pair: <(2,0),(0,3)> integrates to zero.
    let fixture = &v["inner_product"]["orthogonal_fixture"];
    assert!(fixture["value"].as_f64().unwrap().abs() <= 1e-12);
}

#[test]
fn demo_chain_breaks_on_a_constant_family() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", CONSTANT_FAMILY_CONFIG);
    let (code, v) = run_report(&["demo-example1", "--config", &cfg, "--seed", "3"]);
    assert_eq!(code, 2);
    assert_eq!(v["separation"]["verdict"], "fail");
}

// ----------------------------------------------------------------------
// Artifacts
// ----------------------------------------------------------------------

#[test]
fn out_dir_receives_matrix_report_and_coordinates() {
    let dir = TempDir::new().unwrap();
    let cfg = write_file(dir.path(), "cfg.json", TWO_PROJECTION_CONFIG);
    let pts = write_file(dir.path(), "pts.csv", "0.0,0.0\n2.0,0.0\n0.0,3.0\n1.0,1.0\n");
    let out = dir.path().join("out");
    let out_str = out.to_string_lossy().into_owned();

    let r = run(&["induce", "--config", &cfg, "--points", &pts, "--seed", "4", "--out", &out_str]);
    assert_eq!(r.code, 0);

    // The written report is byte-for-byte the stdout report.
    let report = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert_eq!(report, r.stdout);

    // The matrix CSV round-trips shortest float representations exactly:
    // rho((0,0),(2,0)) = sqrt(2).
    let matrix = std::fs::read_to_string(out.join("distance_matrix.csv")).unwrap();
    assert!(
        matrix.contains("1.4142135623730951"),
        "sqrt(2) should appear at full precision:\n{matrix}"
    );
    let lines: Vec<&str> = matrix.lines().collect();
    assert_eq!(lines.len(), 5, "header plus one row per point");

    // Embedding from a matrix writes labeled coordinates.
    let mat = write_file(dir.path(), "line.csv", LINE_MATRIX_CSV);
    let out2 = dir.path().join("out2");
    let out2_str = out2.to_string_lossy().into_owned();
    let r = run(&["embed", "--matrix", &mat, "--out", &out2_str]);
    assert_eq!(r.code, 0);
    let coords = std::fs::read_to_string(out2.join("coordinates.csv")).unwrap();
    let mut lines = coords.lines();
    assert_eq!(lines.next(), Some("label,c0"));
    let first = lines.next().unwrap();
    assert!(first.starts_with("a,"), "labels come from the matrix header: {first}");

    // The report points at its own artifacts.
    let v = r.report();
    assert!(v["embedding"]["file"].as_str().unwrap().ends_with("coordinates.csv"));
}
