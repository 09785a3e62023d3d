//! Helpers shared by the CLI integration tests: spawn the real binary,
//! capture the report, and build the config fixtures the tests reuse.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

/// The outcome of one binary invocation.
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// Parse stdout as the report envelope.
    pub fn report(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| {
            panic!(
                "stdout is not valid JSON ({e}):\n--- stdout ---\n{}\n--- stderr ---\n{}",
                self.stdout, self.stderr
            )
        })
    }
}

/// Run `metric-forge` with the given arguments and a scrubbed environment
/// (no stray term-budget override can leak in from the host shell).
pub fn run(args: &[&str]) -> Run {
    run_with_env(args, &[])
}

/// Same as [`run`], with extra environment variables set for this call.
pub fn run_with_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_metric-forge"));
    cmd.args(args).env_remove("METRIC_FORGE_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("failed to spawn metric-forge");
    Run {
        code: out.status.code().expect("binary was killed by a signal"),
        stdout: String::from_utf8(out.stdout).expect("stdout is not UTF-8"),
        stderr: String::from_utf8(out.stderr).expect("stderr is not UTF-8"),
    }
}

/// Every successful parse must agree with the process status; checking it
/// in one place keeps the individual tests focused on their own claims.
pub fn run_report(args: &[&str]) -> (i32, Value) {
    let r = run(args);
    let v = r.report();
    assert_eq!(
        v["exit_code"].as_i64(),
        Some(r.code as i64),
        "exit_code field disagrees with the process status"
    );
    (r.code, v)
}

/// Write `contents` under `dir` and hand back the path as a String for
/// direct use in argument lists.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> String {
    let path: PathBuf = dir.join(name);
    std::fs::write(&path, contents).expect("failed to write fixture");
    path.to_string_lossy().into_owned()
}

// ----------------------------------------------------------------------
// Fixture bodies
// ----------------------------------------------------------------------

/// Config with a named base-check kernel and nothing else.
pub fn kernel_config(name: &str) -> String {
    format!(r#"{{"version":"1","kernel":{{"name":"{name}"}}}}"#)
}

/// Two orthogonal projections of the plane, equal weight: the textbook
/// inducing triple whose metric is Euclidean/sqrt(2).
pub const TWO_PROJECTION_CONFIG: &str = r#"{
  "version": "1",
  "family": {"name": "linear-functionals", "dim": 2},
  "measure": {"kind": "discrete", "atoms": [
    {"point": [1.0, 0.0], "weight": 0.5},
    {"point": [0.0, 1.0], "weight": 0.5}
  ]},
  "base": {"name": "squared-euclidean"}
}"#;

/// A single projection: blind along the second coordinate, so the induced
/// distance is only a pseudometric on the plane.
pub const SINGLE_PROJECTION_CONFIG: &str = r#"{
  "version": "1",
  "family": {"name": "linear-functionals", "dim": 2},
  "measure": {"kind": "discrete", "atoms": [
    {"point": [1.0, 0.0], "weight": 1.0}
  ]},
  "base": {"name": "squared-euclidean"}
}"#;

/// Scaling family against a seeded uniform sampler on [0, 1).
pub const SAMPLER_CONFIG: &str = r#"{
  "version": "1",
  "family": {"name": "scaling"},
  "measure": {"kind": "sampler", "distribution": "uniform", "lo": 0.0, "hi": 1.0},
  "base": {"name": "squared-euclidean"}
}"#;

/// Constant family: every distance collapses to zero.
pub const CONSTANT_FAMILY_CONFIG: &str = r#"{
  "version": "1",
  "family": {"name": "constant", "value": [3.0]},
  "measure": {"kind": "discrete", "atoms": [{"point": [0.0], "weight": 1.0}]},
  "base": {"name": "squared-euclidean"}
}"#;

/// Corner probes of the unit square, one point per row.
pub const SQUARE_PROBES_CSV: &str = "0.0,0.0\n0.0,1.0\n1.0,0.0\n1.0,1.0\n";

/// Scalar probe points for kernel checks.
pub const REAL_PROBES_CSV: &str = "0.0\n1.0\n-1.5\n2.25\n0.75\n-3.0\n";

/// The path metric of three collinear points, with a header row.
pub const LINE_MATRIX_CSV: &str = "a,b,c\n0.0,1.0,2.0\n1.0,0.0,1.0\n2.0,1.0,0.0\n";

/// A star: hub at distance 1 from three leaves, leaves pairwise 2. The
/// triangle inequality holds but no Euclidean picture does.
pub const STAR_MATRIX_CSV: &str =
    "hub,l1,l2,l3\n0.0,1.0,1.0,1.0\n1.0,0.0,2.0,2.0\n1.0,2.0,0.0,2.0\n1.0,2.0,2.0,0.0\n";
