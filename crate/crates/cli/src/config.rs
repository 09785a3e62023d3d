//! Declarative run configuration.
//!
//! One JSON document per run. Unknown fields are rejected — a typo in a
//! tolerance name must not silently revert to a default — and every
//! stochastic stage requires the top-level seed to be present (flag or
//! config), which is then fanned out deterministically per stage.

use crate::error::{usage, CliError, Result};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Config format version tag; must be "1".
    #[serde(default)]
    pub version: Option<String>,
    #[serde(default)]
    pub kernel: Option<KernelSpec>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub measure: Option<MeasureSpec>,
    #[serde(default)]
    pub base: Option<KernelSpec>,
    /// Probe/sample points CSV (one point per row).
    #[serde(default)]
    pub points: Option<PathBuf>,
    /// Distance matrix CSV (square, optional header row of labels).
    #[serde(default)]
    pub matrix: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    /// Even arity for the m-linear form checks.
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub strict: Option<bool>,
    /// Treat the induced pseudometric as a metric on the quotient space.
    #[serde(default)]
    pub quotient: Option<bool>,
    /// Monte Carlo samples per integral under sampler measures.
    #[serde(default)]
    pub mc_samples: Option<u64>,
    /// Random triples for the triangle-inequality check.
    #[serde(default)]
    pub triple_trials: Option<u64>,
    /// Support draws for the separation check under sampler measures.
    #[serde(default)]
    pub support_count: Option<usize>,
    #[serde(default)]
    pub require_metric: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        match config.version.as_deref() {
            Some(FORMAT_VERSION) => Ok(config),
            Some(other) => Err(usage(format!(
                "{}: unsupported config version '{other}' (expected '{FORMAT_VERSION}')",
                path.display()
            ))),
            None => Err(usage(format!(
                "{}: missing \"version\" (expected '{FORMAT_VERSION}')",
                path.display()
            ))),
        }
    }

    /// Load the config if a path was given, otherwise start from defaults
    /// (commands with built-in defaults, like demo-example1, allow this).
    pub fn load_or_default(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(RunConfig::default()),
        }
    }
}

/// A kernel by registry name. `base` selects the two-argument kernel a
/// composite m-kernel (like `pairing`) is built from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
}

impl KernelSpec {
    pub fn named(name: &str) -> Self {
        KernelSpec { name: name.to_string(), base: None }
    }
}

/// A function family by registry name plus its parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    /// Domain dimension (linear-functionals, scaling, identity).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// The fixed image of a constant family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub point: Vec<f64>,
    pub weight: f64,
}

/// An index measure: discrete atoms, a quadrature grid over an interval,
/// or a seeded sampler. Grid and sampler indices are scalar; they reach
/// the family as one-dimensional points.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<AtomSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    /// "uniform" or "normal" (sampler kind only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_dev: Option<f64>,
}
