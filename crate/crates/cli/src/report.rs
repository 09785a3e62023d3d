//! JSON report envelope and section DTOs.
//!
//! Reports are the product of the tool: one JSON document per run with
//! every parameter needed to reproduce it. Serialization is fully
//! deterministic — struct field order is fixed, parameter maps are
//! sorted, and there are no timestamps — so identical runs produce
//! byte-identical bytes. The shape is pinned by `schema/report.schema.json`.

use metric_forge_core::{CheckReport, EmbedVerdict, EmbeddingResult, Verdict, Witness};
use serde::Serialize;

pub type Parameters = serde_json::Map<String, serde_json::Value>;

#[derive(Debug, Serialize)]
pub struct Envelope {
    pub tool: &'static str,
    pub format_version: &'static str,
    pub command: &'static str,
    pub parameters: Parameters,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub linearity: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<CheckDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<CheckDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_matrix: Option<MatrixDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_product: Option<InnerProductDto>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingDto>,
    pub exit_code: i32,
}

impl Envelope {
    pub fn new(command: &'static str, parameters: Parameters) -> Self {
        Envelope {
            tool: "metric-forge",
            format_version: crate::config::FORMAT_VERSION,
            command,
            parameters,
            error: None,
            check: None,
            linearity: None,
            separation: None,
            axioms: None,
            distance_matrix: None,
            inner_product: None,
            embedding: None,
            exit_code: 0,
        }
    }

    /// The exact bytes every consumer sees (stdout and report.json alike).
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self)
            .expect("report serialization cannot fail");
        text.push('\n');
        text
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorDto {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct WitnessDto {
    pub points: Vec<Vec<f64>>,
    pub coefficients: Vec<f64>,
    pub value: f64,
}

impl WitnessDto {
    fn from_witness(w: &Witness<Vec<f64>>) -> Self {
        WitnessDto {
            points: w.points.clone(),
            coefficients: w.coefficients.clone(),
            value: w.value,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckDto {
    pub verdict: &'static str,
    pub worst_value: f64,
    pub trials: u64,
    pub tolerance: f64,
    pub zero_diameter: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr_context: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDto>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Degenerate => "degenerate",
    }
}

impl CheckDto {
    pub fn from_report(r: &CheckReport<Vec<f64>>) -> Self {
        CheckDto {
            verdict: verdict_name(r.verdict),
            worst_value: r.worst_value,
            trials: r.trials,
            tolerance: r.tolerance,
            zero_diameter: r.zero_diameter,
            stderr_context: r.stderr_context,
            witness: r.witness.as_ref().map(WitnessDto::from_witness),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MatrixDto {
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub max_stderr: f64,
    pub clamped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct EstimateDto {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Serialize)]
pub struct InnerProductDto {
    pub labels: Vec<String>,
    pub gram: Vec<Vec<f64>>,
    pub polarization_residual: f64,
    /// inner((2,0), (0,3)) under the canonical two-functional setup — the
    /// orthogonality fixture; present only for 2-d linear configurations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthogonal_fixture: Option<EstimateDto>,
}

#[derive(Debug, Serialize)]
pub struct EmbeddingDto {
    pub verdict: &'static str,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub rank: usize,
    pub tol_rel: f64,
    pub residual: f64,
    pub coordinates: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl EmbeddingDto {
    pub fn from_result(r: &EmbeddingResult) -> Self {
        EmbeddingDto {
            verdict: match r.verdict {
                EmbedVerdict::Embeddable => "embeddable",
                EmbedVerdict::NotEmbeddable => "not-embeddable",
            },
            eigenvalues: r.eigenvalues.clone(),
            min_eigenvalue: r.min_eigenvalue,
            rank: r.rank,
            tol_rel: r.tol_rel,
            residual: r.residual,
            coordinates: r.coordinates.clone(),
            file: None,
        }
    }
}
