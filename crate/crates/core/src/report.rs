//! Verdicts, witnesses, and the report structure shared by every
//! certificate-style check in the library.

use alloc::vec::Vec;

/// Outcome of a randomized falsification check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No violation found. A falsifier's pass means exactly that — it is not
    /// a proof.
    Pass,
    /// A violation was found; the report carries a reproducible witness.
    Fail,
    /// Every evaluated form was identically zero, so the check never probed
    /// anything. Distinct from `Pass` on purpose: an all-zero kernel
    /// satisfies the inequalities vacuously and callers should know.
    Degenerate,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

/// The configuration that achieved the reported extremal value.
///
/// Re-evaluating the same operation on `points` and `coefficients` must
/// reproduce `value` to 1e-12 relative; tests pin that down.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<P> {
    pub points: Vec<P>,
    pub coefficients: Vec<f64>,
    pub value: f64,
}

/// Report carried by every check in this crate.
///
/// `worst_value` is the extremal value found, in the convention of the
/// operation that produced the report:
///
/// * quadratic (kernel) checks record the **maximum** form value; `Fail`
///   implies `worst_value > tolerance`;
/// * m-form checks record the **minimum** signed value; `Fail` implies
///   `worst_value < -tolerance` (or a near-zero strictness witness);
/// * separation checks record the least-separated pair's best evidence;
///   `Fail` implies `worst_value <= tolerance`;
/// * metric-axiom checks record the largest violation magnitude (0 when
///   clean).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport<P> {
    pub verdict: Verdict,
    pub worst_value: f64,
    pub witness: Option<Witness<P>>,
    pub trials: u64,
    pub tolerance: f64,
    /// Largest integration standard error observed while producing the
    /// values this report judges; `None` when every input was deterministic.
    pub stderr_context: Option<f64>,
    /// Set when every probed distance (or form scale) was indistinguishable
    /// from zero — the structure collapses to a single point.
    pub zero_diameter: bool,
}

impl<P> CheckReport<P> {
    pub(crate) fn new(verdict: Verdict, worst_value: f64, trials: u64, tolerance: f64) -> Self {
        CheckReport {
            verdict,
            worst_value,
            witness: None,
            trials,
            tolerance,
            stderr_context: None,
            zero_diameter: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}
