//! Error type shared by every module in this crate.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong inside the library.
///
/// Numerical *verdicts* (a kernel failing a negative-definiteness check, a
/// matrix turning out not to be embeddable) are not errors; they are reported
/// through [`crate::CheckReport`] and [`crate::EmbeddingResult`]. Errors are
/// reserved for violated preconditions and broken evaluations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Fewer points, atoms, or samples than the operation needs.
    InsufficientData { needed: usize, got: usize },
    /// Two lengths that must agree (points vs. coefficients, row widths) do not.
    DimensionMismatch { expected: usize, got: usize },
    /// An operation that requires pairwise distinct points saw a duplicate.
    DuplicatePoint { first: usize, second: usize },
    /// A measure with no support, a negative weight, or a non-finite weight.
    InvalidMeasure(String),
    /// A kernel, family, or integrand evaluation produced NaN or infinity.
    NonFinite { context: String },
    /// A numeric argument is outside its documented range.
    InvalidParameter(String),
    /// The object does not support the requested operation
    /// (for example inner products over a family without the linearity flag).
    Unsupported(String),
    /// Exact enumeration would exceed the configured term budget.
    BudgetExceeded { required: u128, budget: u64 },
    /// A sign certificate failed: the computed value violates the
    /// nonnegativity the operation's contract requires.
    Certificate { value: f64, tolerance: f64 },
    /// m-kernels must have even arity of at least two.
    OddArity(usize),
    /// A user-supplied kernel failed its symmetry probe.
    AsymmetricKernel { delta: f64, tolerance: f64 },
    /// The eigensolver did not converge (pathological input).
    NoConvergence { iterations: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} items, got {got}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::DuplicatePoint { first, second } => {
                write!(f, "points {first} and {second} are equal, but must be pairwise distinct")
            }
            Error::InvalidMeasure(why) => write!(f, "invalid measure: {why}"),
            Error::NonFinite { context } => write!(f, "non-finite value: {context}"),
            Error::InvalidParameter(why) => write!(f, "invalid parameter: {why}"),
            Error::Unsupported(why) => write!(f, "unsupported operation: {why}"),
            Error::BudgetExceeded { required, budget } => write!(
                f,
                "exact enumeration needs {required} terms but the budget is {budget}; \
                 use the sampled estimator (m_form_sampled) for a Monte Carlo estimate"
            ),
            Error::Certificate { value, tolerance } => write!(
                f,
                "sign certificate failed: value {value:e} is below -{tolerance:e}"
            ),
            Error::OddArity(m) => write!(f, "m-kernel arity must be even and >= 2, got {m}"),
            Error::AsymmetricKernel { delta, tolerance } => write!(
                f,
                "kernel symmetry probe failed: |k(u,v) - k(v,u)| = {delta:e} > {tolerance:e}"
            ),
            Error::NoConvergence { iterations } => {
                write!(f, "eigensolver failed to converge within {iterations} iterations")
            }
        }
    }
}

impl core::error::Error for Error {}
