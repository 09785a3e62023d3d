//! Symmetric kernels and negative-definiteness certificates.
//!
//! A kernel `L` is *negative definite* on a set of points when every
//! zero-sum coefficient vector `c` gives a nonpositive quadratic form
//! `sum_ij L(x_i, x_j) c_i c_j`. Distances whose squares have this property
//! are exactly the ones that embed isometrically into Hilbert space, which
//! is why everything downstream (metric induction, embedding, m-forms)
//! leans on the checks in this module.
//!
//! The checks are randomized **falsifiers**: they hunt for violations over
//! user-supplied sample points and report a reproducible witness when they
//! find one. A pass means "no violation found", never a proof.

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::fmath;
use crate::report::{CheckReport, Verdict, Witness};
use crate::rng;
use crate::sum::Accumulator;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

/// Symmetry slack allowed for user-supplied kernels; builtins must match
/// exactly.
const CUSTOM_SYMMETRY_TOLERANCE: f64 = 1e-12;

// ======================================================================
// Kernels
// ======================================================================

/// What slot a kernel is allowed to fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRole {
    /// Vanishes on the diagonal and is attested to be negative definite;
    /// eligible as the squared-distance base of an induced metric.
    SquaredDistance,
    /// No attestation; usable in checks but not for metric induction.
    General,
}

/// A symmetric real kernel on a value space `Z`.
///
/// Evaluation is shared behind an `Arc`, so kernels clone cheaply and are
/// safe to evaluate from several threads at once.
pub struct Kernel<Z: ?Sized> {
    label: String,
    role: KernelRole,
    builtin: bool,
    eval: Arc<dyn Fn(&Z, &Z) -> f64 + Send + Sync>,
}

impl<Z: ?Sized> Clone for Kernel<Z> {
    fn clone(&self) -> Self {
        Kernel {
            label: self.label.clone(),
            role: self.role,
            builtin: self.builtin,
            eval: Arc::clone(&self.eval),
        }
    }
}

impl<Z: ?Sized> core::fmt::Debug for Kernel<Z> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Kernel")
            .field("label", &self.label)
            .field("role", &self.role)
            .finish_non_exhaustive()
    }
}

impl<Z: ?Sized> Kernel<Z> {
    /// Wrap a user-supplied symmetric function.
    ///
    /// Passing `KernelRole::SquaredDistance` is an attestation that the
    /// function vanishes on the diagonal and is negative definite; the
    /// metric-induction entry points trust it.
    pub fn custom<F>(label: impl Into<String>, role: KernelRole, f: F) -> Self
    where
        F: Fn(&Z, &Z) -> f64 + Send + Sync + 'static,
    {
        Kernel { label: label.into(), role, builtin: false, eval: Arc::new(f) }
    }

    fn builtin<F>(label: &str, role: KernelRole, f: F) -> Self
    where
        F: Fn(&Z, &Z) -> f64 + Send + Sync + 'static,
    {
        Kernel { label: String::from(label), role, builtin: true, eval: Arc::new(f) }
    }

    pub fn eval(&self, u: &Z, v: &Z) -> f64 {
        (self.eval)(u, v)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn role(&self) -> KernelRole {
        self.role
    }

    /// Probe symmetry on all ordered pairs of `probes`.
    ///
    /// Builtins must agree bit for bit; user kernels get 1e-12 absolute.
    pub fn verify_symmetry(&self, probes: &[Z]) -> Result<()>
    where
        Z: Sized,
    {
        let tolerance = if self.builtin { 0.0 } else { CUSTOM_SYMMETRY_TOLERANCE };
        for (i, u) in probes.iter().enumerate() {
            for v in probes.iter().skip(i + 1) {
                let delta = fmath::abs(self.eval(u, v) - self.eval(v, u));
                if delta > tolerance {
                    return Err(Error::AsymmetricKernel { delta, tolerance });
                }
            }
        }
        Ok(())
    }
}

impl Kernel<f64> {
    /// `(u - v)^2` — the canonical negative definite kernel on the line.
    pub fn squared_difference() -> Self {
        Kernel::builtin("squared-difference", KernelRole::SquaredDistance, |u, v| {
            let d = u - v;
            d * d
        })
    }

    /// `|u - v|` — negative definite and strictly so on distinct reals.
    pub fn absolute_difference() -> Self {
        Kernel::builtin("absolute-difference", KernelRole::SquaredDistance, |u, v| {
            fmath::abs(u - v)
        })
    }

    /// `u * v` — positive definite, the standard counterexample for the
    /// checks. Carries no squared-distance attestation.
    pub fn product() -> Self {
        Kernel::builtin("product", KernelRole::General, |u, v| u * v)
    }
}

impl Kernel<Vec<f64>> {
    /// `|u - v|^2` on real vectors.
    pub fn squared_euclidean() -> Self {
        Kernel::builtin("squared-euclidean", KernelRole::SquaredDistance, |u: &Vec<f64>, v| {
            debug_assert_eq!(u.len(), v.len());
            u.iter().zip(v.iter()).map(|(a, b)| (a - b) * (a - b)).sum()
        })
    }

    /// `|u - v|` on real vectors; reduces to `absolute-difference` in one
    /// dimension.
    pub fn euclidean() -> Self {
        Kernel::builtin("euclidean", KernelRole::SquaredDistance, |u: &Vec<f64>, v| {
            debug_assert_eq!(u.len(), v.len());
            fmath::sqrt(u.iter().zip(v.iter()).map(|(a, b)| (a - b) * (a - b)).sum())
        })
    }

    /// `<u, v>` — positive definite counterexample on vectors.
    pub fn dot_product() -> Self {
        Kernel::builtin("dot-product", KernelRole::General, |u: &Vec<f64>, v| {
            debug_assert_eq!(u.len(), v.len());
            u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
        })
    }
}

// ======================================================================
// Coefficient vectors
// ======================================================================

/// A zero-sum coefficient vector.
///
/// Construction renormalizes by subtracting the mean, so the zero-sum
/// invariant holds to within 1e-12 absolute no matter what was passed in.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    values: Vec<f64>,
}

impl CoefficientVector {
    /// Center `values` to zero sum. Needs at least two entries.
    pub fn zero_sum(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: values.len() });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: format!("coefficient {bad}") });
        }
        let mean = crate::sum::sum(values.iter().copied()) / values.len() as f64;
        let centered = values.into_iter().map(|v| v - mean).collect();
        Ok(CoefficientVector { values: centered })
    }

    /// Wrap values already centered by the caller (internal draw paths).
    pub(crate) fn from_centered(values: Vec<f64>) -> Self {
        CoefficientVector { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(fmath::abs(*v)))
    }
}

// ======================================================================
// Quadratic forms
// ======================================================================

/// Evaluate the kernel on all ordered pairs of `points`, row-major.
///
/// The kernel is assumed symmetric (see [`Kernel::verify_symmetry`]); each
/// unordered pair is evaluated once and mirrored, so the matrix is exactly
/// symmetric.
fn kernel_matrix<Z, F>(eval: &F, points: &[Z]) -> Result<Vec<f64>>
where
    F: Fn(&Z, &Z) -> f64 + ?Sized,
{
    let n = points.len();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = eval(&points[i], &points[j]);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("kernel value at point pair ({i}, {j})"),
                });
            }
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    Ok(m)
}

/// `sum_ij m[i][j] c_i c_j` with compensated accumulation in row-major
/// order. All form evaluations in this module flow through here so that
/// witnesses re-evaluate bit for bit.
fn form_from_matrix(m: &[f64], n: usize, c: &[f64]) -> f64 {
    let mut acc = Accumulator::new();
    for i in 0..n {
        for j in 0..n {
            acc.add(m[i * n + j] * c[i] * c[j]);
        }
    }
    acc.total()
}

/// The exact double sum `sum_ij L(x_i, x_j) c_i c_j`.
///
/// Deterministic: same inputs, same bits. Errors on a length mismatch or a
/// non-finite kernel value.
pub fn quadratic_form<Z>(
    kernel: &Kernel<Z>,
    points: &[Z],
    coefficients: &CoefficientVector,
) -> Result<f64> {
    if points.len() != coefficients.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            got: coefficients.len(),
        });
    }
    let m = kernel_matrix(&*kernel.eval, points)?;
    Ok(form_from_matrix(&m, points.len(), coefficients.values()))
}

// ======================================================================
// Randomized certificates
// ======================================================================

/// Orthonormal basis of the zero-sum hyperplane in R^s (Helmert rows).
///
/// Row k has k leading entries `1/sqrt(k(k+1))` followed by `-k/sqrt(k(k+1))`.
fn helmert_basis(s: usize) -> Vec<Vec<f64>> {
    let mut basis = Vec::with_capacity(s - 1);
    for k in 1..s {
        let norm = fmath::sqrt((k * (k + 1)) as f64);
        let mut row = vec![0.0; s];
        for item in row.iter_mut().take(k) {
            *item = 1.0 / norm;
        }
        row[k] = -(k as f64) / norm;
        basis.push(row);
    }
    basis
}

/// One candidate configuration evaluated by the check engine.
struct Candidate {
    indices: Vec<usize>,
    coefficients: Vec<f64>,
    value: f64,
}

/// Shared engine behind [`check_negative_definite`],
/// [`check_strictly_negative_definite`], and the m = 2 path of the m-form
/// checker (which guarantees their verdicts agree on shared seeds).
///
/// Per trial: draw a subset of at least two points and a zero-sum normal
/// coefficient vector, evaluate the form. In strict mode, additionally
/// evaluate the spectral candidate directions of the subset — eigenvectors
/// of the kernel matrix restricted to the zero-sum hyperplane — so that
/// nontrivial null directions are found deterministically instead of
/// waiting on a measure-zero random hit.
pub(crate) fn run_quadratic_check<Z, F>(
    eval: &F,
    points: &[Z],
    trials: u64,
    seed: u64,
    tolerance: f64,
    strict: bool,
) -> Result<CheckReport<Z>>
where
    Z: Clone + PartialEq,
    F: Fn(&Z, &Z) -> f64 + ?Sized,
{
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter(String::from("trials must be >= 1")));
    }
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Error::InvalidParameter(String::from(
            "tolerance must be finite and nonnegative",
        )));
    }
    if strict {
        for i in 0..n {
            for j in (i + 1)..n {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint { first: i, second: j });
                }
            }
        }
    }

    let nontrivial = tolerance.max(f64::MIN_POSITIVE);
    let mut worst: Option<Candidate> = None; // maximum form value seen
    let mut near_zero: Option<Candidate> = None; // strict: |value| <= tol, nontrivial c
    let mut all_zero = true;

    let consider = |cand: Candidate, worst: &mut Option<Candidate>,
                        near_zero: &mut Option<Candidate>,
                        all_zero: &mut bool| {
        if cand.value != 0.0 {
            *all_zero = false;
        }
        let max_abs_c = cand.coefficients.iter().fold(0.0f64, |m, v| m.max(fmath::abs(*v)));
        if strict
            && fmath::abs(cand.value) <= tolerance
            && max_abs_c > fmath::sqrt(nontrivial)
            && near_zero
                .as_ref()
                .map(|b| fmath::abs(cand.value) < fmath::abs(b.value))
                .unwrap_or(true)
        {
            *near_zero = Some(Candidate {
                indices: cand.indices.clone(),
                coefficients: cand.coefficients.clone(),
                value: cand.value,
            });
        }
        if worst.as_ref().map(|b| cand.value > b.value).unwrap_or(true) {
            *worst = Some(cand);
        }
    };

    for trial in 0..trials {
        let mut trial_rng = rng::stream_rng(seed, trial);
        let indices = rng::draw_subset(&mut trial_rng, n);
        let s = indices.len();
        let subset: Vec<Z> = indices.iter().map(|&i| points[i].clone()).collect();
        let m = kernel_matrix(eval, &subset)?;

        let c = rng::draw_zero_sum(&mut trial_rng, s);
        let value = form_from_matrix(&m, s, &c);
        consider(
            Candidate { indices: indices.clone(), coefficients: c, value },
            &mut worst,
            &mut near_zero,
            &mut all_zero,
        );

        if strict {
            // Restrict the form to the zero-sum hyperplane and probe its
            // eigendirections: the extremal and null directions of the form.
            let basis = helmert_basis(s);
            let r = s - 1;
            let mut restricted = vec![0.0; r * r];
            for a in 0..r {
                for b in a..r {
                    let mut acc = Accumulator::new();
                    for i in 0..s {
                        for j in 0..s {
                            acc.add(m[i * s + j] * basis[a][i] * basis[b][j]);
                        }
                    }
                    let v = acc.total();
                    restricted[a * r + b] = v;
                    restricted[b * r + a] = v;
                }
            }
            let eig = symmetric_eigen(&restricted, r)?;
            for v in &eig.vectors {
                let mut c_spec = vec![0.0; s];
                for (a, row) in basis.iter().enumerate() {
                    for (i, b) in row.iter().enumerate() {
                        c_spec[i] += v[a] * b;
                    }
                }
                let value = form_from_matrix(&m, s, &c_spec);
                consider(
                    Candidate { indices: indices.clone(), coefficients: c_spec, value },
                    &mut worst,
                    &mut near_zero,
                    &mut all_zero,
                );
            }
        }
    }

    let witness_of = |cand: &Candidate| Witness {
        points: cand.indices.iter().map(|&i| points[i].clone()).collect(),
        coefficients: cand.coefficients.clone(),
        value: cand.value,
    };

    let worst = worst.expect("at least one trial ran");
    let mut report;
    if worst.value > tolerance {
        report = CheckReport::new(Verdict::Fail, worst.value, trials, tolerance);
        report.witness = Some(witness_of(&worst));
    } else if let Some(nz) = near_zero {
        // Strict mode: the form vanishes (to tolerance) on a coefficient
        // vector that is clearly not zero.
        report = CheckReport::new(Verdict::Fail, nz.value, trials, tolerance);
        report.witness = Some(witness_of(&nz));
    } else if all_zero && !strict {
        report = CheckReport::new(Verdict::Degenerate, 0.0, trials, tolerance);
    } else {
        report = CheckReport::new(Verdict::Pass, worst.value, trials, tolerance);
        report.witness = Some(witness_of(&worst));
    }
    Ok(report)
}

/// Randomized negative-definiteness check.
///
/// Per trial, draws a random subset of `sample_points` and a random zero-sum
/// coefficient vector, and evaluates the quadratic form. Fails when some
/// form exceeds `tolerance`, with the maximizing configuration as witness.
/// Returns `Degenerate` when every evaluated form was identically zero.
pub fn check_negative_definite<Z: Clone + PartialEq>(
    kernel: &Kernel<Z>,
    sample_points: &[Z],
    trials: u64,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport<Z>> {
    kernel.verify_symmetry(sample_points)?;
    run_quadratic_check(&*kernel.eval, sample_points, trials, seed, tolerance, false)
}

/// Strict variant: also fails when a form within `tolerance` of zero is
/// attained by a coefficient vector with `max |c_i| > sqrt(tolerance)` —
/// equality attained nontrivially, so the kernel cannot separate the points.
///
/// Sample points must be pairwise distinct; duplicates make strictness
/// meaningless and are rejected.
pub fn check_strictly_negative_definite<Z: Clone + PartialEq>(
    kernel: &Kernel<Z>,
    sample_points: &[Z],
    trials: u64,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport<Z>> {
    kernel.verify_symmetry(sample_points)?;
    run_quadratic_check(&*kernel.eval, sample_points, trials, seed, tolerance, true)
}

// ======================================================================
// Tests
// ======================================================================
