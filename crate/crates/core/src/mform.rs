//! m-negative definite kernels and L^m-type distances.
//!
//! The two-argument theory generalizes: a symmetric kernel `L` of `m`
//! arguments (`m` even) is *m-negative definite* when the signed form
//!
//! ```text
//! (-1)^(m/2) · Σ … Σ L(x_{i1}, …, x_{im}) · h_{i1} ⋯ h_{im}  >=  0
//! ```
//!
//! for every zero-sum `h`. Strict and strong variants pin down when the
//! form vanishes; integrating `L` through a function family yields an
//! induced m-kernel `R_m`, and evaluating `R_m` on diagonal differences
//! gives the L^m-type distances. All form evaluations here are exact
//! enumerations over index tuples (with a term budget and a sampled
//! estimator as the escape hatch), so every certificate is replayable.

use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::fmath;
use crate::kernel::{CoefficientVector, Kernel};
use crate::measure::{IndexMeasure, IntegralEstimate};
use crate::metric::IntegrationPolicy;
use crate::report::{CheckReport, Verdict, Witness};
use crate::rng;
use crate::sum::Accumulator;
use crate::vector::VectorPoint;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

/// Default cap on the number of `n^m` terms an exact form evaluation may
/// enumerate before demanding the sampled estimator instead.
pub const DEFAULT_TERM_BUDGET: u64 = 10_000_000;

/// Relative slack when probing m-kernel symmetry under permutations.
const MKERNEL_SYMMETRY_TOLERANCE: f64 = 1e-12;

/// The sign `(-1)^(m/2)` that makes the defining form nonnegative.
fn sign_factor(m: usize) -> f64 {
    if (m / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

// ======================================================================
// m-kernels
// ======================================================================

/// A symmetric kernel of `m` arguments (`m` even) on a value space `Z`.
pub struct MKernel<Z: ?Sized> {
    label: String,
    m: usize,
    eval: Arc<dyn Fn(&[&Z]) -> f64 + Send + Sync>,
}

impl<Z: ?Sized> Clone for MKernel<Z> {
    fn clone(&self) -> Self {
        MKernel { label: self.label.clone(), m: self.m, eval: Arc::clone(&self.eval) }
    }
}

impl<Z: ?Sized> core::fmt::Debug for MKernel<Z> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MKernel")
            .field("label", &self.label)
            .field("m", &self.m)
            .finish_non_exhaustive()
    }
}

impl<Z: ?Sized> MKernel<Z> {
    /// Wrap a symmetric `m`-argument function. `m` must be even and at
    /// least 2 — odd arities have no sign convention that keeps the form
    /// real and one-signed.
    pub fn new<F>(label: impl Into<String>, m: usize, f: F) -> Result<Self>
    where
        F: Fn(&[&Z]) -> f64 + Send + Sync + 'static,
    {
        if m % 2 != 0 {
            return Err(Error::OddArity(m));
        }
        if m < 2 {
            return Err(Error::InvalidParameter(String::from("arity must be at least 2")));
        }
        Ok(MKernel { label: label.into(), m, eval: Arc::new(f) })
    }

    pub fn eval(&self, args: &[&Z]) -> f64 {
        debug_assert_eq!(args.len(), self.m);
        (self.eval)(args)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The same kernel with flipped sign (handy as a failing fixture).
    pub fn negated(&self) -> Self
    where
        Z: 'static,
    {
        let inner = Arc::clone(&self.eval);
        MKernel {
            label: format!("negated-{}", self.label),
            m: self.m,
            eval: Arc::new(move |args| -(inner)(args)),
        }
    }

    /// Probe symmetry: random argument tuples from `probes`, compared
    /// against random permutations of themselves, to 1e-12 relative.
    pub fn verify_symmetry(&self, probes: &[Z], seed: u64) -> Result<()>
    where
        Z: Sized,
    {
        if probes.is_empty() {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        let mut r = rng::stream_rng(seed, 0);
        for _ in 0..16 {
            let picks: Vec<usize> =
                (0..self.m).map(|_| r.gen_range(0..probes.len())).collect();
            let args: Vec<&Z> = picks.iter().map(|&i| &probes[i]).collect();
            let reference = self.eval(&args);
            let mut shuffled = args.clone();
            shuffled.shuffle(&mut r);
            let permuted = self.eval(&shuffled);
            let delta = fmath::abs(reference - permuted);
            if delta > MKERNEL_SYMMETRY_TOLERANCE * (1.0 + fmath::abs(reference)) {
                return Err(Error::AsymmetricKernel {
                    delta,
                    tolerance: MKERNEL_SYMMETRY_TOLERANCE,
                });
            }
        }
        Ok(())
    }
}

impl<Z> MKernel<Z>
where
    Z: 'static,
{
    /// View a two-argument kernel as an m-kernel with m = 2.
    pub fn from_kernel(kernel: &Kernel<Z>) -> Self {
        let kernel = kernel.clone();
        MKernel {
            label: String::from(kernel.label()),
            m: 2,
            eval: Arc::new(move |args: &[&Z]| kernel.eval(args[0], args[1])),
        }
    }

    /// The symmetrized pairing kernel of arity 4: the mean of
    /// `base(a,b)·base(c,d)` over the three ways of pairing four
    /// arguments. With a negative definite base this is 4-negative
    /// definite, but it vanishes whenever all four arguments coincide —
    /// so it induces a degenerate (identically zero) L^4 distance.
    pub fn symmetrized_pairing(base: &Kernel<Z>) -> Self {
        let base = base.clone();
        MKernel {
            label: format!("pairing-{}", base.label()),
            m: 4,
            eval: Arc::new(move |args: &[&Z]| {
                let (a, b, c, d) = (args[0], args[1], args[2], args[3]);
                (base.eval(a, b) * base.eval(c, d)
                    + base.eval(a, c) * base.eval(b, d)
                    + base.eval(a, d) * base.eval(b, c))
                    / 3.0
            }),
        }
    }
}

// ======================================================================
// Exact and sampled m-forms
// ======================================================================

/// Run `f` over all `n^m` index tuples, last position fastest (row-major).
fn for_each_tuple<F>(n: usize, m: usize, mut f: F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    let mut idx = vec![0usize; m];
    loop {
        f(&idx)?;
        let mut done = true;
        let mut k = m;
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            if idx[k] < n {
                done = false;
                break;
            }
            idx[k] = 0;
        }
        if done {
            return Ok(());
        }
    }
}

fn check_budget(n: usize, m: usize, budget: u64) -> Result<()> {
    let required = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// The exact signed m-form
/// `(-1)^(m/2) Σ…Σ L(x_{i1},…,x_{im}) h_{i1}⋯h_{im}` over all `n^m`
/// tuples, with compensated accumulation. Deterministic.
///
/// Costs `n^m` kernel evaluations; `budget` caps that (use
/// [`m_form_sampled`] past the cap — the error says so too).
pub fn m_form_with_budget<Z>(
    kernel: &MKernel<Z>,
    points: &[Z],
    h: &CoefficientVector,
    budget: u64,
) -> Result<f64> {
    let n = points.len();
    if n != h.len() {
        return Err(Error::DimensionMismatch { expected: n, got: h.len() });
    }
    let m = kernel.m();
    check_budget(n, m, budget)?;
    let hv = h.values();
    let mut acc = Accumulator::new();
    let mut args: Vec<&Z> = Vec::with_capacity(m);
    for_each_tuple(n, m, |idx| {
        args.clear();
        let mut weight = 1.0;
        for &i in idx {
            args.push(&points[i]);
            weight *= hv[i];
        }
        let v = kernel.eval(&args);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: format!("m-kernel value at tuple {idx:?}"),
            });
        }
        acc.add(v * weight);
        Ok(())
    })?;
    Ok(sign_factor(m) * acc.total())
}

/// [`m_form_with_budget`] with the default term budget.
pub fn m_form<Z>(kernel: &MKernel<Z>, points: &[Z], h: &CoefficientVector) -> Result<f64> {
    m_form_with_budget(kernel, points, h, DEFAULT_TERM_BUDGET)
}

/// Monte Carlo estimator of the signed m-form: uniform draws over index
/// tuples, scaled by `n^m`. The standard error makes the budget escape
/// hatch honest.
pub fn m_form_sampled<Z>(
    kernel: &MKernel<Z>,
    points: &[Z],
    h: &CoefficientVector,
    samples: u64,
    seed: u64,
) -> Result<IntegralEstimate> {
    let n = points.len();
    if n != h.len() {
        return Err(Error::DimensionMismatch { expected: n, got: h.len() });
    }
    if samples < 2 {
        return Err(Error::InvalidParameter(String::from(
            "sampled m-form needs at least 2 samples",
        )));
    }
    let m = kernel.m();
    let sign = sign_factor(m);
    let hv = h.values();
    let mut values = Vec::with_capacity(samples as usize);
    let mut args: Vec<&Z> = Vec::with_capacity(m);
    for t in 0..samples {
        let mut r = rng::stream_rng(seed, t);
        args.clear();
        let mut weight = 1.0;
        for _ in 0..m {
            let i = r.gen_range(0..n);
            args.push(&points[i]);
            weight *= hv[i];
        }
        let v = kernel.eval(&args);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: format!("m-kernel value at sampled tuple (draw {t})"),
            });
        }
        values.push(sign * v * weight);
    }
    let count = samples as f64;
    let scale = libm_pow(n as f64, m as f64);
    let mean = crate::sum::sum(values.iter().copied()) / count;
    let mut sq = Accumulator::new();
    for v in &values {
        let d = v - mean;
        sq.add(d * d);
    }
    let stderr = fmath::sqrt((sq.total() / (count - 1.0)).max(0.0) / count);
    Ok(IntegralEstimate {
        value: scale * mean,
        stderr: scale * stderr,
        samples_used: samples,
    })
}

fn libm_pow(base: f64, exp: f64) -> f64 {
    fmath::powf(base, exp)
}

// ======================================================================
// Randomized m-negative definiteness checks
// ======================================================================

/// Randomized falsifier for m-negative definiteness: per trial, a random
/// point subset and a random zero-sum `h`; fail when some signed form
/// drops below `-tolerance`. `worst_value` is the *minimum* signed form
/// seen (the mirror of the two-argument convention, where the raw form's
/// maximum is reported).
pub fn check_m_negative_definite<Z: Clone + PartialEq>(
    kernel: &MKernel<Z>,
    sample_points: &[Z],
    trials: u64,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport<Z>> {
    run_m_check(kernel, sample_points, trials, seed, tolerance, false, DEFAULT_TERM_BUDGET)
}

/// Strict variant: additionally fails when a signed form within
/// `tolerance` of zero is attained by an `h` with
/// `max |h_i| > sqrt(tolerance)`. Points must be pairwise distinct.
pub fn check_strictly_m_negative_definite<Z: Clone + PartialEq>(
    kernel: &MKernel<Z>,
    sample_points: &[Z],
    trials: u64,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport<Z>> {
    run_m_check(kernel, sample_points, trials, seed, tolerance, true, DEFAULT_TERM_BUDGET)
}

/// [`check_m_negative_definite`] with an explicit term budget for the
/// per-trial exact forms (strict selects the strict variant).
pub fn check_m_negative_definite_with_budget<Z: Clone + PartialEq>(
    kernel: &MKernel<Z>,
    sample_points: &[Z],
    trials: u64,
    seed: u64,
    tolerance: f64,
    strict: bool,
    budget: u64,
) -> Result<CheckReport<Z>> {
    run_m_check(kernel, sample_points, trials, seed, tolerance, strict, budget)
}

fn run_m_check<Z: Clone + PartialEq>(
    kernel: &MKernel<Z>,
    sample_points: &[Z],
    trials: u64,
    seed: u64,
    tolerance: f64,
    strict: bool,
    budget: u64,
) -> Result<CheckReport<Z>> {
    kernel.verify_symmetry(sample_points, rng::mix_seeds(seed, 0x5f3a))?;

    if kernel.m() == 2 {
        // Same engine as the two-argument checks, so verdicts and draws
        // agree bit for bit on shared seeds; only the sign convention
        // differs (the signed form is the negated raw form).
        let eval = |u: &Z, v: &Z| kernel.eval(&[u, v]);
        let mut report =
            crate::kernel::run_quadratic_check(&eval, sample_points, trials, seed, tolerance, strict)?;
        report.worst_value = flip_sign(report.worst_value);
        if let Some(w) = &mut report.witness {
            w.value = flip_sign(w.value);
        }
        return Ok(report);
    }

    let n = sample_points.len();
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
                if sample_points[i] == sample_points[j] {
                    return Err(Error::DuplicatePoint { first: i, second: j });
                }
            }
        }
    }

    let nontrivial = fmath::sqrt(tolerance.max(f64::MIN_POSITIVE));
    let mut worst: Option<(Vec<usize>, Vec<f64>, f64)> = None; // minimum signed form
    let mut near_zero: Option<(Vec<usize>, Vec<f64>, f64)> = None;
    let mut all_zero = true;

    for trial in 0..trials {
        let mut r = rng::stream_rng(seed, trial);
        let indices = rng::draw_subset(&mut r, n);
        let h = rng::draw_zero_sum(&mut r, indices.len());
        let subset: Vec<Z> = indices.iter().map(|&i| sample_points[i].clone()).collect();
        let value = m_form_with_budget(
            kernel,
            &subset,
            &CoefficientVector::from_centered(h.clone()),
            budget,
        )?;
        if value != 0.0 {
            all_zero = false;
        }
        let max_h = h.iter().fold(0.0f64, |m, v| m.max(fmath::abs(*v)));
        if strict
            && fmath::abs(value) <= tolerance
            && max_h > nontrivial
            && near_zero
                .as_ref()
                .map(|(_, _, b)| fmath::abs(value) < fmath::abs(*b))
                .unwrap_or(true)
        {
            near_zero = Some((indices.clone(), h.clone(), value));
        }
        if worst.as_ref().map(|(_, _, b)| value < *b).unwrap_or(true) {
            worst = Some((indices, h, value));
        }
    }

    let witness_of = |(indices, h, value): &(Vec<usize>, Vec<f64>, f64)| Witness {
        points: indices.iter().map(|&i| sample_points[i].clone()).collect(),
        coefficients: h.clone(),
        value: *value,
    };

    let worst = worst.expect("at least one trial ran");
    let mut report;
    if worst.2 < -tolerance {
        report = CheckReport::new(Verdict::Fail, worst.2, trials, tolerance);
        report.witness = Some(witness_of(&worst));
    } else if let Some(nz) = near_zero {
        report = CheckReport::new(Verdict::Fail, nz.2, trials, tolerance);
        report.witness = Some(witness_of(&nz));
    } else if all_zero && !strict {
        report = CheckReport::new(Verdict::Degenerate, 0.0, trials, tolerance);
    } else {
        report = CheckReport::new(Verdict::Pass, worst.2, trials, tolerance);
        report.witness = Some(witness_of(&worst));
    }
    Ok(report)
}

/// Negate without producing `-0.0` (reports should print plain zeros).
fn flip_sign(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        -v
    }
}

// ======================================================================
// Strong variant: signed densities against a base measure
// ======================================================================

/// A finitely supported measure `Q` together with a density `h` of
/// `Q`-mean zero — the discrete carrier of the integral form of the
/// m-negative definiteness condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedDiscreteMeasure<X> {
    points: Vec<X>,
    weights: Vec<f64>,
    density: Vec<f64>,
}

impl<X> SignedDiscreteMeasure<X> {
    /// Build from support points, base weights `q` (nonnegative, some
    /// positive; normalized to total 1), and density values `h`
    /// (re-centered to `Σ h_i q_i = 0` on construction).
    pub fn new(points: Vec<X>, weights: Vec<f64>, density: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InsufficientData { needed: 1, got: 0 });
        }
        if weights.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: weights.len() });
        }
        if density.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: density.len() });
        }
        for (i, w) in weights.iter().enumerate() {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "weight {i} is {w}; weights must be nonnegative and finite"
                )));
            }
        }
        if let Some(bad) = density.iter().find(|h| !h.is_finite()) {
            return Err(Error::NonFinite { context: format!("density value {bad}") });
        }
        let total = crate::sum::sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::InvalidMeasure(String::from(
                "at least one base weight must be positive",
            )));
        }
        let weights: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
        let mean = crate::sum::sum(weights.iter().zip(density.iter()).map(|(q, h)| q * h));
        let density = density.into_iter().map(|h| h - mean).collect();
        Ok(SignedDiscreteMeasure { points, weights, density })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[X] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// A density is trivial (Q-a.e. zero) when every positively weighted
    /// point carries `|h| <= sqrt(tolerance)`.
    pub fn is_trivial(&self, tolerance: f64) -> bool {
        let bar = fmath::sqrt(tolerance.max(f64::MIN_POSITIVE));
        self.weights
            .iter()
            .zip(self.density.iter())
            .all(|(q, h)| *q == 0.0 || fmath::abs(*h) <= bar)
    }

    fn with_density(&self, density: Vec<f64>) -> Self
    where
        X: Clone,
    {
        let mean =
            crate::sum::sum(self.weights.iter().zip(density.iter()).map(|(q, h)| q * h));
        let density = density.into_iter().map(|h| h - mean).collect();
        SignedDiscreteMeasure {
            points: self.points.clone(),
            weights: self.weights.clone(),
            density,
        }
    }
}

/// The exact signed integral form
/// `(-1)^(m/2) Σ…Σ L(x_{i1},…) · h(x_{i1})q_{i1} ⋯ h(x_{im})q_{im}`.
///
/// On a uniform `Q` with `h(x_i) = n·h_i` this reduces to [`m_form`] — the
/// change of variables between the sum and integral presentations.
pub fn weighted_m_form<Z>(
    kernel: &MKernel<Z>,
    measure: &SignedDiscreteMeasure<Z>,
    budget: u64,
) -> Result<f64> {
    let n = measure.len();
    let m = kernel.m();
    check_budget(n, m, budget)?;
    let mut acc = Accumulator::new();
    let mut args: Vec<&Z> = Vec::with_capacity(m);
    for_each_tuple(n, m, |idx| {
        args.clear();
        let mut weight = 1.0;
        for &i in idx {
            args.push(&measure.points[i]);
            weight *= measure.density[i] * measure.weights[i];
        }
        let v = kernel.eval(&args);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: format!("m-kernel value at tuple {idx:?}"),
            });
        }
        acc.add(v * weight);
        Ok(())
    })?;
    Ok(sign_factor(m) * acc.total())
}

/// Strong m-negative definiteness check over an ensemble of signed
/// discrete measures.
///
/// Each supplied measure is evaluated exactly; `trials` additional random
/// densities are drawn over the ensemble's supports. A signed integral
/// below `-tolerance` fails outright; one within `tolerance` of zero
/// attained by a density that is not Q-a.e. zero fails the *strong*
/// condition (equality attained nontrivially). `worst_value` is the
/// minimum signed integral. The witness records the support points and
/// density; the base weights are those of the ensemble member sharing the
/// support.
pub fn check_strong_m_negative<Z: Clone + PartialEq>(
    kernel: &MKernel<Z>,
    ensemble: &[SignedDiscreteMeasure<Z>],
    trials: u64,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport<Z>> {
    if ensemble.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Error::InvalidParameter(String::from(
            "tolerance must be finite and nonnegative",
        )));
    }

    let mut worst: Option<(SignedDiscreteMeasure<Z>, f64)> = None;
    let mut near_zero: Option<(SignedDiscreteMeasure<Z>, f64)> = None;
    let mut evaluated = 0u64;

    let consider = |measure: SignedDiscreteMeasure<Z>,
                        value: f64,
                        worst: &mut Option<(SignedDiscreteMeasure<Z>, f64)>,
                        near_zero: &mut Option<(SignedDiscreteMeasure<Z>, f64)>| {
        if fmath::abs(value) <= tolerance
            && !measure.is_trivial(tolerance)
            && near_zero
                .as_ref()
                .map(|(_, b)| fmath::abs(value) < fmath::abs(*b))
                .unwrap_or(true)
        {
            *near_zero = Some((measure.clone(), value));
        }
        if worst.as_ref().map(|(_, b)| value < *b).unwrap_or(true) {
            *worst = Some((measure, value));
        }
    };

    for measure in ensemble {
        let value = weighted_m_form(kernel, measure, DEFAULT_TERM_BUDGET)?;
        evaluated += 1;
        consider(measure.clone(), value, &mut worst, &mut near_zero);
    }
    for trial in 0..trials {
        let base = &ensemble[(trial % ensemble.len() as u64) as usize];
        let mut r = rng::stream_rng(seed, trial);
        let density: Vec<f64> = (0..base.len()).map(|_| r.sample(StandardNormal)).collect();
        let candidate = base.with_density(density);
        let value = weighted_m_form(kernel, &candidate, DEFAULT_TERM_BUDGET)?;
        evaluated += 1;
        consider(candidate, value, &mut worst, &mut near_zero);
    }

    let witness_of = |(measure, value): &(SignedDiscreteMeasure<Z>, f64)| Witness {
        points: measure.points().to_vec(),
        coefficients: measure.density().to_vec(),
        value: *value,
    };

    let worst = worst.expect("nonempty ensemble");
    let mut report;
    if worst.1 < -tolerance {
        report = CheckReport::new(Verdict::Fail, worst.1, evaluated, tolerance);
        report.witness = Some(witness_of(&worst));
    } else if let Some(nz) = near_zero {
        report = CheckReport::new(Verdict::Fail, nz.1, evaluated, tolerance);
        report.witness = Some(witness_of(&nz));
    } else {
        report = CheckReport::new(Verdict::Pass, worst.1, evaluated, tolerance);
        report.witness = Some(witness_of(&worst));
    }
    Ok(report)
}

// ======================================================================
// Induced m-kernels and L^m distances
// ======================================================================

/// The m-kernel induced on the domain `X`:
/// `R_m(x_1,…,x_m) = ∫ L(f_y(x_1),…,f_y(x_m)) dXi(y)`.
#[derive(Debug, Clone)]
pub struct InducedMKernel<Y, X, Z> {
    source: MKernel<Z>,
    family: FunctionFamily<Y, X, Z>,
    measure: IndexMeasure<Y>,
    policy: IntegrationPolicy,
}

/// Package an m-kernel with a family and measure into the induced `R_m`.
pub fn induce_m_kernel<Y, X, Z>(
    source: MKernel<Z>,
    family: FunctionFamily<Y, X, Z>,
    measure: IndexMeasure<Y>,
    policy: IntegrationPolicy,
) -> InducedMKernel<Y, X, Z> {
    InducedMKernel { source, family, measure, policy }
}

impl<Y, X, Z> InducedMKernel<Y, X, Z> {
    pub fn m(&self) -> usize {
        self.source.m()
    }

    pub fn source(&self) -> &MKernel<Z> {
        &self.source
    }

    pub fn family(&self) -> &FunctionFamily<Y, X, Z> {
        &self.family
    }

    pub fn measure(&self) -> &IndexMeasure<Y> {
        &self.measure
    }

    /// Evaluate `R_m` at an argument tuple. For atom-backed measures this
    /// is the exact weighted sum over atoms (stderr 0).
    pub fn eval(&self, args: &[&X]) -> Result<IntegralEstimate> {
        if args.len() != self.source.m() {
            return Err(Error::DimensionMismatch {
                expected: self.source.m(),
                got: args.len(),
            });
        }
        self.measure.integrate(self.policy.mc_samples, self.policy.seed, |y| {
            let images: Vec<Z> = args.iter().map(|x| self.family.apply(y, x)).collect();
            let refs: Vec<&Z> = images.iter().collect();
            self.source.eval(&refs)
        })
    }
}

/// The exact signed m-form of an induced kernel over domain points:
/// every `R_m` tuple value is itself an integral over the measure.
pub fn m_form_induced<Y, X, Z>(
    induced: &InducedMKernel<Y, X, Z>,
    points: &[X],
    h: &CoefficientVector,
    budget: u64,
) -> Result<f64> {
    let n = points.len();
    if n != h.len() {
        return Err(Error::DimensionMismatch { expected: n, got: h.len() });
    }
    let m = induced.m();
    check_budget(n, m, budget)?;
    let hv = h.values();
    let mut acc = Accumulator::new();
    let mut args: Vec<&X> = Vec::with_capacity(m);
    for_each_tuple(n, m, |idx| {
        args.clear();
        let mut weight = 1.0;
        for &i in idx {
            args.push(&points[i]);
            weight *= hv[i];
        }
        let v = induced.eval(&args)?.value;
        acc.add(v * weight);
        Ok(())
    })?;
    Ok(sign_factor(m) * acc.total())
}

/// The L^m-type distance `rho_m(s, t) = (signed R_m(s-t, …, s-t))^(1/m)`.
///
/// The sign factor is applied before the root so the radicand is
/// nonnegative for any m-negative definite kernel; a radicand below
/// `-tolerance` means `R_m` fails m-negative definiteness on this diagonal
/// direction and comes back as a certificate error. Noise above that is
/// clamped to zero.
pub fn lm_distance<Y, X, Z>(
    induced: &InducedMKernel<Y, X, Z>,
    s: &X,
    t: &X,
    tolerance: f64,
) -> Result<f64>
where
    X: VectorPoint,
{
    let diff = s.sub(t);
    let m = induced.m();
    let args: Vec<&X> = (0..m).map(|_| &diff).collect();
    let est = induced.eval(&args)?;
    let signed = sign_factor(m) * est.value;
    if signed < -tolerance {
        return Err(Error::Certificate { value: signed, tolerance });
    }
    let clamped = signed.max(0.0);
    Ok(if m == 2 {
        fmath::sqrt(clamped)
    } else {
        fmath::powf(clamped, 1.0 / m as f64)
    })
}

// ======================================================================
// Strictness transfer (the Assumption-1 pattern)
// ======================================================================

/// The outcome of probing whether strictness carries from `L` to the
/// induced `R_m` on one `(points, h)` instance.
#[derive(Debug, Clone, PartialEq)]
pub struct StrictnessTransferReport {
    /// Signed per-index form of `L` at the family images, one per atom.
    pub per_index_values: Vec<f64>,
    /// Signed form of the induced `R_m` on the raw points.
    pub ambient_value: f64,
    /// All per-index forms within tolerance of zero.
    pub per_index_vanishing: bool,
    /// The ambient form within tolerance of zero.
    pub ambient_vanishing: bool,
    /// `max |h_i| > sqrt(tolerance)` — the density is not trivially zero.
    pub nontrivial_h: bool,
    /// Strictness verdicts agree: `L` vanishes nontrivially on the images
    /// exactly when `R_m` vanishes nontrivially on the points.
    pub strictness_transferred: bool,
}

/// Probe the strictness-transfer hypothesis on one instance: evaluate the
/// signed form of `L` through every atom of the measure and the signed
/// form of the induced `R_m` on the raw points, and compare where each
/// vanishes. Requires an atom-backed measure (per-index enumeration);
/// samplers are rejected as unsupported.
pub fn check_strictness_transfer<Y: Clone, X: Clone, Z>(
    kernel: &MKernel<Z>,
    family: &FunctionFamily<Y, X, Z>,
    measure: &IndexMeasure<Y>,
    points: &[X],
    h: &CoefficientVector,
    tolerance: f64,
    budget: u64,
) -> Result<StrictnessTransferReport> {
    let atoms = measure.atoms().ok_or_else(|| {
        Error::Unsupported(String::from(
            "strictness transfer needs an atom-backed measure (per-index enumeration)",
        ))
    })?;
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Error::InvalidParameter(String::from(
            "tolerance must be finite and nonnegative",
        )));
    }

    let mut per_index_values = Vec::with_capacity(atoms.len());
    for (y, _) in atoms {
        let images: Vec<Z> = points.iter().map(|x| family.apply(y, x)).collect();
        per_index_values.push(m_form_with_budget(kernel, &images, h, budget)?);
    }

    let induced = InducedMKernel {
        source: kernel.clone(),
        family: family.clone(),
        measure: measure.clone(),
        policy: IntegrationPolicy::default(),
    };
    let ambient_value = m_form_induced(&induced, points, h, budget)?;

    let per_index_vanishing =
        per_index_values.iter().all(|v| fmath::abs(*v) <= tolerance);
    let ambient_vanishing = fmath::abs(ambient_value) <= tolerance;
    let nontrivial_h = h.max_abs() > fmath::sqrt(tolerance.max(f64::MIN_POSITIVE));
    // "Strict on this instance" = the form does not vanish on a nontrivial
    // h. Transfer holds when L (through the family) and R_m agree.
    let strict_source = !(per_index_vanishing && nontrivial_h);
    let strict_induced = !(ambient_vanishing && nontrivial_h);
    Ok(StrictnessTransferReport {
        per_index_values,
        ambient_value,
        per_index_vanishing,
        ambient_vanishing,
        nontrivial_h,
        strictness_transferred: strict_source == strict_induced,
    })
}

// ======================================================================
// Tests
// ======================================================================
