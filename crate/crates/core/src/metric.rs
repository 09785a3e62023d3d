//! Inducing distances from (family, measure, base kernel).
//!
//! The induced distance is
//!
//! ```text
//! rho(x1, x2) = ( ∫ base(f_y(x1), f_y(x2)) dXi(y) )^(1/2)
//! ```
//!
//! with `base` playing the role of a squared distance on `Z`. When the
//! base kernel is negative definite, `rho` is a Hilbert-type distance: the
//! embedder can realize it in Euclidean coordinates. When the family fails
//! to separate points, `rho` is only a pseudometric — [`check_separation`]
//! detects that, and the quotient flag chooses how reports treat it.

use crate::error::{Error, Result};
use crate::family::FunctionFamily;
use crate::fmath;
use crate::kernel::{Kernel, KernelRole};
use crate::measure::{IndexMeasure, IntegralEstimate, MeasureKind};
use crate::report::{CheckReport, Verdict, Witness};
use crate::rng;
use crate::vector::VectorPoint;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::SliceRandom;

/// Tolerance for the identity axiom `dist(x, x) = 0`.
const IDENTITY_TOLERANCE: f64 = 1e-12;

/// How integrals inside a metric are evaluated: sample count for sampler
/// measures (ignored by atom-backed ones) and the integration seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegrationPolicy {
    pub mc_samples: u64,
    pub seed: u64,
}

impl Default for IntegrationPolicy {
    fn default() -> Self {
        IntegrationPolicy { mc_samples: 10_000, seed: 0 }
    }
}

/// A distance value together with its provenance: the Monte Carlo
/// standard error (0 for deterministic measures), whether the squared
/// distance was clamped up to zero, and how many samples went in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceEstimate {
    pub value: f64,
    pub stderr: f64,
    pub clamped: bool,
    pub samples_used: u64,
}

/// The induced distance `rho`, packaged with everything needed to
/// re-evaluate it.
#[derive(Debug, Clone)]
pub struct InducedMetric<Y, X, Z> {
    family: FunctionFamily<Y, X, Z>,
    measure: IndexMeasure<Y>,
    base: Kernel<Z>,
    policy: IntegrationPolicy,
    quotient: bool,
}

/// Build the induced distance of a (family, measure, base) triple.
///
/// The base kernel must carry the squared-distance role: that is the
/// attestation (or certificate) that it vanishes on the diagonal and is
/// negative definite, which is what makes the square root meaningful.
pub fn induce_distance<Y, X, Z>(
    family: FunctionFamily<Y, X, Z>,
    measure: IndexMeasure<Y>,
    base: Kernel<Z>,
    policy: IntegrationPolicy,
) -> Result<InducedMetric<Y, X, Z>> {
    if base.role() != KernelRole::SquaredDistance {
        return Err(Error::InvalidParameter(String::from(
            "base kernel must carry the squared-distance role (negative definite, zero diagonal)",
        )));
    }
    Ok(InducedMetric { family, measure, base, policy, quotient: false })
}

impl<Y, X, Z> InducedMetric<Y, X, Z> {
    /// Treat zero-distance probe points as identified (a quotient space)
    /// instead of reporting a separation failure.
    pub fn with_quotient(mut self, quotient: bool) -> Self {
        self.quotient = quotient;
        self
    }

    pub fn family(&self) -> &FunctionFamily<Y, X, Z> {
        &self.family
    }

    pub fn measure(&self) -> &IndexMeasure<Y> {
        &self.measure
    }

    pub fn base(&self) -> &Kernel<Z> {
        &self.base
    }

    pub fn policy(&self) -> IntegrationPolicy {
        self.policy
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient
    }

    /// The squared distance `∫ base(f_y(x1), f_y(x2)) dXi(y)`, before
    /// clamping. Arguments are put in canonical order first, so the result
    /// is bit-exact symmetric even under Monte Carlo integration.
    pub fn dist_squared(&self, x1: &X, x2: &X) -> Result<IntegralEstimate>
    where
        X: PartialOrd,
    {
        let (a, b) = canonical_order(x1, x2);
        self.measure.integrate(self.policy.mc_samples, self.policy.seed, |y| {
            self.base.eval(&self.family.apply(y, a), &self.family.apply(y, b))
        })
    }

    /// The induced distance. Negative integration noise in the squared
    /// distance is clamped to zero before the square root (and flagged);
    /// the standard error is propagated through the square root by the
    /// delta method, falling back to `sqrt(stderr)` at zero where the
    /// derivative blows up.
    pub fn dist(&self, x1: &X, x2: &X) -> Result<DistanceEstimate>
    where
        X: PartialOrd,
    {
        let est = self.dist_squared(x1, x2)?;
        let clamped = est.value < 0.0;
        let value = fmath::sqrt(est.value.max(0.0));
        let stderr = if est.stderr == 0.0 {
            0.0
        } else if value > 0.0 {
            est.stderr / (2.0 * value)
        } else {
            fmath::sqrt(est.stderr)
        };
        Ok(DistanceEstimate { value, stderr, clamped, samples_used: est.samples_used })
    }
}

fn canonical_order<'a, X: PartialOrd>(x1: &'a X, x2: &'a X) -> (&'a X, &'a X) {
    if matches!(x2.partial_cmp(x1), Some(core::cmp::Ordering::Less)) {
        (x2, x1)
    } else {
        (x1, x2)
    }
}

/// Does the family separate the probe points over the measure's support?
///
/// For each distinct pair, evaluates the base kernel on the pair's images
/// over a support sample. A pair whose values all stay within `tolerance`
/// of zero is indistinguishable to the family: the induced distance is
/// only a pseudometric there. Verdict is `Fail` with that pair as witness,
/// unless the metric's quotient flag is set, in which case the report
/// passes and the witness records the identified pair.
///
/// `worst_value` is the smallest (over pairs) of the largest (over `y`)
/// base values: the separation margin of the least-separated pair.
pub fn check_separation<Y, X, Z>(
    metric: &InducedMetric<Y, X, Z>,
    probe_points: &[X],
    support_count: usize,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport<X>>
where
    Y: Clone,
    X: Clone + PartialEq,
{
    if support_count == 0 {
        return Err(Error::InvalidParameter(String::from(
            "support_count must be >= 1",
        )));
    }
    let n = probe_points.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if probe_points[i] == probe_points[j] {
                return Err(Error::DuplicatePoint { first: i, second: j });
            }
        }
    }
    if n < 2 {
        // No distinct pairs: vacuously separated.
        return Ok(CheckReport::new(Verdict::Pass, 0.0, 0, tolerance));
    }

    let support = metric.measure().support_sample(support_count, seed);
    let mut worst: Option<(usize, usize, f64)> = None;
    let mut pairs = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            pairs += 1;
            let mut pair_max = f64::NEG_INFINITY;
            for (k, y) in support.iter().enumerate() {
                let v = metric.base().eval(
                    &metric.family().apply(y, &probe_points[i]),
                    &metric.family().apply(y, &probe_points[j]),
                );
                if !v.is_finite() {
                    return Err(Error::NonFinite {
                        context: alloc::format!(
                            "base kernel at support point {k} on probe pair ({i}, {j})"
                        ),
                    });
                }
                pair_max = pair_max.max(v);
            }
            if worst.map(|(_, _, w)| pair_max < w).unwrap_or(true) {
                worst = Some((i, j, pair_max));
            }
        }
    }

    let (i, j, margin) = worst.expect("at least one pair");
    let separated = margin > tolerance;
    let verdict = if separated || metric.is_quotient() { Verdict::Pass } else { Verdict::Fail };
    let mut report = CheckReport::new(verdict, margin, pairs, tolerance);
    if !separated {
        report.witness = Some(Witness {
            points: vec![probe_points[i].clone(), probe_points[j].clone()],
            coefficients: Vec::new(),
            value: margin,
        });
    }
    Ok(report)
}

/// Empirical check of the metric axioms on a probe set: identity and
/// symmetry on all pairs, the triangle inequality on random triples.
///
/// `worst_value` is the minimum triangle slack
/// `rho(a,c) + rho(c,b) - rho(a,b)` encountered; the verdict fails when it
/// drops below `-tolerance` (or an identity/symmetry violation shows up,
/// with the offending points as witness). Under a sampler measure the
/// distances are estimates, so the report carries the largest standard
/// error seen as context — with `tolerance` 0 a spurious failure is
/// possible and the context is how a caller judges it.
///
/// A probe set whose pairwise distances all sit within tolerance of zero
/// is flagged `zero_diameter` (a pseudometric collapse, still a pass).
pub fn verify_metric_axioms<Y, X, Z>(
    metric: &InducedMetric<Y, X, Z>,
    probe_points: &[X],
    triple_trials: u64,
    seed: u64,
    tolerance: f64,
) -> Result<CheckReport<X>>
where
    Y: Clone,
    X: Clone + PartialEq + PartialOrd,
{
    let n = probe_points.len();
    if n < 3 {
        return Err(Error::InsufficientData { needed: 3, got: n });
    }
    if triple_trials == 0 {
        return Err(Error::InvalidParameter(String::from(
            "triple_trials must be >= 1",
        )));
    }

    let identity_tol = tolerance.max(IDENTITY_TOLERANCE);
    let mut max_stderr = 0.0f64;
    let mut violation: Option<(Vec<X>, f64)> = None;

    // Identity: rho(x, x) = 0 on every probe.
    for x in probe_points {
        let d = metric.dist(x, x)?;
        max_stderr = max_stderr.max(d.stderr);
        if d.value > identity_tol && violation.is_none() {
            violation = Some((vec![x.clone()], d.value));
        }
    }

    // Pair distances; symmetry must hold bit for bit (canonical ordering).
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let forward = metric.dist(&probe_points[i], &probe_points[j])?;
            let backward = metric.dist(&probe_points[j], &probe_points[i])?;
            max_stderr = max_stderr.max(forward.stderr);
            if forward.value.to_bits() != backward.value.to_bits() && violation.is_none() {
                violation = Some((
                    vec![probe_points[i].clone(), probe_points[j].clone()],
                    forward.value - backward.value,
                ));
            }
            // Nonnegativity is structural (clamped square root); record a
            // violation anyway if it were ever breached.
            if forward.value < 0.0 && violation.is_none() {
                violation = Some((
                    vec![probe_points[i].clone(), probe_points[j].clone()],
                    forward.value,
                ));
            }
            dist[i * n + j] = forward.value;
            dist[j * n + i] = forward.value;
        }
    }

    // Triangle inequality on random triples.
    let mut min_slack = f64::INFINITY;
    let mut slack_witness = (0, 0, 0);
    let mut indices: Vec<usize> = (0..n).collect();
    for trial in 0..triple_trials {
        let mut r = rng::stream_rng(seed, trial);
        indices.shuffle(&mut r);
        let (a, b, c) = (indices[0], indices[1], indices[2]);
        let slack = dist[a * n + c] + dist[c * n + b] - dist[a * n + b];
        if slack < min_slack {
            min_slack = slack;
            slack_witness = (a, b, c);
        }
    }

    let zero_diameter = (0..n).all(|i| {
        (i + 1..n).all(|j| dist[i * n + j] <= identity_tol)
    });

    let verdict = if violation.is_some() || min_slack < -tolerance {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    let mut report = CheckReport::new(verdict, min_slack, triple_trials, tolerance);
    report.zero_diameter = zero_diameter;
    if metric.measure().kind() == MeasureKind::Sampler {
        report.stderr_context = Some(max_stderr);
    }
    if let Some((points, value)) = violation {
        report.witness = Some(Witness { points, coefficients: Vec::new(), value });
    } else if min_slack < -tolerance {
        let (a, b, c) = slack_witness;
        report.witness = Some(Witness {
            points: vec![
                probe_points[a].clone(),
                probe_points[b].clone(),
                probe_points[c].clone(),
            ],
            coefficients: Vec::new(),
            value: min_slack,
        });
    }
    Ok(report)
}

/// The linear-family specialization: a genuine inner-product structure.
///
/// For a family of linear maps `f_y` the induced squared distance comes
/// from the bilinear form `(x1, x2) = ∫ <f_y(x1), f_y(x2)> dXi(y)`, with
/// `norm(x) = sqrt((x, x))` and `rho(x1, x2) = norm(x1 - x2)`.
#[derive(Debug, Clone)]
pub struct InnerProductSpace<Y, X, Z> {
    family: FunctionFamily<Y, X, Z>,
    measure: IndexMeasure<Y>,
    policy: IntegrationPolicy,
}

/// Wrap a declared-linear family as an inner-product space; errors if the
/// linearity flag is not set.
pub fn inner_product_space<Y, X, Z>(
    family: FunctionFamily<Y, X, Z>,
    measure: IndexMeasure<Y>,
    policy: IntegrationPolicy,
) -> Result<InnerProductSpace<Y, X, Z>> {
    if !family.is_linear() {
        return Err(Error::Unsupported(String::from(
            "inner products need a family declared linear",
        )));
    }
    Ok(InnerProductSpace { family, measure, policy })
}

impl<Y, X, Z> InnerProductSpace<Y, X, Z>
where
    Z: VectorPoint,
{
    pub fn family(&self) -> &FunctionFamily<Y, X, Z> {
        &self.family
    }

    pub fn measure(&self) -> &IndexMeasure<Y> {
        &self.measure
    }

    /// `(x1, x2) = ∫ <f_y(x1), f_y(x2)> dXi(y)`.
    pub fn inner(&self, x1: &X, x2: &X) -> Result<IntegralEstimate> {
        self.measure.integrate(self.policy.mc_samples, self.policy.seed, |y| {
            self.family.apply(y, x1).dot(&self.family.apply(y, x2))
        })
    }

    /// `norm(x) = sqrt((x, x))`, clamped against integration noise.
    pub fn norm(&self, x: &X) -> Result<f64> {
        Ok(fmath::sqrt(self.inner(x, x)?.value.max(0.0)))
    }

    /// `rho(x1, x2) = norm(x1 - x2)` — the induced distance expressed
    /// through the inner product.
    pub fn distance(&self, x1: &X, x2: &X) -> Result<f64>
    where
        X: VectorPoint,
    {
        self.norm(&x1.sub(x2))
    }

    /// The Gram matrix of inner products on a point list (row-major).
    pub fn gram(&self, points: &[X]) -> Result<Vec<f64>> {
        let n = points.len();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.inner(&points[i], &points[j])?.value;
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        Ok(g)
    }

    /// How far the inner product is from its polarization form
    /// `¼(norm(x1+x2)² − norm(x1−x2)²)`; near zero for any true
    /// inner-product structure.
    pub fn polarization_residual(&self, x1: &X, x2: &X) -> Result<f64>
    where
        X: VectorPoint,
    {
        let direct = self.inner(x1, x2)?.value;
        let plus = X::combine(1.0, x1, 1.0, x2);
        let minus = x1.sub(x2);
        let q_plus = self.inner(&plus, &plus)?.value;
        let q_minus = self.inner(&minus, &minus)?.value;
        Ok(fmath::abs(direct - 0.25 * (q_plus - q_minus)))
    }
}
