//! Constructive Hilbert embeddings of finite metric spaces.
//!
//! A finite distance matrix `D` embeds isometrically into Euclidean space
//! exactly when its double-centered Gram matrix
//!
//! ```text
//! G = -1/2 · J (D ∘ D) J,    J = I - (1/n) 11ᵀ
//! ```
//!
//! is positive semidefinite (classical multidimensional scaling). This
//! module builds `D`, tests PSD-ness through a verified symmetric
//! eigendecomposition, and emits explicit coordinates together with an
//! isometry residual — the executable witness that the induced distances
//! really are Hilbert-type.

use crate::eigen::{eigenpair_residual, symmetric_eigen};
use crate::error::{Error, Result};
use crate::fmath;
use crate::metric::InducedMetric;
use crate::sum::Accumulator;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Default scale-free embeddability threshold: the most negative Gram
/// eigenvalue may reach `-tol_rel * max |eigenvalue|` before the verdict
/// flips to not-embeddable.
pub const DEFAULT_EMBED_TOL_REL: f64 = 1e-9;

/// Every eigenpair of the Gram matrix must satisfy
/// `max |G v - λ v| <= EIGEN_RESIDUAL_TOLERANCE * |G|` or the
/// decomposition is rejected outright.
const EIGEN_RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Allowed relative asymmetry / diagonal slop when adopting an external
/// matrix; anything larger is malformed input rather than rounding.
const MATRIX_SYMMETRY_TOL_REL: f64 = 1e-9;
const MATRIX_DIAGONAL_TOL_REL: f64 = 1e-12;

/// A finite symmetric distance matrix with labeled points.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    labels: Vec<String>,
}

impl DistanceMatrix {
    /// Adopt an externally supplied square matrix, validating the distance
    /// invariants: at least 2x2, finite nonnegative entries, diagonal zero
    /// (to 1e-12 of the scale — then zeroed exactly), and symmetric to 1e-9
    /// of the scale — then symmetrized by averaging.
    pub fn from_rows(rows: &[Vec<f64>], labels: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::InsufficientData { needed: 2, got: n });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { context: format!("entry ({i}, {j})") });
                }
                if *v < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "distance entry ({i}, {j}) is negative: {v}"
                    )));
                }
            }
        }
        let max = rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |m, v| m.max(*v));
        let scale = 1.0 + max;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            if rows[i][i] > MATRIX_DIAGONAL_TOL_REL * scale {
                return Err(Error::InvalidParameter(format!(
                    "diagonal entry ({i}, {i}) is {} but must be zero",
                    rows[i][i]
                )));
            }
            for j in (i + 1)..n {
                let delta = fmath::abs(rows[i][j] - rows[j][i]);
                if delta > MATRIX_SYMMETRY_TOL_REL * scale {
                    return Err(Error::InvalidParameter(format!(
                        "entries ({i}, {j}) and ({j}, {i}) differ by {delta}; matrix is not symmetric"
                    )));
                }
                let v = 0.5 * (rows[i][j] + rows[j][i]);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: l.len() });
                }
                l
            }
            None => default_labels(n),
        };
        Ok(DistanceMatrix { n, entries, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, v| m.max(*v))
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// A distance matrix induced from a metric, annotated with the integration
/// quality over all evaluated pairs.
#[derive(Debug, Clone)]
pub struct InducedDistances {
    pub matrix: DistanceMatrix,
    /// Largest Monte Carlo standard error among the pairs (0 when the
    /// measure is deterministic).
    pub max_stderr: f64,
    /// Whether any squared distance needed clamping up to zero.
    pub clamped: bool,
}

/// Evaluate the metric on all unordered pairs of `points`.
///
/// Each pair is evaluated once and mirrored; the diagonal is exactly zero.
pub fn distance_matrix<Y, X, Z>(
    metric: &InducedMetric<Y, X, Z>,
    points: &[X],
    labels: Option<Vec<String>>,
) -> Result<InducedDistances>
where
    X: PartialOrd,
{
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let labels = match labels {
        Some(l) => {
            if l.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: l.len() });
            }
            l
        }
        None => default_labels(n),
    };
    let mut entries = vec![0.0; n * n];
    let mut max_stderr = 0.0f64;
    let mut clamped = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric.dist(&points[i], &points[j]).map_err(|e| match e {
                Error::NonFinite { context } => Error::NonFinite {
                    context: format!("{context} (probe pair ({i}, {j}))"),
                },
                other => other,
            })?;
            entries[i * n + j] = d.value;
            entries[j * n + i] = d.value;
            max_stderr = max_stderr.max(d.stderr);
            clamped |= d.clamped;
        }
    }
    Ok(InducedDistances {
        matrix: DistanceMatrix { n, entries, labels },
        max_stderr,
        clamped,
    })
}

/// The double-centered Gram matrix `G = -1/2 J (D∘D) J`, row-major.
pub fn double_center(d: &DistanceMatrix) -> Vec<f64> {
    let n = d.n();
    let nf = n as f64;
    let mut sq = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let v = d.entry(i, j);
            sq[i * n + j] = v * v;
        }
    }
    let mut row_mean = vec![0.0; n];
    let mut grand = Accumulator::new();
    for i in 0..n {
        let mut acc = Accumulator::new();
        for j in 0..n {
            acc.add(sq[i * n + j]);
        }
        let total = acc.total();
        row_mean[i] = total / nf;
        grand.add(total);
    }
    let grand_mean = grand.total() / (nf * nf);
    let mut g = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] = -0.5 * (sq[i * n + j] - row_mean[i] - row_mean[j] + grand_mean);
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedVerdict {
    Embeddable,
    NotEmbeddable,
}

impl EmbedVerdict {
    pub fn is_embeddable(self) -> bool {
        matches!(self, EmbedVerdict::Embeddable)
    }
}

/// The outcome of a Schoenberg embedding attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingResult {
    /// `n x rank` coordinates (rows are points). For a not-embeddable
    /// input these are the best PSD approximation, kept for diagnostics.
    pub coordinates: Vec<Vec<f64>>,
    /// All Gram eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// `max_ij | |row_i - row_j| - D[i][j] |`.
    pub residual: f64,
    pub verdict: EmbedVerdict,
    /// Count of eigenvalues above `tol_rel * max eigenvalue` — the
    /// embedding dimension.
    pub rank: usize,
    pub tol_rel: f64,
}

/// Classical-scaling embedding of a distance matrix.
///
/// Eigendecomposes the double-centered Gram matrix, declares the input
/// embeddable when the most negative eigenvalue stays above
/// `-tol_rel * max |eigenvalue|`, and returns coordinates built from the
/// positive part of the spectrum. Every eigenpair is verified against the
/// Gram matrix (`|G v - λ v| <= 1e-9 |G|`); a decomposition that misses
/// that bar is rejected as a certificate failure rather than silently
/// trusted.
pub fn schoenberg_embed(d: &DistanceMatrix, tol_rel: f64) -> Result<EmbeddingResult> {
    if !(tol_rel.is_finite() && tol_rel >= 0.0) {
        return Err(Error::InvalidParameter(String::from(
            "tol_rel must be finite and nonnegative",
        )));
    }
    let n = d.n();
    let g = double_center(d);
    let eig = symmetric_eigen(&g, n)?;
    let residual = eigenpair_residual(&g, n, &eig);
    if residual > EIGEN_RESIDUAL_TOLERANCE {
        return Err(Error::Certificate {
            value: residual,
            tolerance: EIGEN_RESIDUAL_TOLERANCE,
        });
    }

    let max_abs = eig.values.iter().fold(0.0f64, |m, v| m.max(fmath::abs(*v)));
    let min_eigenvalue = *eig.values.last().expect("n >= 2");
    let verdict = if min_eigenvalue >= -tol_rel * max_abs {
        EmbedVerdict::Embeddable
    } else {
        EmbedVerdict::NotEmbeddable
    };

    let threshold = tol_rel * eig.values[0].max(0.0);
    let rank = eig.values.iter().take_while(|v| **v > threshold).count();
    let mut coordinates = vec![Vec::with_capacity(rank); n];
    for k in 0..rank {
        let scale = fmath::sqrt(eig.values[k]);
        for (i, row) in coordinates.iter_mut().enumerate() {
            row.push(scale * eig.vectors[k][i]);
        }
    }

    let residual = coordinate_residual(&coordinates, d);
    Ok(EmbeddingResult {
        coordinates,
        eigenvalues: eig.values,
        min_eigenvalue,
        residual,
        verdict,
        rank,
        tol_rel,
    })
}

fn coordinate_residual(coordinates: &[Vec<f64>], d: &DistanceMatrix) -> f64 {
    let n = d.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut acc = 0.0;
            for (a, b) in coordinates[i].iter().zip(coordinates[j].iter()) {
                let diff = a - b;
                acc += diff * diff;
            }
            worst = worst.max(fmath::abs(fmath::sqrt(acc) - d.entry(i, j)));
        }
    }
    worst
}

/// The isometry residual of an embedding against a distance matrix:
/// `max_ij | |row_i - row_j| - D[i][j] |`.
pub fn isometry_residual(result: &EmbeddingResult, d: &DistanceMatrix) -> Result<f64> {
    if result.coordinates.len() != d.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            got: result.coordinates.len(),
        });
    }
    Ok(coordinate_residual(&result.coordinates, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FunctionFamily;
    use crate::kernel::Kernel;
    use crate::measure::IndexMeasure;
    use crate::metric::{induce_distance, IntegrationPolicy};

    fn line_metric() -> DistanceMatrix {
        DistanceMatrix::from_rows(
            &[
                vec![0.0, 1.0, 2.0],
                vec![1.0, 0.0, 1.0],
                vec![2.0, 1.0, 0.0],
            ],
            None,
        )
        .unwrap()
    }

    /// Star: one center at distance 1 from three leaves, leaves pairwise 2.
    /// Not Euclidean — an equilateral triangle of side 2 has circumradius
    /// 2/sqrt(3) > 1.
    fn star_metric() -> DistanceMatrix {
        DistanceMatrix::from_rows(
            &[
                vec![0.0, 1.0, 1.0, 1.0],
                vec![1.0, 0.0, 2.0, 2.0],
                vec![1.0, 2.0, 0.0, 2.0],
                vec![1.0, 2.0, 2.0, 0.0],
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn double_centering_the_line_metric_by_hand() {
        // D∘D row means are (5/3, 2/3, 5/3), grand mean 4/3, so
        // G = [[1,0,-1],[0,0,0],[-1,0,1]].
        let g = double_center(&line_metric());
        let expected = [1.0, 0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0];
        for (a, b) in g.iter().zip(expected.iter()) {
            assert!((a - b).abs() <= 1e-14, "{g:?}");
        }
    }

    #[test]
    fn line_metric_embeds_on_a_line() {
        let d = line_metric();
        let result = schoenberg_embed(&d, DEFAULT_EMBED_TOL_REL).unwrap();
        assert!(result.verdict.is_embeddable());
        assert!((result.eigenvalues[0] - 2.0).abs() <= 1e-10);
        assert!(result.eigenvalues[1].abs() <= 1e-10);
        assert!(result.eigenvalues[2].abs() <= 1e-10);
        assert_eq!(result.rank, 1);
        assert!(result.residual <= 1e-10);
        // Coordinates are congruent to (-1, 0, 1): consecutive gaps 1.
        let xs: Vec<f64> = result.coordinates.iter().map(|r| r[0]).collect();
        assert!(((xs[0] - xs[1]).abs() - 1.0).abs() <= 1e-10);
        assert!(((xs[1] - xs[2]).abs() - 1.0).abs() <= 1e-10);
        assert!(((xs[0] - xs[2]).abs() - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn star_metric_is_not_embeddable() {
        let result = schoenberg_embed(&star_metric(), DEFAULT_EMBED_TOL_REL).unwrap();
        assert_eq!(result.verdict, EmbedVerdict::NotEmbeddable);
        assert!(result.min_eigenvalue < -1e-3);
        // Spectrum is {2, 2, 0, -1/4}.
        assert!((result.eigenvalues[0] - 2.0).abs() <= 1e-10);
        assert!((result.eigenvalues[1] - 2.0).abs() <= 1e-10);
        assert!(result.eigenvalues[2].abs() <= 1e-10);
        assert!((result.eigenvalues[3] + 0.25).abs() <= 1e-10);
        // Best-PSD coordinates still come back, with an honest residual.
        assert!(result.residual > 0.0);
        assert_eq!(result.coordinates.len(), 4);
    }

    #[test]
    fn all_zero_distances_embed_at_the_origin() {
        let d = DistanceMatrix::from_rows(
            &[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]],
            None,
        )
        .unwrap();
        let result = schoenberg_embed(&d, DEFAULT_EMBED_TOL_REL).unwrap();
        assert!(result.verdict.is_embeddable());
        assert!(result.eigenvalues.iter().all(|v| *v == 0.0));
        assert_eq!(result.rank, 0);
        assert_eq!(result.residual, 0.0);
        assert!(result.coordinates.iter().all(|row| row.is_empty()));
    }

    #[test]
    fn euclidean_point_sets_round_trip() {
        use rand::Rng;
        let mut r = crate::rng::stream_rng(2024, 0);
        for case in 0..10 {
            let n = r.gen_range(3..=10);
            let dim = r.gen_range(1..=5);
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..dim).map(|_| r.gen_range(-3.0..3.0)).collect())
                .collect();
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            points[i]
                                .iter()
                                .zip(points[j].iter())
                                .map(|(a, b)| (a - b) * (a - b))
                                .sum::<f64>()
                                .sqrt()
                        })
                        .collect()
                })
                .collect();
            let d = DistanceMatrix::from_rows(&rows, None).unwrap();
            let result = schoenberg_embed(&d, DEFAULT_EMBED_TOL_REL).unwrap();
            assert!(
                result.verdict.is_embeddable(),
                "case {case}: Euclidean distances must embed (min eig {})",
                result.min_eigenvalue
            );
            assert!(
                result.residual <= 1e-8,
                "case {case}: residual {} too large",
                result.residual
            );
            assert!(result.rank <= dim, "case {case}: rank {} > dim {dim}", result.rank);
        }
    }

    #[test]
    fn gram_trace_matches_the_eigenvalue_sum() {
        let d = star_metric();
        let g = double_center(&d);
        let result = schoenberg_embed(&d, DEFAULT_EMBED_TOL_REL).unwrap();
        let trace: f64 = (0..d.n()).map(|i| g[i * d.n() + i]).sum();
        let eig_sum: f64 = result.eigenvalues.iter().sum();
        assert!((trace - eig_sum).abs() <= 1e-10 * (1.0 + trace.abs()));
    }

    #[test]
    fn residual_is_permutation_invariant() {
        let d = star_metric();
        let base = schoenberg_embed(&d, DEFAULT_EMBED_TOL_REL).unwrap();
        // Permute points (reverse order) and re-embed.
        let n = d.n();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| d.entry(n - 1 - i, n - 1 - j)).collect())
            .collect();
        let permuted = DistanceMatrix::from_rows(&rows, None).unwrap();
        let other = schoenberg_embed(&permuted, DEFAULT_EMBED_TOL_REL).unwrap();
        assert!((base.residual - other.residual).abs() <= 1e-12);
        assert_eq!(base.verdict, other.verdict);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        // Not symmetric.
        assert!(DistanceMatrix::from_rows(
            &[vec![0.0, 1.0], vec![2.0, 0.0]],
            None
        )
        .is_err());
        // Negative entry.
        assert!(DistanceMatrix::from_rows(
            &[vec![0.0, -1.0], vec![-1.0, 0.0]],
            None
        )
        .is_err());
        // Nonzero diagonal.
        assert!(DistanceMatrix::from_rows(
            &[vec![0.5, 1.0], vec![1.0, 0.0]],
            None
        )
        .is_err());
        // Too small.
        assert!(DistanceMatrix::from_rows(&[vec![0.0]], None).is_err());
        // Ragged.
        assert!(DistanceMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0]], None).is_err());
    }

    #[test]
    fn induced_matrices_carry_their_provenance() {
        let family = FunctionFamily::linear_functionals(2);
        let measure = IndexMeasure::discrete(vec![
            (vec![1.0, 0.0], 0.5),
            (vec![0.0, 1.0], 0.5),
        ])
        .unwrap();
        let metric = induce_distance(
            family,
            measure,
            Kernel::squared_euclidean(),
            IntegrationPolicy::default(),
        )
        .unwrap();
        let points = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        let induced = distance_matrix(&metric, &points, None).unwrap();
        assert_eq!(induced.matrix.n(), 2);
        assert!((induced.matrix.entry(0, 1) - 2.0f64.sqrt()).abs() <= 1e-12);
        assert_eq!(induced.matrix.entry(0, 0), 0.0);
        assert_eq!(induced.max_stderr, 0.0);
        assert!(!induced.clamped);

        // A repeated point induces a zero row/column without complaint.
        let twice = distance_matrix(&metric, &[vec![1.0, 1.0], vec![1.0, 1.0]], None).unwrap();
        assert_eq!(twice.matrix.entry(0, 1), 0.0);

        // The induced matrix embeds — the Theorem-1 chain.
        let result = schoenberg_embed(&induced.matrix, DEFAULT_EMBED_TOL_REL).unwrap();
        assert!(result.verdict.is_embeddable());
        assert!(result.residual <= 1e-8 * (1.0 + induced.matrix.max_entry()));
    }

    #[test]
    fn isometry_residual_checks_dimensions() {
        let d = line_metric();
        let result = schoenberg_embed(&d, DEFAULT_EMBED_TOL_REL).unwrap();
        assert!((isometry_residual(&result, &d).unwrap() - result.residual).abs() <= 1e-15);
        let smaller = DistanceMatrix::from_rows(
            &[vec![0.0, 1.0], vec![1.0, 0.0]],
            None,
        )
        .unwrap();
        assert!(matches!(
            isometry_residual(&result, &smaller),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
