//! Symmetric eigendecomposition.
//!
//! Householder tridiagonalization followed by implicit-shift QL iteration
//! with accumulated transformations — the classic EISPACK tred2/tql2 pair,
//! translated to 0-indexed Rust on a flat row-major buffer. Backward stable,
//! O(n^3), and comfortable at the matrix sizes double centering produces.
//!
//! Verification is deliberately two-route: unit tests compare against an
//! independently written Jacobi sweep, and every consumer can bound
//! `max_i |A v - lambda v|_inf / |A|_inf` per eigenpair with
//! [`eigenpair_residual`].

use crate::error::{Error, Result};
use crate::fmath;
use alloc::vec;
use alloc::vec::Vec;

const MAX_QL_ITERATIONS: usize = 64;

/// Eigenvalues (descending) with matching unit eigenvectors.
///
/// `vectors[k]` is the eigenvector for `values[k]`. Signs are normalized so
/// the component of largest magnitude is positive, which keeps downstream
/// output byte-stable across runs.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Decompose a symmetric `n x n` matrix given as a row-major slice.
///
/// The input must be symmetric to within `1e-12 * (1 + max|a_ij|)`; hand the
/// function anything else and it refuses rather than silently decomposing
/// the symmetric part.
pub fn symmetric_eigen(matrix: &[f64], n: usize) -> Result<SymmetricEigen> {
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if matrix.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: matrix.len() });
    }
    let mut max_abs: f64 = 0.0;
    let mut max_asym: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = matrix[i * n + j];
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: alloc::format!("matrix entry ({i}, {j})"),
                });
            }
            max_abs = max_abs.max(fmath::abs(v));
            max_asym = max_asym.max(fmath::abs(v - matrix[j * n + i]));
        }
    }
    if max_asym > 1e-12 * (1.0 + max_abs) {
        return Err(Error::InvalidParameter(alloc::format!(
            "matrix is not symmetric: max |a_ij - a_ji| = {max_asym:e}"
        )));
    }

    let mut z = matrix.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n == 1 {
        return Ok(SymmetricEigen { values: vec![z[0]], vectors: vec![vec![1.0]] });
    }
    tred2(&mut z, &mut d, &mut e, n);
    tql2(&mut d, &mut e, &mut z, n)?;

    // Sort descending, pull eigenvectors out of the columns, fix signs.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).expect("eigenvalues are finite"));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &j in &order {
        values.push(d[j]);
        let mut v: Vec<f64> = (0..n).map(|k| z[k * n + j]).collect();
        let lead = v
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| {
                fmath::abs(**a).partial_cmp(&fmath::abs(**b)).expect("finite")
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        if v[lead] < 0.0 {
            for c in v.iter_mut() {
                *c = -*c;
            }
        }
        vectors.push(v);
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Worst relative eigenpair residual: `max_k |A v_k - lambda_k v_k|_inf`
/// divided by `|A|_inf` (the max row sum; 1 if the matrix is zero).
pub fn eigenpair_residual(matrix: &[f64], n: usize, eigen: &SymmetricEigen) -> f64 {
    let mut norm_a: f64 = 0.0;
    for i in 0..n {
        let row: f64 = (0..n).map(|j| fmath::abs(matrix[i * n + j])).sum();
        norm_a = norm_a.max(row);
    }
    if norm_a == 0.0 {
        norm_a = 1.0;
    }
    let mut worst: f64 = 0.0;
    for (lambda, v) in eigen.values.iter().zip(eigen.vectors.iter()) {
        for i in 0..n {
            let av: f64 = (0..n).map(|j| matrix[i * n + j] * v[j]).sum();
            worst = worst.max(fmath::abs(av - lambda * v[i]));
        }
    }
    worst / norm_a
}

/// Householder reduction of `z` (row-major, overwritten with the accumulated
/// orthogonal transform) to tridiagonal form: diagonal in `d`, subdiagonal
/// in `e[1..]`.
fn tred2(z: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += fmath::abs(z[i * n + k]);
            }
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..=l {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -fmath::sqrt(h) } else { fmath::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[j * n + i] = z[i * n + j] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z[j * n + k] * z[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let fj = z[i * n + j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        z[j * n + k] -= fj * e[k] + gj * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i * n + k] * z[k * n + j];
                }
                for k in 0..i {
                    z[k * n + j] -= g * z[k * n + i];
                }
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for j in 0..i {
            z[j * n + i] = 0.0;
            z[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL on the tridiagonal `(d, e)`, rotations applied to the
/// columns of `z`. On return `d` holds eigenvalues and column `j` of `z` the
/// eigenvector for `d[j]`.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible subdiagonal element to split at.
            let mut m = l;
            while m + 1 < n {
                let dd = fmath::abs(d[m]) + fmath::abs(d[m + 1]);
                if fmath::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence { iterations: MAX_QL_ITERATIONS });
            }
            // Implicit shift from the 2x2 at the top of the block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = fmath::hypot(g, 1.0);
            let sign_r = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sign_r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = fmath::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(rows: &[&[f64]]) -> (Vec<f64>, usize) {
        let n = rows.len();
        let mut m = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            m.extend_from_slice(r);
        }
        (m, n)
    }

    #[test]
    fn diagonal_matrix_is_its_own_spectrum() {
        let (m, n) = flat(&[&[3.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 2.0]]);
        let eig = symmetric_eigen(&m, n).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, -1.0]);
        assert!(eigenpair_residual(&m, n, &eig) < 1e-14);
    }

    #[test]
    fn two_by_two_with_known_spectrum() {
        // [[2, 1], [1, 2]] has eigenvalues 3 and 1.
        let (m, n) = flat(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let eig = symmetric_eigen(&m, n).unwrap();
        assert!((eig.values[0] - 3.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // Eigenvector of 3 is (1,1)/sqrt(2), sign-normalized positive.
        let v = &eig.vectors[0];
        assert!((v[0] - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((v[1] - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn vectors_are_orthonormal() {
        // A fixed dense symmetric matrix.
        let (m, n) = flat(&[
            &[4.0, 1.0, -2.0, 0.5],
            &[1.0, 3.0, 0.0, -1.0],
            &[-2.0, 0.0, 1.0, 2.0],
            &[0.5, -1.0, 2.0, -2.0],
        ]);
        let eig = symmetric_eigen(&m, n).unwrap();
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = (0..n).map(|k| eig.vectors[i][k] * eig.vectors[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (dot - want).abs() < 1e-12,
                    "vectors {i} and {j}: dot = {dot}"
                );
            }
        }
        assert!(eigenpair_residual(&m, n, &eig) < 1e-13);
        // Trace is preserved.
        let trace = 4.0 + 3.0 + 1.0 - 2.0;
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - trace).abs() < 1e-12);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let (m, n) = flat(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(
            symmetric_eigen(&m, n),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn zero_matrix_yields_zero_spectrum() {
        let m = vec![0.0; 9];
        let eig = symmetric_eigen(&m, 3).unwrap();
        assert_eq!(eig.values, vec![0.0, 0.0, 0.0]);
        assert!(eigenpair_residual(&m, 3, &eig) == 0.0);
    }
}
