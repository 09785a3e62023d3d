//! Cross-checks the built-in tridiagonalization eigensolver against an
//! independently written cyclic Jacobi iteration.

use metric_forge_core::{double_center, symmetric_eigen, DistanceMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cyclic Jacobi eigenvalue iteration — deliberately a different
/// algorithm family from the Householder + QL path under test. Returns
/// eigenvalues in descending order.
fn jacobi_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    let mut a = matrix.to_vec();
    let scale: f64 = a.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    values
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-5.0..5.0);
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    m
}

#[test]
fn eigenvalues_match_the_jacobi_oracle_on_random_symmetric_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..60 {
        let n = rng.gen_range(2..=12);
        let m = random_symmetric(&mut rng, n);
        let scale: f64 = m.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let ours = symmetric_eigen(&m, n).unwrap();
        let oracle = jacobi_eigenvalues(&m, n);
        for (i, (a, b)) in ours.values.iter().zip(oracle.iter()).enumerate() {
            assert!(
                (a - b).abs() <= 1e-9 * scale,
                "round {round}, eigenvalue {i}: {a} vs oracle {b}"
            );
        }
    }
}

#[test]
fn eigenvectors_satisfy_the_defining_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let n = rng.gen_range(2..=10);
        let m = random_symmetric(&mut rng, n);
        let scale: f64 = m.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let eig = symmetric_eigen(&m, n).unwrap();
        for (lambda, vector) in eig.values.iter().zip(eig.vectors.iter()) {
            for i in 0..n {
                let mv: f64 = (0..n).map(|j| m[i * n + j] * vector[j]).sum();
                assert!(
                    (mv - lambda * vector[i]).abs() <= 1e-9 * scale,
                    "residual row {i} for eigenvalue {lambda}"
                );
            }
        }
    }
}

#[test]
fn double_centered_gram_matrices_agree_with_the_oracle() {
    // The matrices the embedder actually diagonalizes: -1/2 J (D∘D) J for
    // a random metric-looking D.
    let mut rng = ChaCha8Rng::seed_from_u64(4091);
    for _ in 0..30 {
        let n = rng.gen_range(2..=10);
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = rng.gen_range(0.1..4.0);
                rows[i][j] = d;
                rows[j][i] = d;
            }
        }
        let matrix = DistanceMatrix::from_rows(&rows, None).unwrap();
        let gram = double_center(&matrix);
        let scale: f64 = gram.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let ours = symmetric_eigen(&gram, n).unwrap();
        let oracle = jacobi_eigenvalues(&gram, n);
        for (a, b) in ours.values.iter().zip(oracle.iter()) {
            assert!((a - b).abs() <= 1e-9 * scale, "{a} vs {b}");
        }
    }
}
