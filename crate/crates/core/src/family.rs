//! Function families: the maps `(y, x) -> f_y(x)` that carry points of the
//! domain `X` into the kernel's space `Z`, indexed by `y` from the measure's
//! index set.
//!
//! A family may be *declared linear*, meaning every `f_y` is a linear map
//! from `X` into `Z`. That declaration is what unlocks the inner-product
//! pipeline (norms, polarization, Gram matrices); it is an attestation by
//! the constructor, spot-checkable with [`FunctionFamily::verify_linearity`].

use crate::error::{Error, Result};
use crate::rng;
use crate::vector::VectorPoint;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use rand::Rng;

/// Relative slack allowed when probing the linearity declaration.
const LINEARITY_TOLERANCE: f64 = 1e-10;

/// A family of functions `f_y : X -> Z` indexed by `y in Y`.
pub struct FunctionFamily<Y, X, Z> {
    label: String,
    apply: Arc<dyn Fn(&Y, &X) -> Z + Send + Sync>,
    linear: bool,
    origin: Option<X>,
}

impl<Y, X: Clone, Z> Clone for FunctionFamily<Y, X, Z> {
    fn clone(&self) -> Self {
        FunctionFamily {
            label: self.label.clone(),
            apply: Arc::clone(&self.apply),
            linear: self.linear,
            origin: self.origin.clone(),
        }
    }
}

impl<Y, X, Z> core::fmt::Debug for FunctionFamily<Y, X, Z> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FunctionFamily")
            .field("label", &self.label)
            .field("linear", &self.linear)
            .finish_non_exhaustive()
    }
}

impl<Y, X, Z> FunctionFamily<Y, X, Z> {
    /// Wrap an arbitrary family with no linearity claim.
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Y, &X) -> Z + Send + Sync + 'static,
    {
        FunctionFamily { label: label.into(), apply: Arc::new(f), linear: false, origin: None }
    }

    /// Attest that every `f_y` is linear in `x`, and name the zero element
    /// of `X` (the origin against which norms are taken).
    pub fn declare_linear(mut self, origin: X) -> Self {
        self.linear = true;
        self.origin = Some(origin);
        self
    }

    pub fn apply(&self, y: &Y, x: &X) -> Z {
        (self.apply)(y, x)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// The declared origin of the domain, when one was declared.
    pub fn origin(&self) -> Option<&X> {
        self.origin.as_ref()
    }

    /// Probe the linearity declaration: for random scalars `a, b` and
    /// probe pairs, `f_y(a x1 + b x2)` must match `a f_y(x1) + b f_y(x2)`
    /// to 1e-10 relative. Errors if the family is not declared linear, or
    /// if a probe exceeds the slack (carrying the worst deviation found).
    pub fn verify_linearity(&self, index_points: &[Y], probes: &[X], seed: u64) -> Result<()>
    where
        X: VectorPoint,
        Z: VectorPoint,
    {
        if !self.linear {
            return Err(Error::Unsupported(String::from(
                "family is not declared linear",
            )));
        }
        if index_points.is_empty() || probes.len() < 2 {
            return Err(Error::InsufficientData {
                needed: 2,
                got: probes.len().min(index_points.len()),
            });
        }
        let mut worst = 0.0f64;
        let mut rng = rng::stream_rng(seed, 0);
        for y in index_points {
            for (i, x1) in probes.iter().enumerate() {
                for x2 in probes.iter().skip(i + 1) {
                    let a: f64 = rng.gen_range(-2.0..2.0);
                    let b: f64 = rng.gen_range(-2.0..2.0);
                    let combined = self.apply(y, &X::combine(a, x1, b, x2));
                    let split = Z::combine(a, &self.apply(y, x1), b, &self.apply(y, x2));
                    let deviation = combined.sub(&split).norm();
                    let scale = 1.0 + combined.norm().max(split.norm());
                    worst = worst.max(deviation / scale);
                }
            }
        }
        if worst > LINEARITY_TOLERANCE {
            return Err(Error::Certificate { value: worst, tolerance: LINEARITY_TOLERANCE });
        }
        Ok(())
    }
}

impl FunctionFamily<Vec<f64>, Vec<f64>, Vec<f64>> {
    /// The linear functionals of Example-1 type on `R^dim`: each index
    /// point `y` acts by `x -> [<y, x>]`, a one-dimensional image. With a
    /// measure over suitable `y` this induces Hilbert-type distances.
    pub fn linear_functionals(dim: usize) -> Self {
        FunctionFamily::new("linear-functionals", |y: &Vec<f64>, x: &Vec<f64>| {
            vec![y.dot(x)]
        })
        .declare_linear(vec![0.0; dim])
    }
}

impl FunctionFamily<f64, f64, f64> {
    /// Scalar scaling family `f_y(x) = y * x` on the line.
    pub fn scaling() -> Self {
        FunctionFamily::new("scaling", |y: &f64, x: &f64| y * x).declare_linear(0.0)
    }

    /// The degenerate family sending every point to the fixed value `c`,
    /// regardless of `y`. Collapses every distance to zero; useful as the
    /// pseudometric fixture.
    pub fn constant(c: f64) -> Self {
        FunctionFamily::new("constant", move |_y: &f64, _x: &f64| c)
    }

    /// The identity-through-index family `f_y(x) = x` (ignores `y`).
    pub fn identity() -> Self {
        FunctionFamily::new("identity", |_y: &f64, x: &f64| *x).declare_linear(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_functionals_evaluate_inner_products() {
        let fam = FunctionFamily::linear_functionals(2);
        assert_eq!(fam.apply(&vec![1.0, 0.0], &vec![2.0, 3.0]), vec![2.0]);
        assert_eq!(fam.apply(&vec![0.0, 1.0], &vec![2.0, 3.0]), vec![3.0]);
        assert!(fam.is_linear());
        assert_eq!(fam.origin(), Some(&vec![0.0, 0.0]));
    }

    #[test]
    fn scaling_family_multiplies() {
        let fam = FunctionFamily::scaling();
        assert_eq!(fam.apply(&2.0, &3.0), 6.0);
        assert_eq!(fam.apply(&0.5, &-4.0), -2.0);
    }

    #[test]
    fn constant_family_ignores_both_arguments() {
        let fam = FunctionFamily::constant(7.5);
        assert_eq!(fam.apply(&1.0, &2.0), 7.5);
        assert_eq!(fam.apply(&-3.0, &0.0), 7.5);
        assert!(!fam.is_linear());
    }

    #[test]
    fn linearity_probe_accepts_genuinely_linear_families() {
        let fam = FunctionFamily::linear_functionals(3);
        let ys = vec![vec![1.0, 0.0, 0.0], vec![0.5, -1.0, 2.0]];
        let probes = vec![
            vec![1.0, 2.0, 3.0],
            vec![-0.5, 0.0, 1.5],
            vec![0.0, -1.0, 0.25],
        ];
        fam.verify_linearity(&ys, &probes, 17).unwrap();
    }

    #[test]
    fn linearity_probe_rejects_a_false_declaration() {
        let fam = FunctionFamily::new("squarer", |y: &f64, x: &f64| y * x * x)
            .declare_linear(0.0);
        let err = fam
            .verify_linearity(&[1.0], &[1.0, 2.0, -1.0], 3)
            .unwrap_err();
        assert!(matches!(err, Error::Certificate { .. }));
    }

    #[test]
    fn linearity_probe_requires_the_declaration() {
        let fam = FunctionFamily::constant(1.0);
        let err = fam.verify_linearity(&[0.0], &[0.0, 1.0], 3).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
    }
}
