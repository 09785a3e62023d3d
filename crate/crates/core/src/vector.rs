//! Minimal vector-space interface for points.
//!
//! Several operations need a little linear structure on a point type:
//! linearity probes form `a*x1 + b*x2`, inner products contract codomain
//! values, and the L^m distances evaluate kernels at differences `s - t`.
//! This trait captures exactly that much — no more.

use crate::fmath;
use alloc::vec::Vec;

/// A point with real linear structure and an inner product.
pub trait VectorPoint: Clone + PartialEq {
    /// `a*x + b*y`.
    fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Self;

    /// Euclidean inner product.
    fn dot(&self, other: &Self) -> f64;

    /// `self - other`.
    fn sub(&self, other: &Self) -> Self {
        Self::combine(1.0, self, -1.0, other)
    }

    /// Euclidean norm.
    fn norm(&self) -> f64 {
        fmath::sqrt(self.dot(self))
    }
}

impl VectorPoint for f64 {
    fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        a * x + b * y
    }

    fn dot(&self, other: &Self) -> f64 {
        self * other
    }
}

impl VectorPoint for Vec<f64> {
    /// Panics if the two vectors have different lengths; points flowing
    /// through one family are expected to share a dimension.
    fn combine(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        assert_eq!(x.len(), y.len(), "combined vectors must share a dimension");
        x.iter().zip(y.iter()).map(|(xi, yi)| a * xi + b * yi).collect()
    }

    fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "dotted vectors must share a dimension");
        self.iter().zip(other.iter()).map(|(a, b)| a * b).sum()
    }
}
