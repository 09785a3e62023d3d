//! Float helpers that resolve with and without `std`.
//!
//! Inherent methods like `f64::sqrt` live in `std`; routing through
//! `num_traits::Float` (backed by `libm` in no_std builds) keeps every call
//! site identical in both configurations.

use num_traits::Float;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    Float::abs(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    Float::hypot(x, y)
}

#[inline]
pub(crate) fn powf(x: f64, e: f64) -> f64 {
    Float::powf(x, e)
}
