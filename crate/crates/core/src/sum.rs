//! Compensated (Neumaier) summation.
//!
//! The certificate checks and m-form enumerations accumulate up to 10^7
//! terms; naive summation would make their low-order digits depend on term
//! count in ways the pinned tolerances cannot absorb. Neumaier's variant of
//! Kahan summation keeps the running error at a few ulps regardless of
//! length and, unlike tree reductions, is bit-reproducible for a fixed term
//! order.

use crate::fmath;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if fmath::abs(self.sum) >= fmath::abs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator, in iteration order.
pub(crate) fn sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = Accumulator::new();
    for x in xs {
        acc.add(x);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_that_naive_summation_loses() {
        // 1 + 1e100 - 1e100 + ... alternating; naive f64 summation returns 0.
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum(xs), 2.0);
    }

    #[test]
    fn matches_exact_sum_on_small_integers() {
        let xs: alloc::vec::Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(sum(xs), 499_500.0);
    }
}
