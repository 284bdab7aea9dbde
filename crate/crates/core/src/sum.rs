//! Compensated summation.
//!
//! [`Neumaier`] keeps a running sum together with the exact rounding error of
//! every addition (Knuth's TwoSum folded into a second accumulator). For `n`
//! terms the error of the returned value is bounded by
//! `u·|S| + O(n·u²)·Σ|x_i|`, with `u` the unit roundoff, instead of the
//! `O(n·u)·Σ|x_i|` of naive recursion. This matters for prefix sums like
//! `x·S0(x) − S1(x)`, where both operands are ~x² and the difference is
//! needed to many digits.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier<F> {
    sum: F,
    comp: F,
}

impl<F: Real> Neumaier<F> {
    pub fn new() -> Self {
        Self {
            sum: F::zero(),
            comp: F::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merges another accumulator, keeping both error terms.
    #[inline]
    pub fn absorb(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> F {
        self.sum + self.comp
    }
}

impl<F: Real> std::iter::FromIterator<F> for Neumaier<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator.
pub fn sum<F: Real, I: IntoIterator<Item = F>>(iter: I) -> F {
    iter.into_iter().collect::<Neumaier<F>>().value()
}

/// Sums per-block partial results in block order.
///
/// Parallel reductions collect their block accumulators into a `Vec` in a
/// fixed order and fold them here, so the result does not depend on the
/// number of worker threads.
pub fn fold_blocks<F: Real>(blocks: &[Neumaier<F>]) -> F {
    let mut acc = Neumaier::new();
    for b in blocks {
        acc.absorb(b);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let xs = [1.0e16, 1.0, -1.0e16, 1.0];
        let naive: f64 = xs.iter().sum();
        assert_eq!(naive, 1.0);
        assert_eq!(sum(xs), 2.0);
    }

    #[test]
    fn harmonic_sum_beats_naive() {
        let n = 1_000_000u32;
        let terms = (1..=n).map(|k| 1.0f32 / k as f32);
        let exact: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
        let comp = sum(terms.clone()) as f64;
        let naive = terms.fold(0.0f32, |a, b| a + b) as f64;
        assert!((comp - exact).abs() < (naive - exact).abs());
        assert!((comp - exact).abs() < 1e-5);
    }

    #[test]
    fn block_fold_is_order_stable() {
        let blocks: Vec<Neumaier<f64>> = (0..10)
            .map(|b| (0..1000).map(|i| ((b * 1000 + i) as f64).sqrt()).collect())
            .collect();
        let a = fold_blocks(&blocks);
        let b = fold_blocks(&blocks);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
