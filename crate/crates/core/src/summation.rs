//! Compensated (Neumaier) summation.

use crate::scalar::Scalar;

/// Running sum with a second-order error term.
///
/// Each `add` is an error-free transformation of `sum + x`; the lost low
/// bits accumulate in `compensation` and are folded back by [`value`].
///
/// [`value`]: CompensatedSum::value
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<S> {
    sum: S,
    compensation: S,
}

impl<S: Scalar> CompensatedSum<S> {
    pub fn new() -> Self {
        Self {
            sum: S::zero(),
            compensation: S::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: S) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> S {
        self.sum + self.compensation
    }
}

impl<S: Scalar> Extend<S> for CompensatedSum<S> {
    fn extend<I: IntoIterator<Item = S>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl<S: Scalar> FromIterator<S> for CompensatedSum<S> {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut acc = Self::new();
        acc.extend(iter);
        acc
    }
}

/// Compensated sum of an iterator.
pub fn compensated_sum<S: Scalar, I: IntoIterator<Item = S>>(iter: I) -> S {
    iter.into_iter().collect::<CompensatedSum<S>>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_low_bits() {
        // naive summation returns 0 here
        let xs = [1.0f64, 1e100, 1.0, -1e100];
        assert_eq!(xs.iter().copied().sum::<f64>(), 0.0);
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn many_small_terms() {
        let n = 1_000_000;
        let s = compensated_sum((0..n).map(|_| 0.1f64));
        assert!((s - 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(compensated_sum::<f32, _>(std::iter::empty()), 0.0);
    }
}
