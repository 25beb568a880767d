use serde::Serialize;

use crate::scalar::Scalar;

/// Closed interval `[lo, hi]`; a point value has `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(v: S) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn width(&self) -> S {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> S {
        (self.lo + self.hi) * S::half()
    }

    pub fn contains(&self, v: S) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Image under a nondecreasing map.
    pub fn map_monotone(&self, f: impl Fn(S) -> S) -> Self {
        Self::new(f(self.lo), f(self.hi))
    }

    pub fn mul(&self, other: &Self) -> Self {
        // endpoints are nonnegative for every interval the crate produces
        Self::new(self.lo * other.lo, self.hi * other.hi)
    }
}
