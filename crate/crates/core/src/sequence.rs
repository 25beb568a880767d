//! Finitely supported real sequences, their distribution function and
//! decreasing rearrangement.
//!
//! Indices are 1-based in every public signature: entry `n` of a sequence of
//! length `L` is `values()[n - 1]`, and everything past `L` is zero.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A real sequence with finite support, stored up to its truncation length.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<S>", into = "Vec<S>")]
#[serde(bound(serialize = "S: Scalar + Serialize", deserialize = "S: Scalar + Deserialize<'de>"))]
pub struct FiniteSequence<S> {
    values: Vec<S>,
}

impl<S: Scalar> FiniteSequence<S> {
    /// Builds a sequence; rejects empty input and non-finite entries.
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sequence length must be at least 1"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("entry {} is not finite", i + 1)));
        }
        Ok(Self { values })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![S::zero(); len])
    }

    /// `e^j` at truncation `len`.
    pub fn unit_vector(j: usize, len: usize) -> Result<Self> {
        if j == 0 || j > len {
            return Err(Error::invalid(format!(
                "unit vector index {j} outside 1..={len}"
            )));
        }
        let mut values = vec![S::zero(); len];
        values[j - 1] = S::one();
        Ok(Self { values })
    }

    /// Constant sequence `(c, c, ..., c)` of length `len`.
    pub fn constant(c: S, len: usize) -> Result<Self> {
        Self::new(vec![c; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; sequences carry at least one stored entry.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    /// Entry `n` (1-based); zero beyond the stored length.
    pub fn get(&self, n: usize) -> S {
        assert!(n >= 1, "sequence indices are 1-based");
        self.values.get(n - 1).copied().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Copy zero-padded (or kept) to at least `len` entries.
    pub fn padded(&self, len: usize) -> Self {
        let mut values = self.values.clone();
        if values.len() < len {
            values.resize(len, S::zero());
        }
        Self { values }
    }

    pub fn scaled(&self, t: S) -> Self {
        Self {
            values: self.values.iter().map(|&v| v * t).collect(),
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    /// Largest absolute entry (`‖·‖_∞`).
    pub fn max_abs(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |m, v| m.max(v.abs()))
    }

    /// Entrywise sum, zero-padding the shorter operand.
    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    /// Entrywise difference, zero-padding the shorter operand.
    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        let len = self.len().max(other.len());
        let values = (1..=len).map(|n| f(self.get(n), other.get(n))).collect();
        Self { values }
    }

    /// Applies a permutation of positions: entry `i` moves to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::invalid("permutation length differs from sequence length"));
        }
        let mut seen = vec![false; perm.len()];
        let mut values = vec![S::zero(); perm.len()];
        for (i, &target) in perm.iter().enumerate() {
            if target >= perm.len() || seen[target] {
                return Err(Error::invalid("not a permutation"));
            }
            seen[target] = true;
            values[target] = self.values[i];
        }
        Ok(Self { values })
    }
}

/// Equality of two stored prefixes after padding the shorter with zeros.
fn padded_eq<S: PartialEq + Zero>(a: &[S], b: &[S]) -> bool {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    short.iter().zip(long).all(|(x, y)| x == y) && long[short.len()..].iter().all(Zero::is_zero)
}

impl<S: PartialEq + Zero> PartialEq for FiniteSequence<S> {
    fn eq(&self, other: &Self) -> bool {
        padded_eq(&self.values, &other.values)
    }
}

impl<S: Scalar> TryFrom<Vec<S>> for FiniteSequence<S> {
    type Error = Error;

    fn try_from(values: Vec<S>) -> Result<Self> {
        Self::new(values)
    }
}

impl<S> From<FiniteSequence<S>> for Vec<S> {
    fn from(seq: FiniteSequence<S>) -> Self {
        seq.values
    }
}

/// Nonincreasing, nonnegative values `a*_1 ≥ a*_2 ≥ … ≥ 0`.
#[derive(Debug, Clone, Serialize)]
#[serde(into = "Vec<S>")]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
pub struct Rearrangement<S> {
    values: Vec<S>,
}

impl<S: Scalar> Rearrangement<S> {
    /// Wraps values that are already nonnegative and nonincreasing.
    pub fn from_nonincreasing(values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("rearrangement length must be at least 1"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < S::zero()) {
            return Err(Error::invalid("rearrangement entries must be finite and nonnegative"));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("rearrangement entries must be nonincreasing"));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// `a*_n` (1-based); zero beyond the stored length.
    pub fn get(&self, n: usize) -> S {
        assert!(n >= 1, "rearrangement indices are 1-based");
        self.values.get(n - 1).copied().unwrap_or_else(S::zero)
    }

    /// Number of strictly positive entries.
    pub fn support_len(&self) -> usize {
        self.values.partition_point(|v| *v > S::zero())
    }

    pub fn to_sequence(&self) -> FiniteSequence<S> {
        FiniteSequence {
            values: self.values.clone(),
        }
    }
}

impl<S: PartialEq + Zero> PartialEq for Rearrangement<S> {
    fn eq(&self, other: &Self) -> bool {
        padded_eq(&self.values, &other.values)
    }
}

impl<S> From<Rearrangement<S>> for Vec<S> {
    fn from(r: Rearrangement<S>) -> Self {
        r.values
    }
}

/// `m_a(ω)`: how many entries satisfy `|a_n| > ω`.
pub fn distribution<S: Scalar>(a: &FiniteSequence<S>, omega: S) -> Result<usize> {
    if !omega.is_finite() || omega < S::zero() {
        return Err(Error::invalid("distribution level must be finite and nonnegative"));
    }
    Ok(a.values().iter().filter(|v| v.abs() > omega).count())
}

/// Decreasing rearrangement: absolute values sorted nonincreasingly.
pub fn rearrange<S: Scalar>(a: &FiniteSequence<S>) -> Rearrangement<S> {
    let mut values: Vec<S> = a.values().iter().map(|v| v.abs()).collect();
    sort_nonincreasing(&mut values);
    Rearrangement { values }
}

pub(crate) fn sort_nonincreasing<S: Scalar>(values: &mut [S]) {
    // entries are finite, so partial_cmp never fails
    values.sort_unstable_by(|x, y| y.partial_cmp(x).expect("finite entries"));
}

/// `e^j` at truncation `len`.
pub fn unit_vector<S: Scalar>(j: usize, len: usize) -> Result<FiniteSequence<S>> {
    FiniteSequence::unit_vector(j, len)
}
