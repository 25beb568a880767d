//! Norm evaluation in every supported space, and the elementary inequality
//! audits that accompany the Lorentz quasi-norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{pow, Scalar};
use crate::sequence::{rearrange, FiniteSequence};
use crate::space::{LorentzParams, SpaceDescriptor};
use crate::summation::CompensatedSum;

/// `‖a‖` in the given space. Exact up to floating-point rounding: sums and
/// sups run over the stored entries only, the zero tail contributes nothing.
pub fn norm<S: Scalar>(a: &FiniteSequence<S>, space: &SpaceDescriptor<S>) -> S {
    match space {
        SpaceDescriptor::Lorentz(lp) => {
            let r = rearrange(a);
            lorentz_norm_sorted(r.values(), lp)
        }
        SpaceDescriptor::Sup | SpaceDescriptor::C0 => a.max_abs(),
        SpaceDescriptor::WeightedLp { p } => weighted_lp_norm(a.values(), *p),
    }
}

/// Lorentz quasi-norm of values that are already nonnegative and nonincreasing.
pub fn lorentz_norm_sorted<S: Scalar>(sorted: &[S], lp: &LorentzParams<S>) -> S {
    let support = sorted.partition_point(|v| *v > S::zero());
    let sorted = &sorted[..support];
    if lp.q_is_finite() {
        let q = lp.q();
        let weight_exp = q * lp.inv_p() - S::one();
        let mut acc = CompensatedSum::new();
        for (i, &v) in sorted.iter().enumerate() {
            let n = S::of_usize(i + 1);
            acc.add(pow(v, q) * pow(n, weight_exp));
        }
        pow(acc.value(), lp.inv_q())
    } else {
        let inv_p = lp.inv_p();
        sorted
            .iter()
            .enumerate()
            .map(|(i, &v)| pow(S::of_usize(i + 1), inv_p) * v)
            .fold(S::zero(), S::max)
    }
}

fn weighted_lp_norm<S: Scalar>(values: &[S], p: S) -> S {
    let mut acc = CompensatedSum::new();
    for (i, v) in values.iter().enumerate() {
        let term = pow(v.abs(), p);
        acc.add(if i == 0 { term } else { term * S::half() });
    }
    pow(acc.value(), p.recip())
}

/// Norm evaluator for nonincreasing nonnegative profiles of bounded length,
/// with the index weights precomputed. Used by the extremal search where the
/// same space is evaluated many thousand times.
#[derive(Debug, Clone)]
pub struct SortedNorm<S> {
    kind: SortedKind<S>,
}

#[derive(Debug, Clone)]
enum SortedKind<S> {
    /// `(Σ v_n^q w_n)^{1/q}` with `w_n = n^{q/p-1}`
    Sum { q: S, inv_q: S, weights: Vec<S> },
    /// `sup_n s_n v_n` with `s_n = n^{1/p}`
    WeightedSup { scale: Vec<S> },
    /// `v_1`
    First,
}

impl<S: Scalar> SortedNorm<S> {
    /// Evaluator for profiles of length at most `max_len`. Only
    /// rearrangement-invariant spaces qualify.
    pub fn new(space: &SpaceDescriptor<S>, max_len: usize) -> Result<Self> {
        let kind = match space {
            SpaceDescriptor::Lorentz(lp) if lp.q_is_finite() => {
                let q = lp.q();
                let exp = q * lp.inv_p() - S::one();
                SortedKind::Sum {
                    q,
                    inv_q: lp.inv_q(),
                    weights: (1..=max_len).map(|n| pow(S::of_usize(n), exp)).collect(),
                }
            }
            SpaceDescriptor::Lorentz(lp) => {
                let inv_p = lp.inv_p();
                if inv_p.is_zero() {
                    SortedKind::First
                } else {
                    SortedKind::WeightedSup {
                        scale: (1..=max_len).map(|n| pow(S::of_usize(n), inv_p)).collect(),
                    }
                }
            }
            SpaceDescriptor::Sup | SpaceDescriptor::C0 => SortedKind::First,
            SpaceDescriptor::WeightedLp { .. } => {
                return Err(Error::Unsupported(format!(
                    "{space} is not rearrangement invariant"
                )))
            }
        };
        Ok(Self { kind })
    }

    /// Norm of a nonnegative nonincreasing profile.
    pub fn eval(&self, sorted: &[S]) -> S {
        match &self.kind {
            SortedKind::Sum { q, inv_q, weights } => {
                let mut acc = CompensatedSum::new();
                for (&v, &w) in sorted.iter().zip(weights) {
                    if v <= S::zero() {
                        break;
                    }
                    acc.add(pow(v, *q) * w);
                }
                pow(acc.value(), *inv_q)
            }
            SortedKind::WeightedSup { scale } => sorted
                .iter()
                .zip(scale)
                .map(|(&v, &s)| v * s)
                .fold(S::zero(), S::max),
            SortedKind::First => sorted.first().copied().unwrap_or_else(S::zero),
        }
    }

    /// Norms of every truncation `profile[..k]`, `k = 1..=len`, in one pass.
    pub fn prefix_norms(&self, profile: &[S]) -> Vec<S> {
        match &self.kind {
            SortedKind::Sum { q, inv_q, weights } => {
                let mut acc = CompensatedSum::new();
                profile
                    .iter()
                    .zip(weights)
                    .map(|(&v, &w)| {
                        acc.add(pow(v, *q) * w);
                        pow(acc.value(), *inv_q)
                    })
                    .collect()
            }
            SortedKind::WeightedSup { scale } => {
                let mut best = S::zero();
                profile
                    .iter()
                    .zip(scale)
                    .map(|(&v, &s)| {
                        best = best.max(v * s);
                        best
                    })
                    .collect()
            }
            SortedKind::First => {
                let first = profile.first().copied().unwrap_or_else(S::zero);
                vec![first; profile.len()]
            }
        }
    }
}

/// `2^{1/p}(‖a‖+‖b‖) − ‖a+b‖` in `ℓ^{p,q}`.
///
/// Nonnegative whenever [`LorentzParams::quasi_triangle_guaranteed`] holds;
/// outside that range the value can be negative (e.g. `p = ∞, q = ½`).
pub fn quasi_triangle_defect<S: Scalar>(
    a: &FiniteSequence<S>,
    b: &FiniteSequence<S>,
    params: &LorentzParams<S>,
) -> S {
    let space = SpaceDescriptor::Lorentz(*params);
    let constant = S::two().powf(params.inv_p());
    constant * (norm(a, &space) + norm(b, &space)) - norm(&a.add(b), &space)
}

/// `‖a‖+‖b‖ − ‖a+b‖`, the plain triangle defect.
pub fn triangle_defect<S: Scalar>(
    a: &FiniteSequence<S>,
    b: &FiniteSequence<S>,
    space: &SpaceDescriptor<S>,
) -> S {
    norm(a, space) + norm(b, space) - norm(&a.add(b), space)
}

/// Defects of the two scalar power inequalities. Exactly one is present:
/// `power_mean` for `q ≥ 1`, `subadditive` for `0 < q < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarDefects<S> {
    /// `2^{q-1}(x^q+y^q) − (x+y)^q`
    pub power_mean: Option<S>,
    /// `x^q + y^q − (x+y)^q`
    pub subadditive: Option<S>,
}

pub fn scalar_inequality_audit<S: Scalar>(x: S, y: S, q: S) -> Result<ScalarDefects<S>> {
    if !(q > S::zero()) || !q.is_finite() {
        return Err(Error::invalid(format!("q must be positive and finite, got {q}")));
    }
    if !(x > S::zero() && y > S::zero()) || !x.is_finite() || !y.is_finite() {
        return Err(Error::invalid("x and y must be positive and finite"));
    }
    let lhs = pow(x + y, q);
    let powers = pow(x, q) + pow(y, q);
    Ok(if q >= S::one() {
        ScalarDefects {
            power_mean: Some(S::two().powf(q - S::one()) * powers - lhs),
            subadditive: None,
        }
    } else {
        ScalarDefects {
            power_mean: None,
            subadditive: Some(powers - lhs),
        }
    })
}

/// Constant `C` in `a*_n ≤ C n^{-1/p} ‖a‖_{p,q}`: `(q/p)^{1/q}` for `p ≤ q`,
/// `1` for `q < p`. Requires `q < ∞`.
pub fn rearrangement_bound_constant<S: Scalar>(params: &LorentzParams<S>) -> Result<S> {
    if !params.q_is_finite() {
        return Err(Error::invalid("rearrangement bound requires q < inf"));
    }
    let (p, q) = (params.p(), params.q());
    Ok(if p <= q {
        (q / p).powf(q.recip())
    } else {
        S::one()
    })
}

/// `C n^{-1/p} ‖a‖_{p,q} − a*_n` for every stored index `n`.
pub fn rearrangement_bound_audit<S: Scalar>(
    a: &FiniteSequence<S>,
    params: &LorentzParams<S>,
) -> Result<Vec<S>> {
    let c = rearrangement_bound_constant(params)?;
    let r = rearrangement(a);
    let total = lorentz_norm_sorted(&r, params);
    let inv_p = params.inv_p();
    Ok(r.iter()
        .enumerate()
        .map(|(i, &v)| c * pow(S::of_usize(i + 1), -inv_p) * total - v)
        .collect())
}

fn rearrangement<S: Scalar>(a: &FiniteSequence<S>) -> Vec<S> {
    rearrange(a).into()
}
