//! Inclusion constants and operator norms for embeddings between Lorentz
//! sequence spaces, `c₀` and `ℓ∞`.
//!
//! [`classify`] dispatches on the exponents and returns an
//! [`EmbeddingVerdict`]: whether the inclusion is proved, the proved
//! constant, the exact operator norm where it is known, and what is known
//! about the ball measure of non-compactness.
//!
//! Same-`p` inclusions `ℓ^{p,q₁} ↪ ℓ^{p,q₂}`, `q₁ < q₂`:
//!
//! | condition  | constant                      |
//! |------------|-------------------------------|
//! | `p < q₁`   | `(q₁/p)^{1/q₁ − 1/q₂}`        |
//! | `p ≥ q₁`   | `1`                           |
//!
//! Increasing-`p` inclusions `ℓ^{p₁,q₁} ↪ ℓ^{p₂,q₂}`, `p₁ < p₂`, in
//! dispatch order:
//!
//! | condition                | constant                                  |
//! |--------------------------|-------------------------------------------|
//! | `q₁ ≤ p₁`, `q₁ ≤ q₂`     | `1`                                       |
//! | `p₁ < q₁ = ∞`, `q₂ < ∞`  | `(Σ n^{q₂/p₂ − q₂/p₁ − 1})^{1/q₂} =: Z`   |
//! | `p₁ < q₁ < q₂`           | `(q₁/p₁)^{1/q₁ − 1/q₂}`                   |
//! | `p₁ < q₁ = q₂ < ∞`       | `1`                                       |
//! | `q₁ = q₂ = ∞`            | `1`                                       |
//! | `q₂ < q₁ ≤ p₁`           | `Z`                                       |
//! | `p₁ < q₁ < ∞`, `q₂ < q₁` | `(q₁/p₁)^{1/q₁} Z`                        |
//!
//! The last two rows route through `ℓ^{p₁,∞}`. The unit constant is false
//! there, since bounding `(a*_n)^{q₂−q₁}` from above needs `q₂ ≥ q₁`.
//!
//! Exact norms are reported for exponents `q₁, q₂ ≥ 1`; the unit constants
//! are attained at `e¹`, the series constant at `(n^{-1/p₁})_n`, and the
//! same-`p` weak-type target `ℓ^{p,∞}` has norm `(q/p)^{1/q}` approached
//! only in the limit by block indicators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::space::{LorentzParams, SpaceDescriptor};
use crate::summation::CompensatedSum;

/// Source and target of an identity embedding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct EmbeddingSpec<S> {
    pub source: SpaceDescriptor<S>,
    pub target: SpaceDescriptor<S>,
}

impl<S: Scalar> EmbeddingSpec<S> {
    pub fn new(source: SpaceDescriptor<S>, target: SpaceDescriptor<S>) -> Self {
        Self { source, target }
    }

    /// Source and target carry the same norm.
    pub fn is_identity(&self) -> bool {
        self.source == self.target || (self.source.has_sup_norm() && self.target.has_sup_norm())
    }
}

/// Which inclusion result produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremTag {
    Identity,
    /// same `p`, `p < q₁ < q₂`
    SamePLargeQ,
    /// same `p`, `q₁ ≤ p`, `q₁ < q₂`
    SamePSmallQ,
    /// `p₁ < p₂`, `q₁ ≤ p₁`, `q₁ ≤ q₂`
    QBelowP,
    /// `p₁ < p₂`, `p₁ < q₁ = ∞`, `q₂ < ∞`
    WeakSourceSeries,
    /// `p₁ < p₂`, `p₁ < q₁ < q₂`
    PowerConstant,
    /// `p₁ < p₂`, `p₁ < q₁ = q₂ < ∞`
    QDecreasing,
    /// `p₁ < p₂`, `q₂ < q₁ < ∞`: through `ℓ^{p₁,∞}`
    ThroughWeakType,
    /// `p₁ < p₂`, `q₁ = q₂ = ∞`
    BothWeak,
    /// `ℓ^{p,q} → c₀`
    IntoC0,
    /// `ℓ^{p,q} → ℓ∞`
    IntoSup,
    /// `c₀ → ℓ∞`
    C0IntoSup,
    Uncovered,
}

/// Reason behind a maximal non-compactness verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalityTag {
    /// both spaces are rearrangement-invariant lattices inside `c₀`
    RiLatticeInC0,
    /// sign-flip construction for `c₀ → ℓ∞`
    C0IntoSup,
    /// a span bound below twice the norm yields a constant-sequence cover
    SpanCover,
    /// the span bound equals twice the norm; nothing is concluded
    SpanBoundDegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Attainment {
    Attained,
    LimitOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingVerdict<S> {
    pub embedded: bool,
    /// Proved inclusion constant; an interval when it is a series.
    pub constant: Option<Interval<S>>,
    pub exact_norm: Option<Interval<S>>,
    pub theorem_tag: TheoremTag,
    pub maximally_noncompact: Option<bool>,
    pub maximality_tag: Option<MaximalityTag>,
    /// Upper bound on the ball measure of non-compactness.
    pub alpha_upper: Option<S>,
    pub attainment: Option<Attainment>,
}

impl<S: Scalar> EmbeddingVerdict<S> {
    fn uncovered() -> Self {
        Self {
            embedded: false,
            constant: None,
            exact_norm: None,
            theorem_tag: TheoremTag::Uncovered,
            maximally_noncompact: None,
            maximality_tag: None,
            alpha_upper: None,
            attainment: None,
        }
    }

    fn embedded(tag: TheoremTag, constant: Interval<S>) -> Self {
        Self {
            embedded: true,
            constant: Some(constant),
            exact_norm: None,
            theorem_tag: tag,
            maximally_noncompact: None,
            maximality_tag: None,
            alpha_upper: None,
            attainment: None,
        }
    }

    fn with_exact(mut self, exact: Interval<S>, attainment: Attainment) -> Self {
        self.exact_norm = Some(exact);
        self.attainment = Some(attainment);
        self
    }

    fn with_maximality(mut self, maximal: Option<bool>, tag: MaximalityTag) -> Self {
        self.maximally_noncompact = maximal;
        self.maximality_tag = Some(tag);
        self
    }

    /// Best known upper bound on `‖I‖`: the exact norm, else the constant.
    pub fn norm_upper(&self) -> Option<S> {
        self.exact_norm.or(self.constant).map(|i| i.hi)
    }
}

/// Relative tolerance used for series constants inside [`classify`].
pub fn classify_rel_tol<S: Scalar>() -> S {
    S::of(1e-12).max(S::of(64.0) * S::epsilon())
}

pub fn classify<S: Scalar>(spec: &EmbeddingSpec<S>) -> Result<EmbeddingVerdict<S>> {
    use SpaceDescriptor::*;

    if matches!(spec.source, WeightedLp { .. }) || matches!(spec.target, WeightedLp { .. }) {
        return Err(Error::UnsupportedPair(format!(
            "{} -> {}: the weighted space is only available through the alpha bracket example",
            spec.source, spec.target
        )));
    }
    let one = Interval::point(S::one());

    if spec.is_identity() {
        let v = EmbeddingVerdict::embedded(TheoremTag::Identity, one)
            .with_exact(one, Attainment::Attained);
        return Ok(if spec.source.inside_c0() {
            v.with_maximality(Some(true), MaximalityTag::RiLatticeInC0)
        } else {
            v
        });
    }

    match (spec.source, spec.target) {
        (C0, t) if t.has_sup_norm() => Ok(EmbeddingVerdict::embedded(TheoremTag::C0IntoSup, one)
            .with_exact(one, Attainment::Attained)
            .with_maximality(Some(true), MaximalityTag::C0IntoSup)),
        (Lorentz(src), _) if !src.is_sup() => match spec.target {
            C0 => Ok(EmbeddingVerdict::embedded(TheoremTag::IntoC0, one)
                .with_exact(one, Attainment::Attained)
                .with_maximality(Some(true), MaximalityTag::RiLatticeInC0)),
            t if t.has_sup_norm() => Ok(into_sup(&src)),
            Lorentz(tgt) => lorentz_pair(&src, &tgt),
            _ => Ok(EmbeddingVerdict::uncovered()),
        },
        _ => Ok(EmbeddingVerdict::uncovered()),
    }
}

fn into_sup<S: Scalar>(src: &LorentzParams<S>) -> EmbeddingVerdict<S> {
    let one = Interval::point(S::one());
    let (p, q) = (src.p(), src.q());
    let base = EmbeddingVerdict::embedded(TheoremTag::IntoSup, one)
        .with_exact(one, Attainment::Attained);
    let (alpha, tag, maximal) = if q.is_finite() && q >= S::one() && p <= q {
        (S::two().powf(-q.recip()), MaximalityTag::SpanCover, Some(false))
    } else if q < S::one() && p <= q {
        (S::half(), MaximalityTag::SpanCover, Some(false))
    } else if p.is_finite() {
        // q = ∞ with p < q, or q < p < ∞
        let alpha = (S::one() + S::two().powf(-p.recip())) * S::half();
        (alpha, MaximalityTag::SpanCover, Some(false))
    } else {
        // p = ∞, q < ∞: the span bound is 2 = 2‖I‖
        (S::one(), MaximalityTag::SpanBoundDegenerate, None)
    };
    let mut v = base.with_maximality(maximal, tag);
    v.alpha_upper = Some(alpha);
    v
}

fn power_constant<S: Scalar>(q1: S, p: S, q2: S) -> S {
    (q1 / p).powf(q1.recip() - q2.recip())
}

fn lorentz_pair<S: Scalar>(
    src: &LorentzParams<S>,
    tgt: &LorentzParams<S>,
) -> Result<EmbeddingVerdict<S>> {
    let (p1, q1, p2, q2) = (src.p(), src.q(), tgt.p(), tgt.q());
    let one = Interval::point(S::one());
    let exact_range = q1 >= S::one() && q2 >= S::one();

    let verdict = if p1 > p2 {
        return Ok(EmbeddingVerdict::uncovered());
    } else if p1 == p2 {
        if q1 > q2 {
            return Ok(EmbeddingVerdict::uncovered());
        }
        if p1 < q1 {
            let c = Interval::point(power_constant(q1, p1, q2));
            let v = EmbeddingVerdict::embedded(TheoremTag::SamePLargeQ, c);
            if q2.is_infinite() {
                // block indicators approach (q/p)^{1/q} without reaching it
                v.with_exact(c, Attainment::LimitOnly)
            } else {
                v
            }
        } else {
            let v = EmbeddingVerdict::embedded(TheoremTag::SamePSmallQ, one);
            if exact_range {
                v.with_exact(one, Attainment::Attained)
            } else {
                v
            }
        }
    } else if q1 <= p1 {
        if q2 >= q1 {
            unit_case(TheoremTag::QBelowP, exact_range)
        } else {
            // a*_n ≤ n^{-1/p₁}‖a‖_{p₁,q₁} for q₁ ≤ p₁
            through_weak_type(p1, p2, q2, S::one())?
        }
    } else if q1.is_infinite() && q2.is_finite() {
        let c = series_norm(p1, p2, q2, classify_rel_tol())?;
        EmbeddingVerdict::embedded(TheoremTag::WeakSourceSeries, c)
            .with_exact(c, Attainment::Attained)
    } else if q1 < q2 {
        EmbeddingVerdict::embedded(
            TheoremTag::PowerConstant,
            Interval::point(power_constant(q1, p1, q2)),
        )
    } else if q1.is_finite() {
        if q1 == q2 {
            unit_case(TheoremTag::QDecreasing, exact_range)
        } else {
            // a*_n ≤ (q₁/p₁)^{1/q₁} n^{-1/p₁}‖a‖_{p₁,q₁} for p₁ < q₁
            through_weak_type(p1, p2, q2, (q1 / p1).powf(q1.recip()))?
        }
    } else {
        unit_case(TheoremTag::BothWeak, exact_range)
    };

    // both spaces sit in c₀ here: the target is not ℓ∞-like and p₁ ≤ p₂
    debug_assert!(src.inside_c0() && tgt.inside_c0());
    Ok(verdict.with_maximality(Some(true), MaximalityTag::RiLatticeInC0))
}

/// `ℓ^{p₁,q₁} ↪ ℓ^{p₁,∞} ↪ ℓ^{p₂,q₂}`: the weak-type constant `weak` times
/// the series constant. Used for `q₂ < q₁` in the two unit-constant cases,
/// where the unit bound fails: `(1, 1)` has `‖·‖_{3,1}/‖·‖_{2,2} ≈ 1.153`
/// and `‖·‖_{1.5,1}/‖·‖_{1,2} ≈ 1.036`.
fn through_weak_type<S: Scalar>(p1: S, p2: S, q2: S, weak: S) -> Result<EmbeddingVerdict<S>> {
    let series = series_norm(p1, p2, q2, classify_rel_tol())?;
    Ok(EmbeddingVerdict::embedded(
        TheoremTag::ThroughWeakType,
        series.mul(&Interval::point(weak)),
    ))
}

fn unit_case<S: Scalar>(tag: TheoremTag, exact_range: bool) -> EmbeddingVerdict<S> {
    let one = Interval::point(S::one());
    let v = EmbeddingVerdict::embedded(tag, one);
    if exact_range {
        v.with_exact(one, Attainment::Attained)
    } else {
        v
    }
}

const MAX_SERIES_TERMS: usize = 1 << 27;

/// Bracket for `ζ(s) = Σ_{n≥1} n^{-s}`, `s > 1`, with relative width at most
/// `rel_tol`.
pub fn zeta_bracket<S: Scalar>(s: S, rel_tol: S) -> Result<Interval<S>> {
    check_rel_tol(rel_tol)?;
    zeta_bracket_until(s, rel_tol, |b| b.width() <= rel_tol * b.lo)
}

/// `(Σ_{n≥1} n^{q₂/p₂ − q₂/p₁ − 1})^{1/q₂}` as a bracket `[lo, hi]` with
/// `hi − lo ≤ rel_tol · lo`.
pub fn series_norm<S: Scalar>(p1: S, p2: S, q2: S, rel_tol: S) -> Result<Interval<S>> {
    for (name, v) in [("p1", p1), ("p2", p2)] {
        if v.is_nan() || v <= S::zero() {
            return Err(Error::invalid(format!("{name} must be positive")));
        }
    }
    if !(q2 > S::zero() && q2.is_finite()) {
        return Err(Error::invalid("q2 must be positive and finite"));
    }
    check_rel_tol(rel_tol)?;
    let s = S::one() + q2 / p1 - q2 / p2;
    let inv_q2 = q2.recip();
    let sum = zeta_bracket_until(s, rel_tol, |b| {
        let root = b.map_monotone(|v| v.powf(inv_q2));
        root.width() <= rel_tol * root.lo
    })?;
    Ok(sum.map_monotone(|v| v.powf(inv_q2)))
}

fn check_rel_tol<S: Scalar>(rel_tol: S) -> Result<()> {
    let floor = S::of(32.0) * S::epsilon();
    if !(rel_tol >= floor) || !rel_tol.is_finite() {
        return Err(Error::invalid(format!(
            "rel_tol must be finite and at least {floor} at this precision"
        )));
    }
    Ok(())
}

/// Partial sum to `N` plus a convexity bracket for the tail of the
/// decreasing convex `f(x) = x^{-s}`:
///
/// `∫_{N+1}^∞ f + f(N+1)/2 ≤ Σ_{n>N} f(n) ≤ ∫_{N+1/2}^∞ f`
///
/// (trapezoid rule from below, midpoint rule from above). Both ends move
/// monotonically inward as `N` grows; `N` doubles until `accept` holds.
fn zeta_bracket_until<S: Scalar>(
    s: S,
    rel_tol: S,
    accept: impl Fn(&Interval<S>) -> bool,
) -> Result<Interval<S>> {
    if s.is_nan() || s <= S::one() {
        return Err(Error::DivergentSeries {
            exponent: s.to_f64_lossy(),
        });
    }
    let one = S::one();
    let f = |x: S| x.powf(-s);
    let tail_integral = |x: S| x.powf(one - s) / (s - one);
    // rounding allowance on each endpoint, in units of epsilon
    let slack = S::of(8.0) * S::epsilon();

    let mut acc = CompensatedSum::new();
    let mut n = 0usize;
    let mut limit = 64usize;
    loop {
        while n < limit {
            n += 1;
            acc.add(f(S::of_usize(n)));
        }
        let big_n = S::of_usize(n);
        let partial = acc.value();
        let lo = partial + tail_integral(big_n + one) + f(big_n + one) * S::half();
        let hi = partial + tail_integral(big_n + S::half());
        let bracket = Interval::new(lo * (one - slack), hi * (one + slack));
        if accept(&bracket) {
            return Ok(bracket);
        }
        if n >= MAX_SERIES_TERMS {
            return Err(Error::NotConverged {
                rel_tol: rel_tol.to_f64_lossy(),
                terms: n,
            });
        }
        limit = (limit * 2).min(MAX_SERIES_TERMS);
    }
}
