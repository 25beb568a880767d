use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::norm;
use crate::sampling::scan_unit_sphere;
use crate::scalar::Scalar;
use crate::sequence::FiniteSequence;
use crate::space::SpaceDescriptor;

/// Which span estimate applies to the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanCase {
    /// `1 ≤ q < ∞`, `p ≤ q`: `2^{1−1/q}`
    QAtLeastOne,
    /// `0 < q < 1`, `p ≤ q`: `1`
    QBelowOne,
    /// `q = ∞` or `q < p`: `1 + 2^{−1/p}`
    WeakOrQBelowP,
    /// `c₀`: `2`
    C0,
}

/// Upper bound on `sup_{‖y‖≤1} (sup_n y_n − inf_n y_n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
pub struct SpanBound<S: Scalar> {
    pub value: S,
    pub source_case: SpanCase,
    /// unit-ball element attaining the bound, when one is known
    pub realizer: Option<FiniteSequence<S>>,
}

pub fn span_upper_bound<S: Scalar>(space: &SpaceDescriptor<S>) -> Result<SpanBound<S>> {
    match space {
        SpaceDescriptor::C0 => Ok(SpanBound {
            value: S::two(),
            source_case: SpanCase::C0,
            realizer: Some(FiniteSequence::new(vec![S::one(), -S::one()])?),
        }),
        SpaceDescriptor::Lorentz(lp) if lp.inside_c0() => {
            let (p, q) = (lp.p(), lp.q());
            let (value, source_case) = if p <= q && q.is_finite() && q >= S::one() {
                (S::two().powf(S::one() - q.recip()), SpanCase::QAtLeastOne)
            } else if p <= q && q < S::one() {
                (S::one(), SpanCase::QBelowOne)
            } else {
                (S::one() + S::two().powf(-p.recip()), SpanCase::WeakOrQBelowP)
            };
            Ok(SpanBound {
                value,
                source_case,
                realizer: None,
            })
        }
        _ => Err(Error::Unsupported(format!(
            "no span bound for {space}: only Lorentz spaces inside c0 and c0 itself"
        ))),
    }
}

/// Largest entry range `max_n y_n − min_n y_n` over the `len` coordinates.
pub fn entry_range<S: Scalar>(y: &FiniteSequence<S>) -> S {
    let v = y.values();
    let hi = v.iter().copied().fold(S::neg_infinity(), S::max);
    let lo = v.iter().copied().fold(S::infinity(), S::min);
    hi - lo
}

/// Monte-Carlo lower bound on the span of the unit ball at truncation `len`.
///
/// Besides the random samples, the normalized pair `(1, −1, 0, …)` is always
/// probed. With `len = 1` every element has a single entry and the estimate
/// is 0.
pub fn span_estimate<S: Scalar>(
    space: &SpaceDescriptor<S>,
    len: usize,
    samples: usize,
    seed: u64,
) -> Result<S> {
    if len == 0 {
        return Err(Error::invalid("truncation must be at least 1"));
    }
    let mut best = S::zero();
    if len >= 2 {
        let mut v = vec![S::zero(); len];
        v[0] = S::one();
        v[1] = -S::one();
        let pair = FiniteSequence::new(v)?;
        let n = norm(&pair, space);
        best = entry_range(&pair.scaled(n.recip()));
    }
    let scan = scan_unit_sphere(space, len, samples, seed, None, entry_range);
    Ok(best.max(scan.max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn space(s: &str) -> SpaceDescriptor<f64> {
        s.parse().unwrap()
    }

    #[test]
    fn case_constants() {
        assert_relative_eq!(span_upper_bound(&space("lorentz:1,2")).unwrap().value, 2f64.sqrt());
        let b = span_upper_bound(&space("lorentz:1/4,1/2")).unwrap();
        assert_eq!((b.value, b.source_case), (1.0, SpanCase::QBelowOne));
        assert_eq!(span_upper_bound(&space("lorentz:1,inf")).unwrap().value, 1.5);
        assert_eq!(span_upper_bound(&space("lorentz:inf,2")).unwrap().value, 2.0);
        let c0 = span_upper_bound(&space("c0")).unwrap();
        assert_eq!(c0.value, 2.0);
        assert_eq!(entry_range(&c0.realizer.unwrap()), 2.0);
        assert!(matches!(span_upper_bound(&space("linf")), Err(Error::Unsupported(_))));
        assert!(matches!(span_upper_bound(&space("lorentz:inf,inf")), Err(Error::Unsupported(_))));
    }

    #[test]
    fn pair_attains_bound_for_l2() {
        let e = span_estimate(&space("lorentz:2,2"), 2, 10, 1).unwrap();
        assert_relative_eq!(e, 2f64.sqrt(), max_relative = 1e-12);
        assert_eq!(span_estimate(&space("c0"), 5, 10, 1).unwrap(), 2.0);
    }

    #[test]
    fn single_coordinate_has_zero_span() {
        assert_eq!(span_estimate(&space("lorentz:1,2"), 1, 100, 3).unwrap(), 0.0);
    }

    #[test]
    fn estimates_stay_below_bounds() {
        for s in ["lorentz:1,2", "lorentz:0.5,0.75", "lorentz:1,inf", "lorentz:3,1", "lorentz:2,2"] {
            let sp = space(s);
            let bound = span_upper_bound(&sp).unwrap().value;
            let est = span_estimate(&sp, 16, 2000, 9).unwrap();
            assert!(est <= bound + 1e-9, "{s}: {est} > {bound}");
        }
    }
}
