use serde::Serialize;

use crate::catalog::{classify, EmbeddingSpec, EmbeddingVerdict};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;
use crate::search::{estimate_operator_norm, SearchConfig};
use crate::space::SpaceDescriptor;

use super::cover::{build_constant_cover, verify_cover, weighted_axis_cover, CoverCertificate, CoverCheck};
use super::span::span_upper_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaBasis {
    /// `α(I) = ‖I‖`
    Maximal,
    /// constant-sequence covers of the image in `ℓ∞`
    ConstantCover,
    /// `ℓ_p` into the weighted space, covered along the first axis
    WeightedExample,
    /// only `0 ≤ α(I) ≤ ‖I‖`
    NormBound,
}

/// Bracket `lo ≤ α(I) ≤ hi` for the ball measure of non-compactness.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
pub struct AlphaBracket<S: Scalar> {
    pub lo: S,
    pub hi: S,
    pub maximal: bool,
    pub theorem_case: AlphaBasis,
    /// `‖I‖` when known exactly
    pub exact_norm: Option<Interval<S>>,
    /// sampled check of a cover backing `hi`
    pub cover: Option<CoverCertificate<S>>,
}

impl<S: Scalar> AlphaBracket<S> {
    /// `0 ≤ lo ≤ hi ≤ ‖I‖` against the upper end of `norm_upper`.
    pub fn is_consistent(&self, norm_upper: S) -> bool {
        S::zero() <= self.lo && self.lo <= self.hi && self.hi <= norm_upper
    }
}

fn checked_cover<S: Scalar>(
    cert: CoverCertificate<S>,
    samples: usize,
    seed: u64,
) -> Result<CoverCertificate<S>> {
    match verify_cover(&cert, samples, seed)? {
        CoverCheck::Covered(c) => Ok(c),
        CoverCheck::Refuted(r) => Err(Error::InvariantBreach(format!(
            "cover of radius {} refuted by sample {} at distance {}",
            r.radius, r.sample_index, r.min_distance
        ))),
    }
}

/// For `ℓ_p → wlp(p)`: `‖I‖ = 1` (at `e¹`) and `α(I) ≤ (1/2)^{1/p}`, the
/// infimum of radii covered by multiples of `e¹`.
fn weighted_example<S: Scalar>(
    p: S,
    len: usize,
    samples: usize,
    seed: u64,
) -> Result<AlphaBracket<S>> {
    let h = S::half().powf(p.recip());
    let cover = if samples > 0 {
        let rho = h + (S::one() - h) * S::of(1e-3);
        Some(checked_cover(weighted_axis_cover(p, rho, len)?, samples, seed)?)
    } else {
        None
    };
    Ok(AlphaBracket {
        lo: S::zero(),
        hi: h,
        maximal: false,
        theorem_case: AlphaBasis::WeightedExample,
        exact_norm: Some(Interval::point(S::one())),
        cover,
    })
}

/// Bracket for `α(I)` from the theorems that apply to `spec`, with covers
/// checked on `samples` random points at truncation `len` when `samples > 0`.
pub fn alpha_bracket<S: Scalar>(
    spec: &EmbeddingSpec<S>,
    len: usize,
    samples: usize,
    seed: u64,
) -> Result<AlphaBracket<S>> {
    if len == 0 {
        return Err(Error::invalid("truncation must be at least 1"));
    }
    if let SpaceDescriptor::WeightedLp { p } = spec.target {
        return match spec.source.lorentz_params() {
            Some(lp) if lp.p() == p && lp.q() == p => weighted_example(p, len, samples, seed),
            _ => Err(Error::Unsupported(format!(
                "{} -> {}: only lorentz:p,p -> wlp:p is supported",
                spec.source, spec.target
            ))),
        };
    }
    let verdict = match classify(spec) {
        Ok(v) if v.embedded => v,
        Ok(_) | Err(Error::UnsupportedPair(_)) => {
            return Err(Error::Unsupported(format!(
                "{} -> {} is not a classified embedding",
                spec.source, spec.target
            )))
        }
        Err(e) => return Err(e),
    };
    let norm_hi = verdict
        .norm_upper()
        .expect("embedded verdicts carry a constant");

    if verdict.maximally_noncompact == Some(true) {
        let (lo, hi) = match verdict.exact_norm {
            Some(exact) => (exact.lo, exact.hi),
            None => (search_lower_bound(spec, len, seed, &verdict)?, norm_hi),
        };
        return Ok(AlphaBracket {
            lo,
            hi,
            maximal: true,
            theorem_case: AlphaBasis::Maximal,
            exact_norm: verdict.exact_norm,
            cover: None,
        });
    }

    if let (Some(alpha), Some(false)) = (verdict.alpha_upper, verdict.maximally_noncompact) {
        let cover = if samples > 0 && spec.target.has_sup_norm() {
            let sigma = span_upper_bound(&spec.source)?.value;
            let rho = (sigma * S::half() + norm_hi) * S::half();
            Some(checked_cover(build_constant_cover(&spec.source, rho, len)?, samples, seed)?)
        } else {
            None
        };
        return Ok(AlphaBracket {
            lo: S::zero(),
            hi: alpha.min(norm_hi),
            maximal: false,
            theorem_case: AlphaBasis::ConstantCover,
            exact_norm: verdict.exact_norm,
            cover,
        });
    }

    Ok(AlphaBracket {
        lo: S::zero(),
        hi: norm_hi,
        maximal: false,
        theorem_case: AlphaBasis::NormBound,
        exact_norm: verdict.exact_norm,
        cover: None,
    })
}

/// Lower bound on `‖I‖` (hence on `α(I)` when maximal) from the closed-form
/// search families, capped by the proved constant.
fn search_lower_bound<S: Scalar>(
    spec: &EmbeddingSpec<S>,
    len: usize,
    seed: u64,
    verdict: &EmbeddingVerdict<S>,
) -> Result<S> {
    let cfg = SearchConfig {
        truncation: len,
        restarts: 1,
        seed,
        max_iters: 1,
        step_tolerance: 1e-6,
        exploratory: false,
    };
    let found = estimate_operator_norm(spec, &cfg)?.best_value;
    Ok(found.min(verdict.norm_upper().unwrap_or(found)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(src: &str, tgt: &str) -> EmbeddingSpec<f64> {
        EmbeddingSpec::new(src.parse().unwrap(), tgt.parse().unwrap())
    }

    #[test]
    fn maximal_pair() {
        let b = alpha_bracket(&spec("lorentz:1,1", "lorentz:2,2"), 16, 0, 1).unwrap();
        assert_eq!((b.lo, b.hi, b.maximal), (1.0, 1.0, true));
    }

    #[test]
    fn into_sup_with_cover() {
        let b = alpha_bracket(&spec("lorentz:1,2", "linf"), 16, 500, 1).unwrap();
        assert_eq!(b.lo, 0.0);
        assert_relative_eq!(b.hi, 0.5f64.sqrt(), max_relative = 1e-15);
        let cover = b.cover.unwrap();
        assert!(cover.radius < 1.0 && cover.max_observed_distance <= cover.radius);
    }

    #[test]
    fn weighted_example_bracket() {
        let b = alpha_bracket(&spec("lorentz:2,2", "wlp:2"), 16, 500, 1).unwrap();
        assert_eq!(b.lo, 0.0);
        assert_relative_eq!(b.hi, 0.5f64.sqrt(), max_relative = 1e-15);
        assert!(b.cover.is_some());
        assert!(matches!(
            alpha_bracket(&spec("lorentz:1,1", "wlp:2"), 16, 0, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn power_constant_case_uses_search_for_lo() {
        let b = alpha_bracket(&spec("lorentz:1,2", "lorentz:2,4"), 64, 0, 1).unwrap();
        assert!(b.maximal);
        assert!(b.lo >= 1.0 && b.lo <= b.hi);
        assert_relative_eq!(b.hi, 2f64.powf(0.25), max_relative = 1e-14);
    }

    #[test]
    fn uncovered_is_unsupported() {
        assert!(matches!(
            alpha_bracket(&spec("lorentz:2,2", "lorentz:1,1"), 8, 0, 1),
            Err(Error::Unsupported(_))
        ));
    }
}
