//! Numerical lower bounds for `‖I : ℓ → w‖` at a finite truncation.
//!
//! By rearrangement invariance the supremum may be taken over nonnegative
//! nonincreasing profiles of length `L`. Two closed-form families are scanned
//! first: block indicators `(1, …, 1, 0, …)` of every length `k ≤ L`, and the
//! power decay `(n^{-1/p₁})` truncated at every `k ≤ L`. A seeded multi-start
//! local search then tries to improve on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{classify, EmbeddingSpec};
use crate::error::{Error, Result};
use crate::isotonic::project_nonincreasing_nonnegative;
use crate::norms::{norm, SortedNorm};
use crate::scalar::Scalar;
use crate::sequence::Rearrangement;
use crate::space::SpaceDescriptor;
use crate::summation::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// truncation length `L`
    pub truncation: usize,
    pub restarts: usize,
    pub seed: u64,
    /// proposal evaluations per restart
    pub max_iters: usize,
    /// refinement stops once a sweep gains less than this (relative) and the
    /// step has shrunk below it
    pub step_tolerance: f64,
    /// allow pairs that [`classify`] does not cover
    #[serde(default)]
    pub exploratory: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            truncation: 1000,
            restarts: 4,
            seed: 0,
            max_iters: 2000,
            step_tolerance: 1e-6,
            exploratory: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.truncation == 0 {
            return Err(Error::invalid("truncation must be at least 1"));
        }
        if self.restarts == 0 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be at least 1"));
        }
        if !(self.step_tolerance > 0.0 && self.step_tolerance.is_finite()) {
            return Err(Error::invalid("step_tolerance must be positive and finite"));
        }
        Ok(())
    }

    pub fn with_truncation(self, truncation: usize) -> Self {
        Self { truncation, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    BlockIndicator,
    PowerDecay,
    RefinedRandom,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::BlockIndicator => "block-indicator",
            Self::PowerDecay => "power-decay",
            Self::RefinedRandom => "refined-random",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
pub struct SearchResult<S: Scalar> {
    pub best_value: S,
    /// unit-norm maximizer in the source space
    pub argmax: Rearrangement<S>,
    /// number of candidate profiles evaluated
    pub iterations_used: usize,
    pub family_tag: Family,
}

struct Candidate<S: Scalar> {
    ratio: S,
    profile: Vec<S>,
    family: Family,
}

/// Best truncation `profile[..k]` by target/source ratio.
fn best_prefix<S: Scalar>(
    profile: &[S],
    src: &SortedNorm<S>,
    tgt: &SortedNorm<S>,
    family: Family,
) -> Option<Candidate<S>> {
    let s = src.prefix_norms(profile);
    let t = tgt.prefix_norms(profile);
    let mut best: Option<(usize, S)> = None;
    for (k, (&sk, &tk)) in s.iter().zip(&t).enumerate() {
        if sk > S::zero() && sk.is_finite() {
            let r = tk / sk;
            if best.is_none_or(|(_, b)| r > b) {
                best = Some((k, r));
            }
        }
    }
    best.map(|(k, ratio)| Candidate {
        ratio,
        profile: profile[..=k].iter().map(|&v| v / s[k]).collect(),
        family,
    })
}

/// Ratio of a nonnegative nonincreasing profile, and the profile rescaled to
/// unit source norm.
fn evaluate<S: Scalar>(x: &[S], src: &SortedNorm<S>, tgt: &SortedNorm<S>) -> Option<(S, S)> {
    let n = src.eval(x);
    if n > S::zero() && n.is_finite() {
        Some((tgt.eval(x) / n, n))
    } else {
        None
    }
}

const SWEEP: usize = 32;

/// One seeded restart of the derivative-free refinement. Returns the best
/// ratio, its unit-norm profile and the number of evaluations spent.
fn refine<S: Scalar>(
    len: usize,
    seed: u64,
    cfg: &SearchConfig,
    src: &SortedNorm<S>,
    tgt: &SortedNorm<S>,
) -> (S, Vec<S>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<S> = (0..len)
        .map(|_| S::of(rng.sample::<f64, _>(StandardNormal).abs()))
        .collect();
    x.sort_by(|a, b| b.partial_cmp(a).expect("finite draws"));
    let (mut value, n) = evaluate(&x, src, tgt).expect("nonzero start");
    x.iter_mut().for_each(|v| *v /= n);

    let tol = S::of(cfg.step_tolerance);
    let mut step = S::half();
    let mut evals = 1;
    let mut candidate = x.clone();
    while evals < cfg.max_iters && step >= tol {
        let before = value;
        for _ in 0..SWEEP {
            if evals >= cfg.max_iters {
                break;
            }
            candidate.copy_from_slice(&x);
            let delta = step * x[0] * if rng.random::<bool>() { S::one() } else { -S::one() };
            let i = rng.random_range(0..len);
            if rng.random::<bool>() {
                candidate[i] += delta;
            } else {
                // shift the whole prefix, which moves towards block shapes
                candidate[..=i].iter_mut().for_each(|v| *v += delta);
            }
            project_nonincreasing_nonnegative(&mut candidate);
            evals += 1;
            if let Some((r, n)) = evaluate(&candidate, src, tgt) {
                if r > value {
                    value = r;
                    for (xi, &ci) in x.iter_mut().zip(&candidate) {
                        *xi = ci / n;
                    }
                }
            }
        }
        if value - before < tol * before {
            step *= S::half();
        }
    }
    (value, x, evals)
}

/// Lower bound on the operator norm of the identity `spec.source → spec.target`
/// over unit-norm profiles of length `cfg.truncation`.
pub fn estimate_operator_norm<S: Scalar>(
    spec: &EmbeddingSpec<S>,
    cfg: &SearchConfig,
) -> Result<SearchResult<S>> {
    cfg.validate()?;
    let verdict = classify(spec)?;
    if !verdict.embedded && !cfg.exploratory {
        return Err(Error::Unsupported(format!(
            "{} -> {} is not a proved embedding; rerun as exploratory",
            spec.source, spec.target
        )));
    }
    let len = cfg.truncation;
    let src = SortedNorm::new(&spec.source, len)?;
    let tgt = SortedNorm::new(&spec.target, len)?;

    let mut evaluated = 0;
    let mut best = best_prefix(&vec![S::one(); len], &src, &tgt, Family::BlockIndicator)
        .expect("e¹ has positive norm");
    evaluated += len;
    if let SpaceDescriptor::Lorentz(lp) = spec.source {
        if lp.p().is_finite() {
            let e = -lp.inv_p();
            let profile: Vec<S> = (1..=len).map(|n| S::of_usize(n).powf(e)).collect();
            evaluated += len;
            if let Some(c) = best_prefix(&profile, &src, &tgt, Family::PowerDecay) {
                if c.ratio > best.ratio {
                    best = c;
                }
            }
        }
    }

    let runs: Vec<(S, Vec<S>, usize)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| refine(len, cfg.seed.wrapping_add(r as u64), cfg, &src, &tgt))
        .collect();
    // sequential reduction: lowest restart index wins ties
    let mut refined: Option<(S, Vec<S>)> = None;
    for (value, x, evals) in runs {
        evaluated += evals;
        if refined.as_ref().is_none_or(|(b, _)| value > *b) {
            refined = Some((value, x));
        }
    }
    if let Some((value, x)) = refined {
        let margin = S::of(1e-12).max(S::of(8.0) * S::epsilon());
        if value > best.ratio * (S::one() + margin) {
            best = Candidate {
                ratio: value,
                profile: x,
                family: Family::RefinedRandom,
            };
        }
    }

    let argmax = Rearrangement::from_nonincreasing(best.profile)?;
    let best_value = norm(&argmax.to_sequence(), &spec.target);
    Ok(SearchResult {
        best_value,
        argmax,
        iterations_used: evaluated,
        family_tag: best.family,
    })
}

/// `n^{1/p} / (Σ_{i≤n} i^{q/p−1})^{1/q}`: the ratio `‖a‖_{p,∞}/‖a‖_{p,q}` for
/// the block indicator of length `n`.
pub fn riemann_ratio<S: Scalar>(n: usize, p: S, q: S) -> Result<S> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(p > S::zero() && p < q && q.is_finite()) {
        return Err(Error::invalid(format!("need 0 < p < q < inf, got p={p}, q={q}")));
    }
    let e = q / p - S::one();
    let sum: S = (1..=n)
        .map(|i| crate::scalar::pow(S::of_usize(i), e))
        .collect::<CompensatedSum<S>>()
        .value();
    Ok(S::of_usize(n).powf(p.recip()) / sum.powf(q.recip()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow<S> {
    #[serde(rename = "L")]
    pub truncation: usize,
    pub best_value: S,
    pub oracle_lo: S,
    pub oracle_hi: S,
    /// `oracle_lo − best_value`
    pub gap: S,
    pub family_tag: Family,
}

/// Runs the search at each truncation and compares with the exact norm.
///
/// A maximizer found at a shorter truncation stays feasible after padding
/// with zeros, so the reported value never drops as `L` grows.
pub fn convergence_study<S: Scalar>(
    spec: &EmbeddingSpec<S>,
    truncations: &[usize],
    cfg: &SearchConfig,
) -> Result<Vec<ConvergenceRow<S>>> {
    let verdict = classify(spec)?;
    let exact = verdict.exact_norm.ok_or_else(|| {
        Error::UnsupportedStudy(format!(
            "no exact norm is known for {} -> {}",
            spec.source, spec.target
        ))
    })?;
    let mut rows: Vec<ConvergenceRow<S>> = Vec::with_capacity(truncations.len());
    for &len in truncations {
        let mut r = estimate_operator_norm(spec, &cfg.with_truncation(len))?;
        if let Some(prev) = rows.last() {
            if prev.truncation <= len && prev.best_value > r.best_value {
                r.best_value = prev.best_value;
                r.family_tag = prev.family_tag;
            }
        }
        rows.push(ConvergenceRow {
            truncation: len,
            best_value: r.best_value,
            oracle_lo: exact.lo,
            oracle_hi: exact.hi,
            gap: exact.lo - r.best_value,
            family_tag: r.family_tag,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn spec(src: &str, tgt: &str) -> EmbeddingSpec<f64> {
        EmbeddingSpec::new(src.parse().unwrap(), tgt.parse().unwrap())
    }

    fn cfg(truncation: usize) -> SearchConfig {
        SearchConfig {
            truncation,
            restarts: 2,
            seed: 5,
            max_iters: 300,
            step_tolerance: 1e-6,
            exploratory: false,
        }
    }

    #[test]
    fn identity_gives_one() {
        let r = estimate_operator_norm(&spec("lorentz:1.5,3", "lorentz:1.5,3"), &cfg(50)).unwrap();
        assert_relative_eq!(r.best_value, 1.0, max_relative = 1e-12);
        assert_eq!(r.family_tag, Family::BlockIndicator);
    }

    #[test]
    fn riemann_block_indicator_wins() {
        let r = estimate_operator_norm(&spec("lorentz:1,2", "lorentz:1,inf"), &cfg(400)).unwrap();
        assert_eq!(r.family_tag, Family::BlockIndicator);
        // closed form n/√(n(n+1)/2) at n = 400
        let n = 400.0f64;
        assert_relative_eq!(r.best_value, n / (n * (n + 1.0) / 2.0).sqrt(), max_relative = 1e-12);
        assert_eq!(r.argmax.support_len(), 400);
    }

    #[test]
    fn weak_source_power_decay_wins() {
        let r = estimate_operator_norm(&spec("lorentz:1,inf", "lorentz:2,2"), &cfg(2000)).unwrap();
        assert_eq!(r.family_tag, Family::PowerDecay);
        // partial sum of 1/n² at 2000 terms
        let partial: f64 = (1..=2000).map(|n| 1.0 / (n as f64).powi(2)).sum();
        assert_relative_eq!(r.best_value, partial.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn argmax_is_unit_and_matches_value() {
        let s = spec("lorentz:2,1", "lorentz:3,2");
        let r = estimate_operator_norm(&s, &cfg(64)).unwrap();
        let x = r.argmax.to_sequence();
        assert!((norm(&x, &s.source) - 1.0).abs() < 1e-9);
        assert!((norm(&x, &s.target) - r.best_value).abs() < 1e-12);
    }

    #[test]
    fn deterministic_for_fixed_config() {
        let s = spec("lorentz:1,3", "lorentz:2,4");
        let a = estimate_operator_norm(&s, &cfg(40)).unwrap();
        let b = estimate_operator_norm(&s, &cfg(40)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let s = spec("lorentz:1,1", "lorentz:2,2");
        for bad in [
            SearchConfig { truncation: 0, ..cfg(1) },
            SearchConfig { restarts: 0, ..cfg(1) },
            SearchConfig { step_tolerance: 0.0, ..cfg(1) },
            SearchConfig { max_iters: 0, ..cfg(1) },
        ] {
            assert!(estimate_operator_norm(&s, &bad).unwrap_err().is_invalid_input());
        }
    }

    #[test]
    fn uncovered_needs_exploratory() {
        let s = spec("lorentz:2,2", "lorentz:1,1");
        assert!(matches!(estimate_operator_norm(&s, &cfg(8)), Err(Error::Unsupported(_))));
        let r = estimate_operator_norm(&s, &SearchConfig { exploratory: true, ..cfg(8) }).unwrap();
        // the block of length 8 gives √8 and grows without bound in L
        assert!(r.best_value >= 8f64.sqrt() - 1e-12);
    }

    #[test]
    fn riemann_ratio_closed_form() {
        assert_eq!(riemann_ratio(1, 1.0, 2.0).unwrap(), 1.0);
        assert_relative_eq!(riemann_ratio(10, 1.0, 2.0).unwrap(), 10.0 / 55f64.sqrt(), max_relative = 1e-14);
        assert!(riemann_ratio(10, 2.0, 1.0).unwrap_err().is_invalid_input());
        assert!(riemann_ratio(0, 1.0, 2.0).unwrap_err().is_invalid_input());
        assert!(riemann_ratio(10, 1.0, f64::INFINITY).unwrap_err().is_invalid_input());
        let mut prev = 0.0;
        for n in [1, 10, 100, 1000, 10000] {
            let r = riemann_ratio(n, 1.0, 2.0).unwrap();
            assert!(r > prev && r < 2f64.sqrt());
            prev = r;
        }
    }

    #[test]
    fn convergence_study_gaps() {
        let s = spec("lorentz:1,2", "lorentz:1,inf");
        let rows = convergence_study(&s, &[10, 100, 1000], &cfg(1)).unwrap();
        assert!(rows.windows(2).all(|w| w[1].gap < w[0].gap && w[1].best_value >= w[0].best_value));
        assert!(rows.iter().all(|r| r.gap >= 0.0));

        let rows = convergence_study(&spec("lorentz:1,1", "lorentz:2,2"), &[1, 5, 50], &cfg(1)).unwrap();
        assert!(rows.iter().all(|r| r.gap.abs() <= 1e-12));

        let err = convergence_study(&spec("lorentz:1,2", "lorentz:2,4"), &[10], &cfg(1)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedStudy(_)));
    }
}
