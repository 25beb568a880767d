//! Finite covers of the image of the unit ball, and sampled checks of them.

use serde::Serialize;

use crate::catalog::{classify, EmbeddingSpec};
use crate::error::{Error, Result};
use crate::norms::norm;
use crate::sampling::scan_unit_sphere;
use crate::scalar::Scalar;
use crate::sequence::FiniteSequence;
use crate::space::SpaceDescriptor;

use super::span::span_upper_bound;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverCase {
    /// `2m+1` constant sequences `σk/(2m)` in `ℓ∞`
    ConstantLattice,
    /// `ρ ≥ ‖I‖`: the ball around 0
    SingleBall,
    /// `{0, ±e¹, ±(1/2)^{1/p}e¹}` in the weighted space
    WeightedFiveBall,
    /// multiples of `e¹` on a grid fine enough for the radius
    AxisGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    Unverified,
    /// checked on random samples; evidence only
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
pub struct CoverCertificate<S: Scalar> {
    pub source: SpaceDescriptor<S>,
    pub target: SpaceDescriptor<S>,
    pub centers: Vec<FiniteSequence<S>>,
    pub radius: S,
    pub m: usize,
    /// span bound the lattice was built from
    pub sigma: Option<S>,
    pub samples_checked: usize,
    pub max_observed_distance: S,
    pub theorem_case: CoverCase,
    pub verification: Verification,
}

impl<S: Scalar> CoverCertificate<S> {
    pub fn truncation(&self) -> usize {
        self.centers.first().map_or(0, FiniteSequence::len)
    }

    /// Distance from `x` to the nearest center in the target norm.
    pub fn distance(&self, x: &FiniteSequence<S>) -> S {
        min_distance(x, &self.centers, &self.target)
    }
}

pub(crate) fn min_distance<S: Scalar>(
    x: &FiniteSequence<S>,
    centers: &[FiniteSequence<S>],
    target: &SpaceDescriptor<S>,
) -> S {
    centers
        .iter()
        .map(|c| norm(&x.sub(c), target))
        .fold(S::infinity(), S::min)
}

fn check_radius_and_len<S: Scalar>(rho: S, len: usize) -> Result<()> {
    if !(rho > S::zero() && rho.is_finite()) {
        return Err(Error::invalid(format!("radius must be positive and finite, got {rho}")));
    }
    if len == 0 {
        return Err(Error::invalid("truncation must be at least 1"));
    }
    Ok(())
}

/// Smallest `m ≥ 1` with `(1 + 1/m)·σ/2 < ρ`; requires `ρ > σ/2`.
pub fn minimal_lattice_size<S: Scalar>(sigma: S, rho: S) -> usize {
    let half = sigma * S::half();
    let ok = |m: usize| (S::one() + S::of_usize(m).recip()) * half < rho;
    let guess = (sigma / (S::two() * rho - sigma)).floor().to_f64_lossy();
    let mut m = if guess.is_finite() && guess >= 0.0 {
        guess as usize + 1
    } else {
        1
    };
    while m > 1 && ok(m - 1) {
        m -= 1;
    }
    while !ok(m) {
        m += 1;
    }
    m
}

/// Constant-sequence cover of the unit ball of `source` inside `ℓ∞`.
///
/// Needs the span bound `σ` of `source` with `‖I‖ ≤ σ < 2‖I‖`. For
/// `σ/2 < ρ < ‖I‖` the centers are the constants `σk/(2m)`, `|k| ≤ m`, with
/// `m` minimal such that `(1 + 1/m)·σ/2 < ρ`.
pub fn build_constant_cover<S: Scalar>(
    source: &SpaceDescriptor<S>,
    rho: S,
    len: usize,
) -> Result<CoverCertificate<S>> {
    check_radius_and_len(rho, len)?;
    let bound = span_upper_bound(source)?;
    let sigma = bound.value;
    let verdict = classify(&EmbeddingSpec::new(*source, SpaceDescriptor::Sup))?;
    let op_norm = verdict
        .norm_upper()
        .ok_or_else(|| Error::Unsupported(format!("{source} does not embed into linf")))?;
    if !(op_norm <= sigma && sigma < S::two() * op_norm) {
        return Err(Error::hypothesis(format!(
            "span bound {sigma} must satisfy ‖I‖ ≤ σ < 2‖I‖ with ‖I‖ = {op_norm}"
        )));
    }
    let mut cert = CoverCertificate {
        source: *source,
        target: SpaceDescriptor::Sup,
        centers: vec![FiniteSequence::zeros(len)?],
        radius: rho,
        m: 0,
        sigma: Some(sigma),
        samples_checked: 0,
        max_observed_distance: S::zero(),
        theorem_case: CoverCase::SingleBall,
        verification: Verification::Unverified,
    };
    if rho >= op_norm {
        return Ok(cert);
    }
    if rho <= sigma * S::half() {
        return Err(Error::Infeasible(format!(
            "radius {rho} must exceed σ/2 = {}",
            sigma * S::half()
        )));
    }
    let m = minimal_lattice_size(sigma, rho);
    let two_m = S::of_usize(2 * m);
    cert.centers = (-(m as i64)..=m as i64)
        .map(|k| FiniteSequence::constant(sigma * S::of(k as f64) / two_m, len))
        .collect::<Result<_>>()?;
    cert.m = m;
    cert.theorem_case = CoverCase::ConstantLattice;
    Ok(cert)
}

/// The five-ball family `{0, ±e¹, ±(1/2)^{1/p}e¹}` at radius `(1/2)^{1/p}`
/// for `ℓ_p` inside the weighted space.
pub fn weighted_five_ball_cover<S: Scalar>(p: S, len: usize) -> Result<CoverCertificate<S>> {
    let target = SpaceDescriptor::weighted_lp(p)?;
    let h = S::half().powf(p.recip());
    check_radius_and_len(h, len)?;
    let e1 = FiniteSequence::unit_vector(1, len)?;
    let centers = [S::zero(), S::one(), -S::one(), h, -h]
        .into_iter()
        .map(|c| e1.scaled(c))
        .collect();
    Ok(CoverCertificate {
        source: SpaceDescriptor::lorentz(p, p)?,
        target,
        centers,
        radius: h,
        m: 2,
        sigma: None,
        samples_checked: 0,
        max_observed_distance: S::zero(),
        theorem_case: CoverCase::WeightedFiveBall,
        verification: Verification::Unverified,
    })
}

/// Cover of the `ℓ_p` unit ball in the weighted space by multiples of `e¹`
/// at any radius `ρ > (1/2)^{1/p}`.
///
/// For `‖x‖_p ≤ 1` and a center `c·e¹` the weighted distance satisfies
/// `d^p ≤ |x₁ − c|^p + ½`, so centers spaced at most `2(ρ^p − ½)^{1/p}` apart
/// across `[−1, 1]` suffice.
pub fn weighted_axis_cover<S: Scalar>(p: S, rho: S, len: usize) -> Result<CoverCertificate<S>> {
    let target = SpaceDescriptor::weighted_lp(p)?;
    check_radius_and_len(rho, len)?;
    let h = S::half().powf(p.recip());
    if rho <= h {
        return Err(Error::Infeasible(format!("radius {rho} must exceed (1/2)^(1/p) = {h}")));
    }
    let reach = (rho.powf(p) - S::half()).powf(p.recip());
    // n centers at −1 + (2i+1)/n leave gaps of half-width 1/n ≤ reach
    let n = (reach.recip().ceil().to_f64_lossy() as usize).max(1);
    let e1 = FiniteSequence::unit_vector(1, len)?;
    let centers = (0..n)
        .map(|i| e1.scaled(S::of_usize(2 * i + 1) / S::of_usize(n) - S::one()))
        .collect();
    Ok(CoverCertificate {
        source: SpaceDescriptor::lorentz(p, p)?,
        target,
        centers,
        radius: rho,
        m: n,
        sigma: None,
        samples_checked: 0,
        max_observed_distance: S::zero(),
        theorem_case: CoverCase::AxisGrid,
        verification: Verification::Unverified,
    })
}

/// A point of the source unit ball that no center reaches.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
pub struct Refutation<S: Scalar> {
    /// position in check order; the fixed probes come first
    pub sample_index: usize,
    pub sample: FiniteSequence<S>,
    pub min_distance: S,
    pub radius: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CoverCheck<S: Scalar> {
    Covered(CoverCertificate<S>),
    Refuted(Refutation<S>),
}

impl<S: Scalar> CoverCheck<S> {
    pub fn is_covered(&self) -> bool {
        matches!(self, Self::Covered(_))
    }
}

fn probes<S: Scalar>(source: &SpaceDescriptor<S>, len: usize) -> Result<Vec<FiniteSequence<S>>> {
    let e1 = FiniteSequence::unit_vector(1, len)?;
    let mut out = vec![FiniteSequence::zeros(len)?, e1.clone(), e1.scaled(-S::one())];
    if len >= 2 {
        let d = e1.sub(&FiniteSequence::unit_vector(2, len)?);
        let n = norm(&d, source);
        out.push(d.scaled(n.recip()));
    }
    Ok(out)
}

/// Checks a few fixed unit-ball points and `samples` random unit-sphere
/// elements of the source at the certificate's truncation. Distances are in
/// the target norm; a point farther than the radius from every center
/// refutes the certificate.
pub fn verify_cover<S: Scalar>(
    cert: &CoverCertificate<S>,
    samples: usize,
    seed: u64,
) -> Result<CoverCheck<S>> {
    let len = cert.truncation();
    if len == 0 {
        return Err(Error::invalid("certificate has no centers"));
    }
    let fixed = probes(&cert.source, len)?;
    let mut worst = S::zero();
    for (i, x) in fixed.iter().enumerate() {
        let d = cert.distance(x);
        if d > cert.radius {
            return Ok(CoverCheck::Refuted(Refutation {
                sample_index: i,
                sample: x.clone(),
                min_distance: d,
                radius: cert.radius,
            }));
        }
        worst = worst.max(d);
    }
    let scan = scan_unit_sphere(&cert.source, len, samples, seed, Some(cert.radius), |x| {
        cert.distance(x)
    });
    if let Some((i, sample, d)) = scan.first_exceeding {
        return Ok(CoverCheck::Refuted(Refutation {
            sample_index: fixed.len() + i,
            sample,
            min_distance: d,
            radius: cert.radius,
        }));
    }
    let mut out = cert.clone();
    out.samples_checked = fixed.len() + samples;
    out.max_observed_distance = worst.max(scan.max);
    out.verification = Verification::Sampled;
    Ok(CoverCheck::Covered(out))
}
