//! Unit-ball elements that stay farther than `ρ` from every proposed center.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::norm;
use crate::scalar::Scalar;
use crate::sequence::{rearrange, FiniteSequence};
use crate::space::SpaceDescriptor;

use super::cover::min_distance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Spread,
    Signflip,
    UnitSpike,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar + Serialize"))]
pub struct WitnessReport<S: Scalar> {
    pub witness: FiniteSequence<S>,
    /// `+∞` (serialized as null) when there are no centers
    pub min_distance_to_centers: S,
    pub construction: Construction,
    pub rho: S,
    pub lambda: Option<S>,
    /// 1-based positions of the witness entries
    pub indices: Vec<usize>,
    /// no centers were given, so nothing was refuted
    pub degenerate: bool,
}

fn check_rho<S: Scalar>(rho: S) -> Result<()> {
    if !(rho > S::zero() && rho.is_finite()) {
        return Err(Error::invalid(format!("rho must be positive and finite, got {rho}")));
    }
    Ok(())
}

/// Places the decreasing rearrangement of `x` at indices where every center
/// is small.
///
/// With `ε_k = λ·x*_k`, the indices `j₁ < j₂ < …` are chosen greedily as the
/// first positions (up to `len`) where `max_i |(yⁱ)_j| ≤ ε_k`. The witness
/// `a = Σ x*_k e^{j_k}` has the same rearrangement as `x`, and
/// `|a − yⁱ| ≥ (1 − λ)x*_k` at `j_k`, so in a rearrangement-invariant target
/// `‖a − yⁱ‖ ≥ (1 − λ)‖x‖ > ρ`.
pub fn spread_witness<S: Scalar>(
    centers: &[FiniteSequence<S>],
    source: &SpaceDescriptor<S>,
    target: &SpaceDescriptor<S>,
    rho: S,
    lambda: S,
    x: &FiniteSequence<S>,
    len: usize,
) -> Result<WitnessReport<S>> {
    check_rho(rho)?;
    if !(lambda > S::zero() && lambda < S::one()) {
        return Err(Error::invalid(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if len == 0 {
        return Err(Error::invalid("truncation must be at least 1"));
    }
    for s in [source, target] {
        if !s.is_rearrangement_invariant() {
            return Err(Error::Unsupported(format!("{s} is not rearrangement invariant")));
        }
    }
    let slack = S::of(1e-9);
    let source_norm = norm(x, source);
    if source_norm > S::one() + slack {
        return Err(Error::hypothesis(format!(
            "x must lie in the source unit ball, norm is {source_norm}"
        )));
    }
    let target_norm = norm(x, target);
    if (S::one() - lambda) * target_norm <= rho {
        return Err(Error::hypothesis(format!(
            "(1 - lambda)·‖x‖ = {} must exceed rho = {rho}",
            (S::one() - lambda) * target_norm
        )));
    }

    let profile = rearrange(x);
    let needed = profile.support_len();
    let envelope = |j: usize| {
        centers
            .iter()
            .map(|c| c.get(j).abs())
            .fold(S::zero(), S::max)
    };
    let mut indices = Vec::with_capacity(needed);
    let mut j = 1;
    for &value in &profile.values()[..needed] {
        let eps = lambda * value;
        while j <= len && envelope(j) > eps {
            j += 1;
        }
        if j > len {
            return Err(Error::TruncationTooSmall {
                placed: indices.len(),
                needed,
                truncation: len,
            });
        }
        indices.push(j);
        j += 1;
    }

    // x ≠ 0 here, so at least one index was placed
    let mut a = vec![S::zero(); indices[indices.len() - 1]];
    for (&j, &v) in indices.iter().zip(profile.values()) {
        a[j - 1] = v;
    }
    let witness = FiniteSequence::new(a)?;
    let distance = min_distance(&witness, centers, target);
    if !(distance > rho) {
        return Err(Error::InvariantBreach(format!(
            "spread witness is only {distance} from a center, radius {rho}"
        )));
    }
    Ok(WitnessReport {
        witness,
        min_distance_to_centers: distance,
        construction: Construction::Spread,
        rho,
        lambda: Some(lambda),
        indices,
        degenerate: centers.is_empty(),
    })
}

/// Spread witness for `x = e¹`, with `λ = (1 − ρ)/2` so that
/// `(1 − λ)·‖e¹‖ > ρ` whenever `‖e¹‖_target = 1 > ρ`.
pub fn spike_witness<S: Scalar>(
    centers: &[FiniteSequence<S>],
    source: &SpaceDescriptor<S>,
    target: &SpaceDescriptor<S>,
    rho: S,
    len: usize,
) -> Result<WitnessReport<S>> {
    check_rho(rho)?;
    if rho >= S::one() {
        return Err(Error::hypothesis(format!("rho must be below 1, got {rho}")));
    }
    let lambda = (S::one() - rho) * S::half();
    let mut report = spread_witness(
        centers,
        source,
        target,
        rho,
        lambda,
        &FiniteSequence::unit_vector(1, 1)?,
        len,
    )?;
    report.construction = Construction::UnitSpike;
    Ok(report)
}

/// Sign-flip witness against `m` centers in `ℓ∞`: `a_j = 1` if `(y^j)_j < 0`,
/// `a_j = −1` otherwise, for `j ≤ m`, and `0` after. At coordinate `j` the
/// distance to `y^j` is `1 + |(y^j)_j| ≥ 1 > ρ`.
pub fn signflip_witness<S: Scalar>(
    centers: &[FiniteSequence<S>],
    rho: S,
) -> Result<WitnessReport<S>> {
    check_rho(rho)?;
    if rho >= S::one() {
        return Err(Error::hypothesis(format!("rho must lie in (0, 1), got {rho}")));
    }
    let m = centers.len();
    if m == 0 {
        return Ok(WitnessReport {
            witness: FiniteSequence::zeros(1)?,
            min_distance_to_centers: S::infinity(),
            construction: Construction::Signflip,
            rho,
            lambda: None,
            indices: Vec::new(),
            degenerate: true,
        });
    }
    let len = centers.iter().map(FiniteSequence::len).fold(m, usize::max);
    let mut a = vec![S::zero(); len];
    for (j, y) in centers.iter().enumerate() {
        a[j] = if y.get(j + 1) < S::zero() { S::one() } else { -S::one() };
    }
    let witness = FiniteSequence::new(a)?;
    let distance = min_distance(&witness, centers, &SpaceDescriptor::Sup);
    if !(distance > rho) {
        return Err(Error::InvariantBreach(format!(
            "sign-flip witness is only {distance} from a center, radius {rho}"
        )));
    }
    Ok(WitnessReport {
        witness,
        min_distance_to_centers: distance,
        construction: Construction::Signflip,
        rho,
        lambda: None,
        indices: (1..=m).collect(),
        degenerate: false,
    })
}
