//! Sequence-space descriptors and their textual syntax.
//!
//! ```text
//! lorentz:p,q    Lorentz space ℓ^{p,q}; p, q > 0, `inf` allowed
//! c0             null sequences with the sup norm
//! linf           bounded sequences with the sup norm
//! wlp:p          ℓ_p with weights (1, ½, ½, …), p ∈ [1, ∞)
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent pair `(p, q)` of a Lorentz space. Either may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzParams<S> {
    p: S,
    q: S,
}

impl<S: Scalar> LorentzParams<S> {
    pub fn new(p: S, q: S) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if v.is_nan() || v <= S::zero() {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> S {
        self.p
    }

    pub fn q(&self) -> S {
        self.q
    }

    /// `1/p` with `1/∞ = 0`.
    pub fn inv_p(&self) -> S {
        self.p.recip()
    }

    pub fn inv_q(&self) -> S {
        self.q.recip()
    }

    pub fn q_is_finite(&self) -> bool {
        self.q.is_finite()
    }

    /// `min(p, q) < ∞`, i.e. the space sits inside `c₀`.
    pub fn inside_c0(&self) -> bool {
        self.p.is_finite() || self.q.is_finite()
    }

    /// `ℓ^{∞,∞}` carries exactly the sup norm.
    pub fn is_sup(&self) -> bool {
        self.p.is_infinite() && self.q.is_infinite()
    }

    /// `1 ≤ q ≤ p ≤ ∞`: the functional is a norm.
    pub fn is_normable_range(&self) -> bool {
        self.q >= S::one() && self.q <= self.p
    }

    /// Parameters for which `‖a+b‖ ≤ 2^{1/p}(‖a‖+‖b‖)` is proved: `p ≤ q`
    /// (quasi-norm range, including `ℓ^p` for small `p`) or `q ≥ 1`.
    pub fn quasi_triangle_guaranteed(&self) -> bool {
        self.p <= self.q || self.q >= S::one()
    }
}

/// Which sequence space a norm is taken in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceDescriptor<S> {
    Lorentz(LorentzParams<S>),
    /// `ℓ∞`
    Sup,
    /// `c₀`
    C0,
    /// `‖x‖ = (|x₁|^p + ½ Σ_{n≥2} |x_n|^p)^{1/p}`
    WeightedLp { p: S },
}

impl<S: Scalar> SpaceDescriptor<S> {
    pub fn lorentz(p: S, q: S) -> Result<Self> {
        Ok(Self::Lorentz(LorentzParams::new(p, q)?))
    }

    pub fn weighted_lp(p: S) -> Result<Self> {
        if !(p >= S::one() && p.is_finite()) {
            return Err(Error::invalid(format!("weighted lp exponent must lie in [1, inf), got {p}")));
        }
        Ok(Self::WeightedLp { p })
    }

    /// Norm is invariant under rearrangement and monotone in `|a_n|`.
    pub fn is_rearrangement_invariant(&self) -> bool {
        !matches!(self, Self::WeightedLp { .. })
    }

    /// Every element of the space tends to zero.
    pub fn inside_c0(&self) -> bool {
        match self {
            Self::Lorentz(lp) => lp.inside_c0(),
            Self::C0 | Self::WeightedLp { .. } => true,
            Self::Sup => false,
        }
    }

    /// Same norm as `ℓ∞` (`linf` itself or `lorentz:inf,inf`).
    pub fn has_sup_norm(&self) -> bool {
        match self {
            Self::Sup => true,
            Self::Lorentz(lp) => lp.is_sup(),
            _ => false,
        }
    }

    pub fn lorentz_params(&self) -> Option<LorentzParams<S>> {
        match self {
            Self::Lorentz(lp) => Some(*lp),
            _ => None,
        }
    }
}

fn fmt_exponent<S: Scalar>(f: &mut fmt::Formatter<'_>, v: S) -> fmt::Result {
    if v.is_infinite() {
        f.write_str("inf")
    } else {
        write!(f, "{v}")
    }
}

impl<S: Scalar> fmt::Display for SpaceDescriptor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lorentz(lp) => {
                f.write_str("lorentz:")?;
                fmt_exponent(f, lp.p)?;
                f.write_str(",")?;
                fmt_exponent(f, lp.q)
            }
            Self::Sup => f.write_str("linf"),
            Self::C0 => f.write_str("c0"),
            Self::WeightedLp { p } => {
                f.write_str("wlp:")?;
                fmt_exponent(f, *p)
            }
        }
    }
}

/// Parses `inf`, `∞`, a decimal, or a fraction `a/b`.
pub fn parse_exponent<S: Scalar>(s: &str) -> Result<S> {
    let s = s.trim();
    let v = match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "+inf" | "∞" => f64::INFINITY,
        other => {
            if let Some((num, den)) = other.split_once('/') {
                let num: f64 = num.trim().parse().map_err(|_| bad_number(s))?;
                let den: f64 = den.trim().parse().map_err(|_| bad_number(s))?;
                num / den
            } else {
                other.parse().map_err(|_| bad_number(s))?
            }
        }
    };
    if v.is_nan() {
        return Err(bad_number(s));
    }
    Ok(S::of(v))
}

fn bad_number(s: &str) -> Error {
    Error::invalid(format!("cannot parse exponent `{s}`"))
}

impl<S: Scalar> FromStr for SpaceDescriptor<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "c0" => return Ok(Self::C0),
            "linf" => return Ok(Self::Sup),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("lorentz:") {
            let (p, q) = rest
                .split_once(',')
                .ok_or_else(|| Error::invalid(format!("expected lorentz:p,q, got `{s}`")))?;
            return Self::lorentz(parse_exponent(p)?, parse_exponent(q)?);
        }
        if let Some(rest) = s.strip_prefix("wlp:") {
            return Self::weighted_lp(parse_exponent(rest)?);
        }
        Err(Error::invalid(format!(
            "unknown space `{s}` (expected lorentz:p,q | c0 | linf | wlp:p)"
        )))
    }
}

impl<S: Scalar> Serialize for SpaceDescriptor<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for SpaceDescriptor<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
