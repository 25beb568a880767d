//! Randomized checks of the inequalities the norm and embedding results rest
//! on. Each suite draws its cases from its own seeded stream and counts
//! defects below `−SLACK`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{classify, EmbeddingSpec, TheoremTag};
use crate::error::Result;
use crate::norms::{
    norm, quasi_triangle_defect, rearrangement_bound_audit, scalar_inequality_audit, triangle_defect,
};
use crate::sampling::chunk_rng;
use crate::sequence::FiniteSequence;
use crate::space::{LorentzParams, SpaceDescriptor};

pub const SLACK: f64 = 1e-9;
pub const DEFAULT_CASES: usize = 10_000;

const MAX_LEN: usize = 12;
const POOL: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditSuite {
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    /// smallest defect seen; negative values mean the inequality failed
    pub worst_defect: f64,
}

impl AuditSuite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            violations: 0,
            worst_defect: f64::INFINITY,
        }
    }

    fn record(&mut self, defect: f64) {
        self.cases += 1;
        if !(defect >= -SLACK) {
            self.violations += 1;
        }
        self.worst_defect = self.worst_defect.min(defect);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

type Rng8 = ChaCha8Rng;

fn exponent(rng: &mut Rng8, lo: f64, hi: f64) -> f64 {
    // log-uniform, so small exponents are as common as large ones
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Random finite sequence: uniform entries, a signed block, or a signed
/// power profile, with some entries zeroed.
fn random_sequence(rng: &mut Rng8) -> FiniteSequence<f64> {
    let len = rng.random_range(1..=MAX_LEN);
    let kind = rng.random_range(0..3);
    let decay = exponent(rng, 0.25, 4.0);
    let v = (1..=len)
        .map(|n| {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            let mag = match kind {
                0 => rng.random_range(0.0..1.0),
                1 => 1.0,
                _ => (n as f64).powf(-decay),
            };
            if rng.random_range(0.0..1.0) < 0.15 {
                0.0
            } else {
                sign * mag
            }
        })
        .collect();
    FiniteSequence::new(v).expect("finite entries")
}

/// Random sequence scaled to norm `r ∈ (0, 1]` in `space` (left alone when
/// it is zero).
fn random_in_ball(rng: &mut Rng8, space: &SpaceDescriptor<f64>) -> FiniteSequence<f64> {
    let a = random_sequence(rng);
    let n = norm(&a, space);
    if n > 0.0 {
        let r = rng.random_range(0.05..=1.0);
        a.scaled(r / n)
    } else {
        a
    }
}

fn lorentz(p: f64, q: f64) -> LorentzParams<f64> {
    LorentzParams::new(p, q).expect("positive exponents")
}

fn scalar_suites(cases: usize, seed: u64) -> Result<[AuditSuite; 2]> {
    let mut mean = AuditSuite::new("scalar_power_mean");
    let mut sub = AuditSuite::new("scalar_subadditive");
    let mut rng = chunk_rng(seed, 0);
    for _ in 0..cases {
        let x = rng.random_range(1e-6..=4.0);
        let y = rng.random_range(1e-6..=4.0);
        let d = scalar_inequality_audit(x, y, rng.random_range(1.0..=4.0))?;
        mean.record(d.power_mean.expect("q ≥ 1"));
        let d = scalar_inequality_audit(x, y, rng.random_range(0.01..1.0))?;
        sub.record(d.subadditive.expect("q < 1"));
    }
    Ok([mean, sub])
}

fn quasi_triangle_suite(cases: usize, seed: u64) -> AuditSuite {
    let mut suite = AuditSuite::new("quasi_triangle");
    let mut rng = chunk_rng(seed, 1);
    let mut done = 0;
    while done < cases {
        let p = if rng.random_range(0..8) == 0 { f64::INFINITY } else { exponent(&mut rng, 0.25, 8.0) };
        let q = if rng.random_range(0..8) == 0 { f64::INFINITY } else { exponent(&mut rng, 0.25, 8.0) };
        let params = lorentz(p, q);
        if !params.quasi_triangle_guaranteed() {
            continue;
        }
        let space = SpaceDescriptor::Lorentz(params);
        let a = random_in_ball(&mut rng, &space);
        let b = random_in_ball(&mut rng, &space);
        suite.record(quasi_triangle_defect(&a, &b, &params));
        done += 1;
    }
    suite
}

fn triangle_suite(cases: usize, seed: u64) -> AuditSuite {
    let mut suite = AuditSuite::new("triangle_normable_range");
    let mut rng = chunk_rng(seed, 2);
    for _ in 0..cases {
        let q = exponent(&mut rng, 1.0, 8.0);
        let p = if rng.random_range(0..8) == 0 { f64::INFINITY } else { q * exponent(&mut rng, 1.0, 4.0) };
        let space = SpaceDescriptor::Lorentz(lorentz(p, q));
        let a = random_in_ball(&mut rng, &space);
        let b = random_in_ball(&mut rng, &space);
        suite.record(triangle_defect(&a, &b, &space));
    }
    suite
}

fn rearrangement_suites(cases: usize, seed: u64) -> Result<[AuditSuite; 2]> {
    let mut low = AuditSuite::new("rearrangement_bound_p_le_q");
    let mut high = AuditSuite::new("rearrangement_bound_q_lt_p");
    let mut rng = chunk_rng(seed, 3);
    for _ in 0..cases {
        for (suite, p_le_q) in [(&mut low, true), (&mut high, false)] {
            let q = exponent(&mut rng, 0.25, 6.0);
            let ratio = exponent(&mut rng, 1.0, 4.0);
            let p = if p_le_q { q / ratio } else { q * ratio * 1.0001 };
            let params = lorentz(p, q);
            let a = random_in_ball(&mut rng, &SpaceDescriptor::Lorentz(params));
            let worst = rearrangement_bound_audit(&a, &params)?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            suite.record(worst);
        }
    }
    Ok([low, high])
}

/// Draws `(p, q₁, q₂)` with `q₁ < q₂` and checks `‖a‖_{p,q₂} ≤ C‖a‖_{p,q₁}`.
fn same_p_suite(cases: usize, seed: u64) -> Result<AuditSuite> {
    let mut suite = AuditSuite::new("same_p_inclusion");
    let mut rng = chunk_rng(seed, 4);
    for _ in 0..cases {
        let p = exponent(&mut rng, 0.25, 6.0);
        let q1 = exponent(&mut rng, 0.25, 6.0);
        let q2 = if rng.random_range(0..6) == 0 { f64::INFINITY } else { q1 * exponent(&mut rng, 1.0001, 4.0) };
        let (src, tgt) = (SpaceDescriptor::Lorentz(lorentz(p, q1)), SpaceDescriptor::Lorentz(lorentz(p, q2)));
        let c = classify(&EmbeddingSpec::new(src, tgt))?
            .constant
            .expect("same-p inclusions are covered")
            .hi;
        let a = random_in_ball(&mut rng, &src);
        suite.record(c * norm(&a, &src) - norm(&a, &tgt));
    }
    Ok(suite)
}

type ParamDraw = fn(&mut Rng8) -> (f64, f64, f64, f64);

fn draw_q_below_p(rng: &mut Rng8) -> (f64, f64, f64, f64) {
    let p1 = exponent(rng, 0.25, 4.0);
    let q1 = p1 / exponent(rng, 1.0, 4.0);
    let p2 = p1 * exponent(rng, 1.01, 4.0);
    (p1, q1, p2, exponent(rng, 0.25, 8.0))
}

fn draw_weak_source(rng: &mut Rng8) -> (f64, f64, f64, f64) {
    let p1 = exponent(rng, 0.5, 3.0);
    let p2 = p1 * exponent(rng, 1.5, 4.0);
    (p1, f64::INFINITY, p2, exponent(rng, 0.5, 4.0))
}

fn draw_power_constant(rng: &mut Rng8) -> (f64, f64, f64, f64) {
    let p1 = exponent(rng, 0.25, 4.0);
    let q1 = p1 * exponent(rng, 1.01, 4.0);
    let q2 = if rng.random_range(0..4) == 0 { f64::INFINITY } else { q1 * exponent(rng, 1.01, 4.0) };
    (p1, q1, p1 * exponent(rng, 1.01, 4.0), q2)
}

fn draw_q_decreasing(rng: &mut Rng8) -> (f64, f64, f64, f64) {
    let p1 = exponent(rng, 0.25, 4.0);
    let q1 = p1 * exponent(rng, 1.01, 4.0);
    (p1, q1, p1 * exponent(rng, 1.01, 4.0), q1)
}

fn draw_through_weak(rng: &mut Rng8) -> (f64, f64, f64, f64) {
    let p1 = exponent(rng, 0.25, 4.0);
    let q1 = if rng.random::<bool>() {
        p1 / exponent(rng, 1.0, 4.0)
    } else {
        p1 * exponent(rng, 1.01, 4.0)
    };
    (p1, q1, p1 * exponent(rng, 1.01, 4.0), q1 / exponent(rng, 1.01, 4.0))
}

fn draw_both_weak(rng: &mut Rng8) -> (f64, f64, f64, f64) {
    let p1 = exponent(rng, 0.25, 4.0);
    (p1, f64::INFINITY, p1 * exponent(rng, 1.01, 4.0), f64::INFINITY)
}

/// One suite per case of the increasing-`p` inclusion theorem, plus the
/// `q₂ < q₁` pairs that go through `ℓ^{p₁,∞}`. Parameters
/// come from a pool drawn up front so the series constants are computed
/// once per pool entry.
fn increasing_p_suites(cases: usize, seed: u64) -> Result<Vec<AuditSuite>> {
    let cases_list: [(&'static str, TheoremTag, ParamDraw); 6] = [
        ("inclusion_q_below_p", TheoremTag::QBelowP, draw_q_below_p),
        ("inclusion_weak_source_series", TheoremTag::WeakSourceSeries, draw_weak_source),
        ("inclusion_power_constant", TheoremTag::PowerConstant, draw_power_constant),
        ("inclusion_q_decreasing", TheoremTag::QDecreasing, draw_q_decreasing),
        ("inclusion_both_weak", TheoremTag::BothWeak, draw_both_weak),
        ("inclusion_through_weak_type", TheoremTag::ThroughWeakType, draw_through_weak),
    ];
    let mut out = Vec::with_capacity(cases_list.len());
    for (i, (name, tag, draw)) in cases_list.into_iter().enumerate() {
        let mut rng = chunk_rng(seed, 5 + i);
        let mut pool = Vec::with_capacity(POOL);
        while pool.len() < POOL {
            let (p1, q1, p2, q2) = draw(&mut rng);
            let src = SpaceDescriptor::Lorentz(lorentz(p1, q1));
            let tgt = SpaceDescriptor::Lorentz(lorentz(p2, q2));
            let verdict = classify(&EmbeddingSpec::new(src, tgt))?;
            if verdict.theorem_tag == tag {
                pool.push((src, tgt, verdict.constant.expect("embedded").hi));
            }
        }
        let mut suite = AuditSuite::new(name);
        for _ in 0..cases {
            let (src, tgt, c) = pool[rng.random_range(0..POOL)];
            let a = random_in_ball(&mut rng, &src);
            suite.record(c * norm(&a, &src) - norm(&a, &tgt));
        }
        out.push(suite);
    }
    Ok(out)
}

/// Runs every suite with `cases` draws each.
pub fn run_audits(cases: usize, seed: u64) -> Result<Vec<AuditSuite>> {
    let mut out = Vec::new();
    out.extend(scalar_suites(cases, seed)?);
    out.push(quasi_triangle_suite(cases, seed));
    out.push(triangle_suite(cases, seed));
    out.extend(rearrangement_suites(cases, seed)?);
    out.push(same_p_suite(cases, seed)?);
    out.extend(increasing_p_suites(cases, seed)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean_and_deterministic() {
        let a = run_audits(300, 17).unwrap();
        assert_eq!(a.len(), 13);
        for s in &a {
            assert_eq!(s.cases, 300, "{}", s.name);
            assert!(s.passed(), "{s:?}");
        }
        assert_eq!(a, run_audits(300, 17).unwrap());
    }

    #[test]
    fn violations_are_counted() {
        let mut s = AuditSuite::new("probe");
        s.record(0.0);
        s.record(-SLACK / 2.0);
        s.record(-1e-3);
        s.record(f64::NAN);
        assert_eq!((s.cases, s.violations), (4, 2));
        assert_eq!(s.worst_defect, -1e-3);
    }
}
