use proptest::prelude::*;

use seqembed::noncompactness::{
    alpha_bracket, minimal_lattice_size, signflip_witness, spread_witness, verify_cover,
    build_constant_cover, CoverCheck,
};
use seqembed::{
    classify, convergence_study, estimate_operator_norm, norm, rearrange, series_norm, SearchConfig,
    Sequence, Space, Spec,
};

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![4 => 0.3f64..6.0, 1 => Just(f64::INFINITY)]
}

fn lorentz() -> impl Strategy<Value = Space> {
    (exponent(), exponent()).prop_map(|(p, q)| Space::lorentz(p, q).unwrap())
}

fn any_space() -> impl Strategy<Value = Space> {
    prop_oneof![
        6 => lorentz(),
        1 => Just(Space::Sup),
        1 => Just(Space::C0),
        1 => (1.0f64..5.0).prop_map(|p| Space::weighted_lp(p).unwrap()),
    ]
}

fn values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..=max_len)
}

fn seq(v: Vec<f64>) -> Sequence {
    Sequence::new(v).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-300
}

/// Pairs with a proved constant, kept small so searches stay quick.
fn classified_pair() -> impl Strategy<Value = Spec> {
    let pool = [
        ("lorentz:1,1", "lorentz:2,2"),
        ("lorentz:1,2", "lorentz:1,inf"),
        ("lorentz:1,2", "lorentz:2,4"),
        ("lorentz:1,inf", "lorentz:2,2"),
        ("lorentz:2,1", "lorentz:3,3"),
        ("lorentz:1,3", "lorentz:2,2"),
        ("lorentz:0.5,0.5", "lorentz:1,1"),
        ("lorentz:1,2", "c0"),
        ("lorentz:2,2", "linf"),
    ];
    prop::sample::select(pool.to_vec())
        .prop_map(|(s, t)| Spec::new(s.parse().unwrap(), t.parse().unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norms_ignore_order_and_signs(
        v in values(24),
        keys in prop::collection::vec(any::<u32>(), 24),
        flips in prop::collection::vec(any::<bool>(), 24),
        space in prop_oneof![4 => lorentz(), 1 => Just(Space::Sup)],
    ) {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by_key(|&i| keys[i]);
        let moved: Vec<f64> = order.iter().map(|&i| if flips[i] { -v[i] } else { v[i] }).collect();
        let (a, b) = (norm(&seq(v), &space), norm(&seq(moved), &space));
        prop_assert!(close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn norms_are_homogeneous(v in values(24), t in -50.0f64..50.0, space in any_space()) {
        let a = seq(v);
        let lhs = norm(&a.scaled(t), &space);
        let rhs = t.abs() * norm(&a, &space);
        prop_assert!(close(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn norm_vanishes_only_at_zero(v in values(16), space in any_space()) {
        let a = seq(v);
        prop_assert_eq!(norm(&a, &space) == 0.0, a.is_zero());
    }

    #[test]
    fn lorentz_norms_are_lattice_monotone(
        pairs in prop::collection::vec((-5.0f64..5.0, 0.0f64..1.0), 1..20),
        space in lorentz(),
    ) {
        let big: Vec<f64> = pairs.iter().map(|&(b, _)| b).collect();
        let small: Vec<f64> = pairs.iter().map(|&(b, s)| b * s).collect();
        let (lo, hi) = (norm(&seq(small), &space), norm(&seq(big), &space));
        prop_assert!(lo <= hi * (1.0 + 1e-12), "{lo} > {hi}");
    }

    #[test]
    fn rearrangement_is_idempotent_and_sorted(v in values(24)) {
        let r = rearrange(&seq(v));
        prop_assert!(r.values().windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(r.values().iter().all(|&x| x >= 0.0));
        prop_assert_eq!(rearrange(&r.to_sequence()), r);
    }

    #[test]
    fn lattice_size_is_minimal(sigma in 0.2f64..2.0, frac in 0.001f64..0.999) {
        let rho = sigma / 2.0 + frac * sigma / 2.0;
        let m = minimal_lattice_size(sigma, rho);
        prop_assert!(m >= 1);
        prop_assert!((1.0 + 1.0 / m as f64) * sigma / 2.0 < rho);
        if m > 1 {
            prop_assert!((1.0 + 1.0 / (m - 1) as f64) * sigma / 2.0 >= rho);
        }
    }

    #[test]
    fn series_brackets_nest_and_close(
        p1 in 0.5f64..3.0,
        gap in 0.5f64..4.0,
        q2 in 0.5f64..4.0,
    ) {
        let p2 = p1 + gap;
        let coarse = series_norm(p1, p2, q2, 1e-6).unwrap();
        let fine = series_norm(p1, p2, q2, 1e-10).unwrap();
        prop_assert!(fine.lo <= fine.hi);
        prop_assert!(fine.hi - fine.lo <= 1e-10 * fine.lo);
        prop_assert!(coarse.lo <= fine.lo && fine.hi <= coarse.hi);
    }

    #[test]
    fn signflip_is_far_from_every_center(
        centers in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 1..12), 1..=10),
        rho in 0.01f64..0.999,
    ) {
        let centers: Vec<Sequence> = centers.into_iter().map(seq).collect();
        let r = signflip_witness(&centers, rho).unwrap();
        prop_assert!(r.witness.max_abs() <= 1.0);
        prop_assert!(r.min_distance_to_centers >= 1.0);
        prop_assert!(r.min_distance_to_centers > rho);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spread_witness_keeps_profile_and_distance(
        centers in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 1..8), 1..=6),
        x in prop::collection::vec(-1.0f64..1.0, 1..6),
        rho in 0.05f64..0.5,
    ) {
        let (source, target) = (Space::lorentz(1.0, 1.0).unwrap(), Space::lorentz(2.0, 2.0).unwrap());
        let x = seq(x);
        prop_assume!(!x.is_zero());
        let x = x.scaled(1.0 / norm(&x, &source));
        let size = norm(&x, &target);
        prop_assume!(size > rho);
        let lambda = (1.0 - rho / size) / 2.0;
        let centers: Vec<Sequence> = centers.into_iter().map(seq).collect();
        let r = spread_witness(&centers, &source, &target, rho, lambda, &x, 256).unwrap();
        prop_assert_eq!(rearrange(&r.witness), rearrange(&x));
        prop_assert!(norm(&r.witness, &source) <= 1.0 + 1e-12);
        let direct = centers
            .iter()
            .map(|c| {
                let n = c.len().max(r.witness.len());
                norm(&r.witness.padded(n).sub(&c.padded(n)), &target)
            })
            .fold(f64::INFINITY, f64::min);
        prop_assert!(close(direct, r.min_distance_to_centers, 1e-12));
        prop_assert!(direct > rho);
    }

    #[test]
    fn alpha_brackets_are_consistent(spec in classified_pair(), len in 2usize..40) {
        let verdict = classify(&spec).unwrap();
        let b = alpha_bracket(&spec, len, 0, 1).unwrap();
        let upper = verdict.norm_upper().unwrap();
        prop_assert!(b.is_consistent(upper * (1.0 + 1e-12)), "{:?} vs {}", b, upper);
        if let Some(exact) = verdict.exact_norm {
            prop_assert!(b.hi <= exact.hi * (1.0 + 1e-12));
        }
    }

    #[test]
    fn constant_covers_survive_sampling(seed in any::<u64>(), frac in 0.05f64..0.95) {
        let source = Space::lorentz(1.0, 2.0).unwrap();
        // between σ/2 = 2^{-1/2} and ‖I‖ = 1
        let half = 0.5f64.sqrt();
        let rho = half + frac * (1.0 - half);
        let cert = build_constant_cover(&source, rho, 32).unwrap();
        prop_assert!(matches!(verify_cover(&cert, 300, seed).unwrap(), CoverCheck::Covered(_)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_is_feasible_bounded_and_deterministic(
        spec in classified_pair(),
        seed in any::<u64>(),
        len in 4usize..60,
    ) {
        let cfg = SearchConfig { truncation: len, restarts: 2, seed, max_iters: 40, step_tolerance: 1e-6, exploratory: false };
        let r = estimate_operator_norm(&spec, &cfg).unwrap();
        let arg = r.argmax.to_sequence();
        prop_assert!(norm(&arg, &spec.source) <= 1.0 + 1e-9);
        prop_assert!(close(norm(&arg, &spec.target), r.best_value, 1e-9));
        let upper = classify(&spec).unwrap().norm_upper().unwrap();
        prop_assert!(r.best_value <= upper * (1.0 + 1e-9));
        prop_assert_eq!(estimate_operator_norm(&spec, &cfg).unwrap(), r);
    }

    #[test]
    fn convergence_never_drops(seed in any::<u64>()) {
        let spec = Spec::new("lorentz:1,2".parse().unwrap(), "lorentz:1,inf".parse().unwrap());
        let cfg = SearchConfig { truncation: 8, restarts: 1, seed, max_iters: 30, step_tolerance: 1e-6, exploratory: false };
        let rows = convergence_study(&spec, &[4, 16, 64, 256], &cfg).unwrap();
        prop_assert!(rows.windows(2).all(|w| w[0].best_value <= w[1].best_value));
        prop_assert!(rows.iter().all(|r| r.best_value <= r.oracle_hi * (1.0 + 1e-12)));
    }
}
