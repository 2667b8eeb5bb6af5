//! Property tests over the numeric core: potential-function invariants,
//! special-function identities and sampler ranges.

use driftkit::expr::ExprAst;
use driftkit::numerics::{wilson_interval, Z_99};
use driftkit::oracle::{corpus::random_chain, exact_expectation_per_state};
use driftkit::potential::{
    build_potential, exp_integral_e1, integrate_reciprocal, HSpec, EULER_GAMMA,
};
use driftkit::rng::Xoshiro256PlusPlus;
use driftkit::theorems::{additive_upper, multiplicative_upper, variable_upper, MonotoneEvidence};
use proptest::prelude::*;

proptest! {
    #[test]
    fn potential_monotone_and_additive_multiplicative(
        delta in 0.01f64..2.0,
        x_min in 0.1f64..5.0,
        span in 1.001f64..50.0,
        s in 0.0f64..1.0,
        t in 0.0f64..1.0,
    ) {
        let x_max = x_min * span;
        let h = HSpec::multiplicative(delta, x_min, x_max).unwrap();
        let g = build_potential(h.clone()).unwrap();
        let mut a = x_min + (x_max - x_min) * s;
        let mut b = x_min + (x_max - x_min) * t;
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let ga = g.eval(a).unwrap();
        let gb = g.eval(b).unwrap();
        prop_assert!(gb >= ga - 1e-12);
        let inc = integrate_reciprocal(&h, a, b).unwrap();
        prop_assert!((gb - ga - inc).abs() < 1e-8, "g diff {} vs integral {}", gb - ga, inc);
    }

    #[test]
    fn variable_upper_matches_closed_forms(
        delta in 0.01f64..0.99,
        x_min in 0.1f64..4.0,
        factor in 1.0f64..40.0,
    ) {
        let x0 = x_min * factor;
        let hm = HSpec::multiplicative(delta, x_min, x0 * 1.5).unwrap();
        let v = variable_upper(&hm, x0, MonotoneEvidence::SampledCheck).unwrap().bound;
        let m = multiplicative_upper(delta, x_min, x0).unwrap().bound;
        prop_assert!((v - m).abs() < 1e-8, "variable {v} vs multiplicative {m}");

        let hc = HSpec::constant(delta, 0.0, x0 * 1.5).unwrap();
        let v = variable_upper(&hc, x0, MonotoneEvidence::SampledCheck).unwrap().bound;
        let a = additive_upper(delta, x0).unwrap().bound;
        prop_assert!((v - a).abs() < 1e-8, "variable {v} vs additive {a}");
    }

    #[test]
    fn e1_series_identity_near_zero(x in 1e-9f64..1.0) {
        // E1(x) + ln x + gamma lies in [0, x] on (0, 1]
        let v = exp_integral_e1(x).unwrap() + x.ln() + EULER_GAMMA;
        prop_assert!(v >= -1e-12, "identity went negative: {v}");
        prop_assert!(v <= x + 1e-12, "identity exceeded x: {v}");
    }

    #[test]
    fn e1_is_positive_and_decreasing(x in 0.01f64..20.0, bump in 0.01f64..5.0) {
        let a = exp_integral_e1(x).unwrap();
        let b = exp_integral_e1(x + bump).unwrap();
        prop_assert!(a > 0.0);
        prop_assert!(b < a);
    }

    #[test]
    fn wilson_contains_point_estimate(hits in 0u64..1000, extra in 1u64..1000) {
        let n = hits + extra;
        let (lo, hi) = wilson_interval(hits, n, Z_99);
        let p = hits as f64 / n as f64;
        prop_assert!(lo <= p + 1e-12 && p <= hi + 1e-12);
        prop_assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
    }

    #[test]
    fn expression_eval_is_total_or_domain_error(
        c1 in -5.0f64..5.0,
        c2 in 0.1f64..5.0,
        x in 0.1f64..10.0,
    ) {
        // a grammar exercise: nested calls, powers and scientific literals
        let src = format!("min(max({c1}, x^2), exp({c2}*x/n)) + 1.5e-1*ln(x)");
        let ast = ExprAst::parse(&src).unwrap();
        let v = ast.eval(x, 10.0).unwrap();
        prop_assert!(v.is_finite());
    }

    #[test]
    fn parser_never_panics(src in "[ 0-9a-z+*/^().,niexlmc-]{0,40}") {
        // arbitrary near-grammar strings either parse or return an error
        let _ = ExprAst::parse(&src);
    }

    #[test]
    fn corpus_chains_have_finite_hitting_times(seed in 0u64..500) {
        let mut rng = Xoshiro256PlusPlus::seeded(seed);
        let chain = random_chain(&mut rng, 25);
        let expect = exact_expectation_per_state(&chain).unwrap();
        for (i, &e) in expect.iter().enumerate() {
            prop_assert!(e.is_finite() && e >= 0.0, "state {i}: {e}");
        }
    }
}
