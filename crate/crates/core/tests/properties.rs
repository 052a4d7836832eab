//! Property tests across modules.

use conslaw::envelope::{build_envelope, EnvelopeSegment, Side};
use conslaw::flux::parse_flux_spec;
use conslaw::solver::{solve_riemann_exact, solve_riemann_numerical};
use conslaw::FluxFunction;
use proptest::prelude::*;

fn ex1() -> FluxFunction {
    parse_flux_spec("polynomial:[0,0,4,-4,1]").unwrap()
}

fn ex3() -> FluxFunction {
    parse_flux_spec("polynomial:[0,0,3,-5/3,1/4]").unwrap()
}

fn central_difference(f: impl Fn(f64) -> f64, u: f64, h: f64) -> f64 {
    (f(u + h) - f(u - h)) / (2.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_derivatives_match_differences(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..6),
        u in -2.0f64..2.0,
    ) {
        let f = FluxFunction::polynomial(&coeffs);
        let h = 1e-5;
        let scale = 1.0 + coeffs.iter().map(|c| c.abs()).sum::<f64>() * 2f64.powi(5);
        prop_assert!((f.df(u) - central_difference(|v| f.f(v), u, h)).abs() < 1e-6 * scale);
        prop_assert!((f.d2f(u) - central_difference(|v| f.df(v), u, h)).abs() < 1e-6 * scale);
    }

    #[test]
    fn rational_derivatives_match_differences(
        m in 0.1f64..4.0,
        u in 0.0f64..1.0,
    ) {
        let f = parse_flux_spec(&format!("named:buckley-leverett{{M:{m}}}")).unwrap();
        let h = 1e-6;
        prop_assert!((f.df(u) - central_difference(|v| f.f(v), u, h)).abs() < 1e-5);
        prop_assert!((f.d2f(u) - central_difference(|v| f.df(v), u, h)).abs() < 1e-4);
    }

    #[test]
    fn flux_spec_text_round_trips(coeffs in prop::collection::vec(-3.0f64..3.0, 1..6)) {
        let f = FluxFunction::polynomial(&coeffs);
        let again = parse_flux_spec(&f.spec().to_string()).unwrap();
        prop_assert_eq!(again.spec(), f.spec());
    }

    #[test]
    fn envelopes_bound_the_flux_and_tile_the_interval(
        a in -0.5f64..3.0,
        b in -0.5f64..3.0,
        quartic in prop::bool::ANY,
    ) {
        prop_assume!((a - b).abs() > 1e-3);
        let f = if quartic { ex3() } else { ex1() };
        let env = build_envelope(&f, a, b).unwrap();
        let (lo, hi) = env.interval;
        prop_assert_eq!(env.segments.first().unwrap().bounds().0, lo);
        prop_assert_eq!(env.segments.last().unwrap().bounds().1, hi);
        for w in env.segments.windows(2) {
            prop_assert_eq!(w[0].bounds().1, w[1].bounds().0);
        }
        let sign = if env.side == Side::Upper { 1.0 } else { -1.0 };
        for k in 0..=400 {
            let u = lo + (hi - lo) * k as f64 / 400.0;
            prop_assert!(sign * (env.value(&f, u) - f.f(u)) >= -1e-9);
        }
        // Secant slopes decrease (upper) or increase (lower) left to right.
        let slopes: Vec<f64> = env
            .segments
            .iter()
            .filter_map(|s| match *s {
                EnvelopeSegment::Secant { slope, .. } => Some(slope),
                _ => None,
            })
            .collect();
        for w in slopes.windows(2) {
            prop_assert!(sign * (w[1] - w[0]) <= 1e-9);
        }
    }

    #[test]
    fn riemann_solutions_are_monotone_and_conservative(
        a in -0.5f64..3.0,
        b in -0.5f64..3.0,
    ) {
        prop_assume!((a - b).abs() > 1e-2);
        let sol = solve_riemann_exact(&ex1(), a, b, 0.0, 1.0).unwrap();
        let sign = (b - a).signum();
        for w in sol.samples.windows(2) {
            prop_assert!(sign * (w[1].1 - w[0].1) >= -1e-12);
        }
        prop_assert!(sol.mass_drift() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn characteristic_solver_agrees_with_envelope(
        a in -0.5f64..3.0,
        b in -0.5f64..3.0,
    ) {
        prop_assume!((a - b).abs() > 0.05);
        let f = ex1();
        let exact = solve_riemann_exact(&f, a, b, 0.0, 1.0).unwrap();
        let num = solve_riemann_numerical(&f, a, b, 0.0, 1.0, 96).unwrap();
        prop_assert_eq!(num.shocks.len(), exact.shocks.len());
        for (p, q) in num.shocks.iter().zip(&exact.shocks) {
            prop_assert!((p.x_s - q.x_s).abs() < 1e-5, "{} vs {}", p.x_s, q.x_s);
            prop_assert!((p.speed - q.speed).abs() < 1e-5);
        }
        prop_assert!(num.mass_drift() < 1e-9);
    }
}
