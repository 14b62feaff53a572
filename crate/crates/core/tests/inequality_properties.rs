use std::f64::consts::{FRAC_PI_2, PI};

use exptype::inequality::{check_inequality, default_grid, uniform_grid, OmegaConfig};
use exptype::sampling::{interp_lhs, interp_rhs, SampledFunction};
use exptype::StieltjesMeasure;
use proptest::prelude::*;

fn fejer() -> impl Strategy<Value = StieltjesMeasure> {
    (1usize..=5, 0.1f64..=1.0, 1.0f64..4.0)
        .prop_map(|(m, lambda, delta)| StieltjesMeasure::from_fejer(m, lambda, delta).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn margin_is_nonnegative_under_cosine_hypothesis(m in fejer()) {
        let cfg = OmegaConfig::new(&m, 0, 0.0).unwrap();
        let report = check_inequality(&cfg, &default_grid(m.sigma(), -15.0, 15.0));
        prop_assert!(report.hypothesis_ok);
        for s in &report.samples {
            prop_assert!(s.margin >= -1e-9 * s.scale, "margin {} at {}", s.margin, s.x);
        }
        prop_assert!(report.holds());
    }

    #[test]
    fn equality_dichotomy(m in fejer()) {
        let cfg = OmegaConfig::new(&m, 0, 0.0).unwrap();
        let report = check_inequality(&cfg, &default_grid(m.sigma(), 0.0, 15.0));
        let tol = report.tolerances;
        prop_assert!(report.dichotomy_failures.is_empty());
        for &x in &report.equality_points {
            let s = cfg.margin(x);
            prop_assert!(s.e.abs() <= tol.e_abs);
            prop_assert!(s.margin.abs() <= tol.equality * s.scale, "margin {} at {x}", s.margin);
        }
        for s in &report.samples {
            if s.e.abs() <= tol.e_abs {
                prop_assert!(s.margin.abs() <= tol.equality * s.scale);
            }
            if s.margin.abs() <= tol.equality * s.scale {
                prop_assert!(s.e.abs() <= 1e-3 * s.scale.sqrt(), "E {} at {}", s.e, s.x);
            }
        }
    }

    #[test]
    fn bracket_and_determinant_margins_agree(m in fejer(), x in -15.0f64..15.0) {
        let cfg = OmegaConfig::new(&m, 0, 0.0).unwrap();
        let s = cfg.margin(x);
        prop_assert!((cfg.margin_from_pq(x) - s.margin).abs() <= 1e-9 * s.scale);
    }

    #[test]
    fn interpolation_matches_for_omega_functions(
        m in fejer(),
        alpha in -PI..PI,
        x in -10.0f64..10.0,
    ) {
        let cfg = OmegaConfig::new(&m, 0, 0.0).unwrap();
        let f = SampledFunction::from_omega(&cfg, alpha).unwrap();
        let sigma = f.sigma();
        let rhs = interp_rhs(&f, sigma, alpha, x, 4000).unwrap();
        let lhs = interp_lhs(&f, sigma, alpha, x);
        prop_assert!((lhs - rhs.value).abs() <= rhs.tail_bound + 1e-9);
        // Every term is nonnegative when E ≥ 0 on the nodes.
        prop_assert!(rhs.value >= -rhs.tail_bound - 1e-12);
    }

    #[test]
    fn sine_interpolates_to_zero(sigma in 0.5f64..4.0, alpha in -PI..PI, x in -10.0f64..10.0) {
        let f = SampledFunction::sine(sigma, alpha).unwrap();
        prop_assert!(interp_lhs(&f, sigma, alpha, x).abs() <= 1e-12 * sigma);
        prop_assert!(interp_rhs(&f, sigma, alpha, x, 200).unwrap().value.abs() <= 1e-12 * sigma);
    }

    #[test]
    fn tail_bound_decreases_with_terms(sigma in 0.5f64..4.0, alpha in -PI..PI, x in -10.0f64..10.0) {
        let f = SampledFunction::cosine(sigma, alpha).unwrap();
        let a = interp_rhs(&f, sigma, alpha, x, 100).unwrap();
        let b = interp_rhs(&f, sigma, alpha, x, 1000).unwrap();
        prop_assert!(b.tail_bound <= a.tail_bound);
    }
}

#[test]
fn atom_at_sigma_is_global_equality() {
    let m = StieltjesMeasure::atomic(1.0, &[(1.0, 1.0)]).unwrap();
    let cfg = OmegaConfig::new(&m, 0, FRAC_PI_2).unwrap();
    let report = check_inequality(&cfg, &uniform_grid(-10.0, 10.0, 0.01));
    assert!(report.global_equality);
    assert!(report.global_form_ok);
    assert!(report.equality_points.is_empty());
}
