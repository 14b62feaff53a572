use exptype::zeros::{
    classify, cosine_violation, count_zeros, find_real_zeros, hypothesis_grid, Rectangle, Target,
};
use exptype::{Evaluator, StieltjesMeasure};
use proptest::prelude::*;

fn triangle(f0: f64) -> StieltjesMeasure {
    StieltjesMeasure::from_pd_profile(&[0.0, 1.0], &[1.0, 0.0], f0 - 1.0).unwrap()
}

fn fejer() -> impl Strategy<Value = StieltjesMeasure> {
    (1usize..=5, 0.1f64..=1.0, 1.0f64..4.0)
        .prop_map(|(m, lambda, delta)| StieltjesMeasure::from_fejer(m, lambda, delta).unwrap())
}

/// Second central difference; test-side oracle for `Δ″`.
fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn count_is_additive_under_splits(f0 in 0.05f64..0.95, frac in 0.3f64..0.7) {
        let m = triangle(f0);
        let rect = Rectangle::new(-7.3, 6.1, -4.0, -0.5).unwrap();
        let whole = count_zeros(Target::F, &m, &rect).unwrap();
        let (a, b) = rect.split(frac);
        let left = count_zeros(Target::F, &m, &a);
        let right = count_zeros(Target::F, &m, &b);
        // A split landing on the zero is reported, never miscounted.
        if let (Ok(l), Ok(r)) = (left, right) {
            prop_assert_eq!(whole.count, l.count + r.count);
            prop_assert!(l.winding_residual <= 0.25 && r.winding_residual <= 0.25);
        }
        prop_assert!(whole.winding_residual <= 0.25);
    }

    #[test]
    fn lower_zero_exactly_when_f0_in_unit_interval(f0 in -0.5f64..1.5) {
        prop_assume!(f0.abs() > 0.02 && (f0 - 1.0).abs() > 0.02);
        let count = count_zeros(Target::F, &triangle(f0), &Rectangle::standard_lower())
            .unwrap()
            .count;
        prop_assert_eq!(count, usize::from(f0 > 0.0 && f0 < 1.0));
    }

    #[test]
    fn real_zeros_are_simple_with_double_zero_of_delta(m in fejer()) {
        let ev = Evaluator::new(&m);
        prop_assume!(cosine_violation(&ev).is_none());
        let v = m.total_variation();
        for z in find_real_zeros(&m, (-15.0, 15.0), true).unwrap() {
            if z.x.abs() < 1e-9 {
                continue;
            }
            prop_assert_eq!(z.multiplicity, 1);
            prop_assert!(ev.f_deriv(num_complex::Complex64::new(z.x, 0.0), 1).norm() > 1e-8 * v);
            prop_assert!(ev.delta(z.x).abs() <= 1e-8 * v * v);
            let dd = second_difference(|x| ev.delta(x), z.x, 1e-3);
            prop_assert!(dd > 0.0, "Δ″({}) = {dd}", z.x);
        }
    }

    #[test]
    fn delta_nonnegative_under_cosine_hypothesis(m in fejer()) {
        let ev = Evaluator::new(&m);
        prop_assume!(cosine_violation(&ev).is_none());
        let tol = 1e-9 * m.total_variation().powi(2);
        for x in hypothesis_grid(m.sigma()) {
            prop_assert!(ev.delta(x) >= -tol, "Δ({x}) = {}", ev.delta(x));
        }
    }

    #[test]
    fn shifted_delta_nonnegative_with_one_lower_zero(f0 in 0.1f64..0.9) {
        let m = triangle(f0);
        let ev = Evaluator::new(&m);
        let lower = classify(&m).unwrap().lower_zero.unwrap();
        let xi = -lower.im;
        prop_assert!(xi > 0.0 && lower.re.abs() < 1e-9);
        let tol = 1e-9 * m.total_variation().powi(2);
        for x in hypothesis_grid(m.sigma()) {
            let (g, h) = ev.gh_deriv(x, 0);
            let shifted = ev.delta(x) + xi * (g * g + h * h) / (xi * xi + x * x);
            prop_assert!(shifted >= -tol, "Δ_ξ({x}) = {shifted}");
        }
    }
}

#[test]
fn h_alpha_zero_structure() {
    let rect = Rectangle::standard_lower();
    let alphas = [0.0, 0.4, 0.9, 1.3, 1.9, 2.5, 3.0];
    let case_two = triangle(0.5);
    let nonreal = alphas
        .iter()
        .map(|&a| {
            count_zeros(Target::HAlpha(a), &case_two, &rect)
                .unwrap()
                .count
        })
        .max()
        .unwrap();
    assert!(nonreal >= 1);

    let case_one = StieltjesMeasure::from_fejer(2, 1.0, 1.0).unwrap();
    assert!(cosine_violation(&Evaluator::new(&case_one)).is_none());
    for a in alphas {
        assert_eq!(
            count_zeros(Target::HAlpha(a), &case_one, &rect)
                .unwrap()
                .count,
            0,
            "α = {a}"
        );
    }
}

#[test]
fn fejer_fixture_has_real_zeros() {
    // Keeps the simplicity property from passing vacuously.
    let m = StieltjesMeasure::from_fejer(2, 1.0, 1.0).unwrap();
    assert!(!find_real_zeros(&m, (-15.0, 15.0), true).unwrap().is_empty());
}
