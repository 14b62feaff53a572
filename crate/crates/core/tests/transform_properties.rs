use exptype::{Evaluator, PiecewiseLinearDensity, StieltjesMeasure};
use num_complex::Complex64;
use proptest::prelude::*;

fn mixed_measure() -> impl Strategy<Value = StieltjesMeasure> {
    (
        0.5f64..4.0,
        prop::collection::vec((0.0f64..=1.0, -2.0f64..2.0), 1..5),
        prop::collection::vec(-1.0f64..1.0, 2..5),
    )
        .prop_map(|(sigma, atoms, vals)| {
            let pairs: Vec<(f64, f64)> = atoms.iter().map(|&(u, c)| (u * sigma, c)).collect();
            let atomic = StieltjesMeasure::atomic(sigma, &pairs).unwrap();
            let n = vals.len();
            let nodes = (0..n)
                .map(|j| {
                    if j + 1 == n {
                        sigma
                    } else {
                        sigma * j as f64 / (n - 1) as f64
                    }
                })
                .collect();
            let d = PiecewiseLinearDensity::new(nodes, vals).unwrap();
            StieltjesMeasure::new(sigma, atomic.atoms().to_vec(), Some(d)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identities_hold(
        m in mixed_measure(),
        x in -50.0f64..50.0,
        alpha in -3.2f64..3.2,
        beta in -3.2f64..3.2,
    ) {
        let r = Evaluator::new(&m).identity_residuals(x, alpha, beta);
        prop_assert!(r.max_relative() <= 1e-10, "{r:?}");
    }

    #[test]
    fn parity(m in mixed_measure(), x in 0.0f64..50.0) {
        let ev = Evaluator::new(&m);
        let tol = 1e-12 * m.total_variation().max(1.0);
        let (gp, hp) = ev.gh_deriv(x, 0);
        let (gm, hm) = ev.gh_deriv(-x, 0);
        let (cp, sp) = ev.cs_deriv(x, 0);
        let (cm, sm) = ev.cs_deriv(-x, 0);
        prop_assert!((gp - gm).abs() <= tol && (cp - cm).abs() <= tol);
        prop_assert!((hp + hm).abs() <= tol && (sp + sm).abs() <= tol);
    }

    #[test]
    fn growth_bound(m in mixed_measure(), x in -30.0f64..30.0, y in -8.0f64..8.0) {
        let f = Evaluator::new(&m).f(Complex64::new(x, y));
        let bound = m.total_variation() * (-y * m.sigma()).exp().max(1.0);
        prop_assert!(f.norm() <= bound * (1.0 + 1e-12));
    }
}
