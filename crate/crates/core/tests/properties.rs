use loglap::cli::csv::fmt_f64;
use loglap::distverify::{builtin_witnesses, pairing_elog, Witness};
use loglap::fundsol::{decay_fit_samples, remainder_symbol};
use loglap::specfun::{digamma, gamma_fn};
use loglap::QuadratureSpec;
use proptest::prelude::*;

proptest! {
    #[test]
    fn gamma_recurrence(x in 0.05f64..40.0) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs());
    }

    #[test]
    fn digamma_recurrence(x in 0.05f64..200.0) {
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs.abs() + 1.0 / x));
    }

    #[test]
    fn remainder_symbol_is_continuous_across_the_series_switch(s in 0.9f64..1.1, h in 1e-9f64..1e-7) {
        let a = remainder_symbol(s);
        let b = remainder_symbol(s + h);
        // |d/ds| ≤ 1 near s = 1.
        prop_assert!((a - b).abs() <= h + 1e-12);
        prop_assert!((a - 0.5).abs() < 0.1);
    }

    #[test]
    fn csv_floats_round_trip(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn decay_fit_recovers_power_laws(kappa in 0.1f64..2.0, c in 0.1f64..10.0) {
        let radii: Vec<f64> = (0..40).map(|i| 2.0 * 100f64.powf(i as f64 / 39.0)).collect();
        let mags: Vec<f64> = radii.iter().map(|r| c * r.powf(-kappa)).collect();
        let rep = decay_fit_samples(&radii, &mags, kappa, false, 2.0, 200.0).unwrap();
        prop_assert!((rep.slope + kappa).abs() < 1e-10);
        prop_assert!((rep.sup_scaled - c).abs() < 1e-10 * c);
        prop_assert!(rep.fit_residual < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pairing_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, i in 0usize..3, j in 0usize..3, d in 1u32..=2) {
        let w = builtin_witnesses();
        let spec = QuadratureSpec::default();
        let combined = Witness::combine(alpha, &w[i], beta, &w[j]);
        let lhs = pairing_elog(&combined, d, &spec).unwrap().value;
        let a = pairing_elog(&w[i], d, &spec).unwrap().value;
        let b = pairing_elog(&w[j], d, &spec).unwrap().value;
        let rhs = a * alpha + b * beta;
        let scale = 1.0 + alpha.abs() * a.norm() + beta.abs() * b.norm();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * scale, "lhs {lhs}, rhs {rhs}");
    }
}
