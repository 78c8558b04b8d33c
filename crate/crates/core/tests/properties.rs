//! Framework-level invariants checked over random parameter sets of every
//! family.

use kappa_dist::dist::{ContinuousDistribution, Support};
use kappa_dist::kappa::ln_kappa;
use kappa_dist::oracle::{differentiate, DerivativeOrder};
use kappa_dist::{exp_kappa, Distribution, DistributionSpec, Kappa, Type1, Type2, Type4, Type5};
use proptest::prelude::*;

fn k(v: f64) -> Kappa {
    Kappa::new(v).unwrap()
}

fn any_spec() -> impl Strategy<Value = DistributionSpec> {
    prop_oneof![
        (0.5f64..3.0, 0.3f64..3.0, 0.4f64..2.5, 0.02f64..0.3).prop_map(|(alpha, beta, nu, kappa)| {
            DistributionSpec::Type1 { alpha, beta, nu, kappa }
        }),
        (-2.5f64..-0.5, 0.3f64..3.0, 0.5f64..2.0, 0.02f64..0.4).prop_map(|(alpha, beta, nu, kappa)| {
            DistributionSpec::Type1 { alpha, beta, nu, kappa }
        }),
        (1u32..=5, 0.3f64..3.0, 0.0f64..0.19).prop_map(|(n, beta, kappa)| DistributionSpec::Erlang { n, beta, kappa }),
        (0.5f64..4.0, 0.3f64..3.0, 0.0f64..0.9).prop_map(|(alpha, beta, kappa)| DistributionSpec::Type2 { alpha, beta, kappa }),
        (0.5f64..3.0, 0.3f64..3.0, 0.2f64..6.0, 0.0f64..0.8)
            .prop_map(|(alpha, beta, lambda, kappa)| DistributionSpec::Type3 { alpha, beta, lambda, kappa }),
        (0.5f64..3.0, 0.3f64..3.0, 0.05f64..0.9).prop_map(|(alpha, beta, kappa)| DistributionSpec::Type4 { alpha, beta, kappa }),
        (1u32..=3, 0.3f64..3.0, 0.0f64..0.8).prop_map(|(n, beta, kappa)| DistributionSpec::Type5 { n, beta, kappa }),
        (0.3f64..3.0, 0.0f64..0.6).prop_map(|(beta, kappa)| DistributionSpec::KappaNormal { beta, kappa }),
        (0.3f64..3.0, -2.0f64..2.0, 0.0f64..0.8)
            .prop_map(|(beta, location, kappa)| DistributionSpec::KappaLogistic { beta, location, kappa }),
    ]
}

fn build(spec: &DistributionSpec) -> Distribution {
    spec.build().unwrap_or_else(|e| panic!("{spec:?}: {e}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cdf_derivative_is_pdf(spec in any_spec(), p in 0.02f64..0.98) {
        let d = build(&spec);
        let x = d.quantile(p).unwrap();
        let h = 1e-2 * x.abs().max(d.scale() * 1e-2);
        let h = if d.support() == Support::HalfLine { h.min(0.5 * x) } else { h };
        let num = differentiate(|t| d.cdf(t), x, DerivativeOrder::First, h).unwrap().value;
        let pdf = d.pdf(x);
        prop_assert!((num - pdf).abs() <= 1e-6f64.max(1e-4 * pdf), "{spec:?} x={x}: {num} vs {pdf}");
    }

    #[test]
    fn hazard_times_survival_is_pdf(spec in any_spec(), p in 0.01f64..0.99) {
        let d = build(&spec);
        let x = d.quantile(p).unwrap();
        let s = d.survival(x);
        prop_assume!(s > 1e-12);
        let pdf = d.pdf(x);
        prop_assert!((d.hazard(x) * s - pdf).abs() <= 1e-10 * pdf, "{spec:?} x={x}");
        prop_assert!(d.hazard(x) >= 0.0);
    }

    #[test]
    fn quantile_inverts_cdf(spec in any_spec(), p in 0.005f64..0.995) {
        let d = build(&spec);
        let x = d.quantile(p).unwrap();
        prop_assert!((d.cdf(x) - p).abs() <= 1e-10, "{spec:?}: cdf(quantile({p})) = {}", d.cdf(x));
        let back = d.quantile(d.cdf(x)).unwrap();
        prop_assert!((back - x).abs() <= 1e-8 * x.abs().max(1e-300), "{spec:?}: {back} vs {x}");
    }

    #[test]
    fn cdf_is_monotone_with_unit_total(spec in any_spec(), p in 0.01f64..0.9, q in 0.0f64..0.09) {
        let d = build(&spec);
        let a = d.quantile(p).unwrap();
        let b = d.quantile(p + q).unwrap();
        prop_assert!(a <= b);
        prop_assert!(d.cdf(a) <= d.cdf(b));
        prop_assert!((d.cdf(a) + d.survival(a) - 1.0).abs() < 1e-14);
        prop_assert!(d.pdf(a) >= 0.0);
        prop_assert!(d.cdf(1e300) > 1.0 - 1e-9);
        let low = if d.support() == Support::HalfLine { 0.0 } else { -1e300 };
        prop_assert!(d.cdf(low) < 1e-9);
    }

    #[test]
    fn variance_is_non_negative(spec in any_spec()) {
        let d = build(&spec);
        if let Some(v) = d.descriptive_stats().variance {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn kappa_log_inverts_kappa_exp(x in -100.0f64..100.0, kv in 0.0f64..0.95) {
        let kk = k(kv);
        prop_assert!((ln_kappa(exp_kappa(x, kk), kk) - x).abs() <= 1e-10);
    }

    #[test]
    fn kappa_exp_is_exp_for_small_arguments(x in -1e-3f64..1e-3, kv in 0.0f64..0.9) {
        let bound = 5.0 * kv * kv * x.abs().powi(3) * x.abs().exp() + 1e-14;
        prop_assert!((exp_kappa(x, k(kv)) - x.exp()).abs() <= bound);
    }

    #[test]
    fn type5_first_order_is_type2_exponential(kv in 0.0f64..0.9, beta in 0.2f64..4.0, x in 0.0f64..50.0) {
        let v = Type5::new(1, beta, k(kv)).unwrap();
        let w = Type2::new(1.0, beta, k(kv)).unwrap();
        prop_assert!((v.pdf(x) - w.pdf(x)).abs() <= 1e-12 * w.pdf(x));
        prop_assert!((v.cdf(x) - w.cdf(x)).abs() <= 1e-12);
    }
}

#[test]
fn type1_upper_tail_law() {
    for &(a, nu, b, kv) in &[(1.0, 1.0, 1.0, 0.3), (2.0, 1.5, 0.7, 0.25), (0.8, 2.0, 1.3, 0.2)] {
        let d = Type1::new(a, b, nu, k(kv)).unwrap();
        let x = d.quantile(1.0 - 1e-7).unwrap();
        let exponent = 1.0 + a / kv - a * nu;
        assert!((d.tail_exponent().unwrap() - exponent).abs() < 1e-14);
        let ratio = x.powf(exponent) * d.pdf(x) / d.tail_prefactor().unwrap();
        assert!((ratio - 1.0).abs() < 0.01, "α={a} ν={nu}: {ratio}");
    }
}

#[test]
fn type1_origin_law() {
    for &(a, nu, b, kv) in &[(1.0, 2.5, 1.0, 0.3), (2.0, 0.3, 0.7, 0.25), (1.0, 1.0, 2.0, 0.2)] {
        let d = Type1::new(a, b, nu, k(kv)).unwrap();
        let x = 1e-8;
        let ratio = d.pdf(x) / (d.normalization() * x.powf(a * nu - 1.0));
        assert!((ratio - 1.0).abs() < 1e-4, "{ratio}");
    }
}

#[test]
fn type2_tail_and_origin_laws() {
    for &(a, b, kv) in &[(1.0, 1.0, 0.3), (2.0, 0.5, 0.2), (1.5, 2.0, 0.5)] {
        let d = Type2::new(a, b, k(kv)).unwrap();
        let x = d.quantile(1.0 - 1e-9).unwrap();
        let law = (a / kv) * (2.0 * kv * b).powf(-1.0 / kv) * x.powf(-1.0 - a / kv);
        assert!((d.pdf(x) / law - 1.0).abs() < 0.01);
        let x0 = 1e-6;
        assert!((d.pdf(x0) / (a * b * x0.powf(a - 1.0)) - 1.0).abs() < 1e-4);
    }
}

#[test]
fn type4_tails() {
    for &(a, b, kv) in &[(1.0, 1.0, 0.5), (2.0, 0.7, 0.3), (1.2, 1.5, 0.8)] {
        let d = Type4::new(a, b, k(kv)).unwrap();
        let x = d.quantile(1.0 - 1e-5).unwrap();
        let upper = x.powf(2.0 * a) * d.survival(x) * 4.0 * kv.powi(3) * b * b;
        assert!((upper - 1.0).abs() < 0.02, "upper {upper}");
        let x0 = 1e-4;
        let lower = d.cdf(x0) / ((2.0 * kv * b).powf(1.0 / kv) * x0.powf(a / kv));
        assert!((lower - 1.0).abs() < 1e-3, "lower {lower}");
    }
}

#[test]
fn type5_log_log_tail_slope() {
    for n in 1..=3 {
        for &kv in &[0.2, 0.5] {
            let d = Type5::new(n, 1.0, k(kv)).unwrap();
            let (x1, x2) = (1e2 / kv, 1e4 / kv);
            let slope = (d.pdf(x2).ln() - d.pdf(x1).ln()) / (x2.ln() - x1.ln());
            let expected = d.tail_exponent().unwrap();
            assert!(((slope - expected) / expected).abs() < 0.01, "n={n} κ={kv}: {slope}");
        }
    }
}

#[test]
fn real_line_laws_are_symmetric() {
    for spec in [
        DistributionSpec::KappaNormal { beta: 1.5, kappa: 0.3 },
        DistributionSpec::KappaLogistic { beta: 0.8, location: 0.0, kappa: 0.4 },
    ] {
        let d = build(&spec);
        assert_eq!(d.cdf(0.0), 0.5);
        for &x in &[0.1, 1.0, 7.0, 300.0] {
            assert!((d.pdf(x) - d.pdf(-x)).abs() <= 1e-15 * d.pdf(x));
            assert!((d.cdf(-x) - (1.0 - d.cdf(x))).abs() < 1e-14);
        }
        assert_eq!(d.raw_moment(1.0).unwrap(), 0.0);
    }
}
