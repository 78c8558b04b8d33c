use kappa_dist::dist::ContinuousDistribution;
use kappa_dist::fit::{fit_mle, sample, tail_index, Family, FitOptions, Sample};
use kappa_dist::oracle::find_root;
use kappa_dist::{DistributionSpec, Error, Kappa, Type2, Type5};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weibull_draws(alpha: f64, beta: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (-(1.0 - rng.random::<f64>()).ln() / beta).powf(1.0 / alpha))
        .collect()
}

/// Weibull MLE with survival `exp(−βx^α)`: α from the profile score
/// `1/α + mean(ln x) − Σx^α ln x / Σx^α = 0`, then `β = n / Σx^α`.
fn weibull_profile_mle(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean_ln = xs.iter().map(|x| x.ln()).sum::<f64>() / n;
    let score = |a: f64| {
        let (s, sl) = xs.iter().fold((0.0, 0.0), |(s, sl), &x| {
            let p = x.powf(a);
            (s + p, sl + p * x.ln())
        });
        1.0 / a + mean_ln - sl / s
    };
    let a = find_root(score, 0.05, 50.0, 1e-14, 300).unwrap();
    let b = n / xs.iter().map(|x| x.powf(a)).sum::<f64>();
    (a, b)
}

#[test]
fn fixed_classical_kappa_matches_weibull_profile_likelihood() {
    let xs = weibull_draws(1.7, 0.6, 5000, 3);
    let (a, b) = weibull_profile_mle(&xs);
    let fit = fit_mle(
        Family::Type2,
        &Sample::new(xs).unwrap(),
        &FitOptions {
            fixed_kappa: Some(0.0),
            ..FitOptions::default()
        },
    )
    .unwrap();
    let DistributionSpec::Type2 { alpha, beta, kappa } = fit.spec else {
        panic!("wrong family")
    };
    assert_eq!(kappa, 0.0);
    assert!(((alpha - a) / a).abs() < 1e-5, "{alpha} vs {a}");
    assert!(((beta - b) / b).abs() < 1e-5, "{beta} vs {b}");
    assert_eq!(fit.stderr_estimates.as_ref().unwrap()[2], 0.0);
}

#[test]
fn classical_weibull_data_gives_small_kappa() {
    let xs = weibull_draws(2.0, 1.0, 100_000, 8);
    let fit = fit_mle(Family::Type2, &Sample::new(xs).unwrap(), &FitOptions::default()).unwrap();
    let kappa = fit.spec.kappa();
    assert!(kappa < 0.05, "κ̂={kappa}");
}

#[test]
fn likelihood_never_decreases_and_fit_is_deterministic() {
    let d = Type2::new(1.3, 0.8, Kappa::new(0.4).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = Sample::new(sample(&d, 3000, &mut rng).unwrap()).unwrap();
    let a = fit_mle(Family::Type2, &s, &FitOptions::default()).unwrap();
    assert!(a.converged);
    assert!(a.history.windows(2).all(|w| w[1] >= w[0]));
    assert!((a.history.last().copied().unwrap() - a.log_likelihood).abs() < 1e-9 * a.log_likelihood.abs());
    let b = fit_mle(Family::Type2, &s, &FitOptions::default()).unwrap();
    assert_eq!(a.spec, b.spec);
    assert_eq!(a.log_likelihood, b.log_likelihood);
}

#[test]
fn integer_weights_act_as_replication() {
    let xs = weibull_draws(1.2, 1.0, 800, 12);
    let doubled: Vec<f64> = xs.iter().chain(xs.iter()).copied().collect();
    let opts = FitOptions {
        fixed_kappa: Some(0.2),
        ..FitOptions::default()
    };
    let w = fit_mle(Family::Type2, &Sample::with_weights(xs.clone(), vec![2.0; xs.len()]).unwrap(), &opts).unwrap();
    let r = fit_mle(Family::Type2, &Sample::new(doubled).unwrap(), &opts).unwrap();
    assert!(((w.log_likelihood - r.log_likelihood) / r.log_likelihood).abs() < 1e-9);
    for (p, q) in w.spec.params().iter().zip(r.spec.params()) {
        assert!((p.1 - q.1).abs() < 1e-5 * q.1.abs().max(1e-3));
    }
}

#[test]
fn type5_fit_recovers_scale() {
    let truth = Type5::new(2, 1.5, Kappa::new(0.3).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let s = Sample::new(sample(&truth, 20_000, &mut rng).unwrap()).unwrap();
    let fit = fit_mle(Family::Type5 { n: 2 }, &s, &FitOptions::default()).unwrap();
    let se = fit.stderr_estimates.clone().unwrap();
    let DistributionSpec::Type5 { n, beta, kappa } = fit.spec else {
        panic!("wrong family")
    };
    assert_eq!(n, 2);
    assert!((beta - 1.5).abs() < 4.0 * se[0], "β̂={beta} ± {}", se[0]);
    assert!((kappa - 0.3).abs() < 4.0 * se[1], "κ̂={kappa} ± {}", se[1]);
}

#[test]
fn empirical_quantiles_match_analytic() {
    let d = Type2::new(0.9, 1.0, Kappa::new(0.35).unwrap()).unwrap();
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let s = Sample::new(sample(&d, n, &mut rng).unwrap()).unwrap();
    for &p in &[0.5, 0.9, 0.99] {
        let x = d.quantile(p).unwrap();
        let empirical = s.values()[(p * n as f64) as usize];
        let noise = (p * (1.0 - p) / n as f64).sqrt() / d.pdf(x);
        assert!((empirical - x).abs() < 3.0 * noise, "P={p}: {empirical} vs {x}");
    }
}

#[test]
fn pareto_tail_exponent() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let xs: Vec<f64> = (0..200_000).map(|_| (1.0 - rng.random::<f64>()).powf(-0.5)).collect();
    let b = tail_index(&Sample::new(xs).unwrap(), 0.05).unwrap();
    assert!((b - 3.0).abs() < 0.1, "b̂={b}");
}

#[test]
fn degenerate_data_reports_non_convergence() {
    let s = Sample::new(vec![2.0; 50]).unwrap();
    match fit_mle(Family::Type2, &s, &FitOptions::default()) {
        Err(Error::FitNonConvergence { best }) => assert!(!best.converged),
        Err(Error::AllMassAtBoundary { .. }) => {}
        other => panic!("expected a non-convergence report, got {other:?}"),
    }
}
