use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::sample::Sample;
use super::simplex::{minimize, SimplexOptions};
use crate::dist::ContinuousDistribution;
use crate::error::{Error, Result};
use crate::family::DistributionSpec;
use crate::oracle;

/// Families supported by [`fit_mle`]. All are fitted with `α > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Type1,
    Type2,
    Type3,
    Type4,
    Type5 { n: u32 },
}

impl Family {
    /// Parameter names in the order used by [`FitResult::stderr_estimates`];
    /// κ is always last.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Family::Type1 => &["alpha", "beta", "nu", "kappa"],
            Family::Type2 | Family::Type4 => &["alpha", "beta", "kappa"],
            Family::Type3 => &["alpha", "beta", "lambda", "kappa"],
            Family::Type5 { .. } => &["beta", "kappa"],
        }
    }

    fn spec(&self, t: &[f64]) -> DistributionSpec {
        match *self {
            Family::Type1 => DistributionSpec::Type1 { alpha: t[0], beta: t[1], nu: t[2], kappa: t[3] },
            Family::Type2 => DistributionSpec::Type2 { alpha: t[0], beta: t[1], kappa: t[2] },
            Family::Type3 => DistributionSpec::Type3 { alpha: t[0], beta: t[1], lambda: t[2], kappa: t[3] },
            Family::Type4 => DistributionSpec::Type4 { alpha: t[0], beta: t[1], kappa: t[2] },
            Family::Type5 { n } => DistributionSpec::Type5 { n, beta: t[0], kappa: t[1] },
        }
    }

    fn natural(&self, spec: &DistributionSpec) -> Option<Vec<f64>> {
        let v = match (*self, *spec) {
            (Family::Type1, DistributionSpec::Type1 { alpha, beta, nu, kappa }) => vec![alpha, beta, nu, kappa],
            (Family::Type2, DistributionSpec::Type2 { alpha, beta, kappa })
            | (Family::Type4, DistributionSpec::Type4 { alpha, beta, kappa }) => vec![alpha, beta, kappa],
            (Family::Type3, DistributionSpec::Type3 { alpha, beta, lambda, kappa }) => vec![alpha, beta, lambda, kappa],
            (Family::Type5 { n }, DistributionSpec::Type5 { n: m, beta, kappa }) if n == m => vec![beta, kappa],
            _ => return None,
        };
        Some(v)
    }

    fn has_shape(&self) -> bool {
        !matches!(self, Family::Type5 { .. })
    }

    /// Smallest α for which the second moment exists with unit ν and λ.
    fn alpha_floor(&self, kappa: f64) -> f64 {
        match self {
            Family::Type1 => 2.0 * kappa / (1.0 - kappa),
            Family::Type2 | Family::Type3 => 2.0 * kappa,
            Family::Type4 => 1.0,
            Family::Type5 { .. } => 0.0,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct FitOptions {
    /// Hold κ at this value instead of estimating it.
    pub fixed_kappa: Option<f64>,
    /// Replaces the first moment-matched starting point.
    pub init: Option<DistributionSpec>,
    /// Per-run simplex iteration cap; 0 selects the default.
    pub max_iter: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub spec: DistributionSpec,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Aligned with `param_names`; a fixed κ reports 0.
    pub stderr_estimates: Option<Vec<f64>>,
    pub param_names: Vec<&'static str>,
    /// Best log-likelihood after each accepted simplex iteration.
    #[serde(skip)]
    pub history: Vec<f64>,
}

const KAPPA_BOUNDARY: f64 = 0.999;
const MAX_LOG_PARAM: f64 = 40.0;

struct Problem<'a> {
    family: Family,
    sample: &'a Sample,
    fixed_kappa: Option<f64>,
}

impl Problem<'_> {
    fn log_likelihood(&self, theta: &[f64]) -> f64 {
        let Ok(d) = self.family.spec(theta).build() else {
            return f64::NEG_INFINITY;
        };
        let xs = self.sample.values();
        let ll: f64 = (0..xs.len()).map(|i| self.sample.weight(i) * d.ln_pdf(xs[i])).sum();
        if ll.is_finite() {
            ll
        } else {
            f64::NEG_INFINITY
        }
    }

    /// Free coordinates: logs of positive parameters, logit of κ.
    fn to_free(&self, theta: &[f64]) -> Vec<f64> {
        let (body, k) = theta.split_at(theta.len() - 1);
        let mut z: Vec<f64> = body.iter().map(|v| v.ln()).collect();
        if self.fixed_kappa.is_none() {
            let k = k[0].clamp(1e-9, 1.0 - 1e-9);
            z.push((k / (1.0 - k)).ln());
        }
        z
    }

    fn to_natural(&self, z: &[f64]) -> Vec<f64> {
        let m = self.family.param_names().len() - 1;
        let mut t: Vec<f64> = z[..m].iter().map(|v| v.exp()).collect();
        t.push(match self.fixed_kappa {
            Some(k) => k,
            None => 1.0 / (1.0 + (-z[m]).exp()),
        });
        t
    }

    /// Moment matching: the shape α reproduces the sample coefficient of
    /// variation (with unit ν, λ) and β then reproduces the mean.
    fn moment_start(&self, kappa: f64, multiplier: f64) -> Vec<f64> {
        let mean = self.sample.weighted_moment(1);
        let var = (self.sample.weighted_moment(2) - mean * mean).max(0.0);
        let cv = var.sqrt() / mean;
        let with = |alpha: f64, beta: f64| -> Vec<f64> {
            match self.family {
                Family::Type1 | Family::Type3 => vec![alpha, beta, 1.0, kappa],
                Family::Type2 | Family::Type4 => vec![alpha, beta, kappa],
                Family::Type5 { .. } => vec![beta, kappa],
            }
        };
        let model_moment = |alpha: f64, m: f64| -> Option<f64> {
            self.family.spec(&with(alpha, 1.0)).build().ok()?.raw_moment(m).ok()
        };
        if !self.family.has_shape() {
            let beta = model_moment(1.0, 1.0).map_or(1.0 / mean, |mu| mu / mean);
            return with(1.0, beta * multiplier);
        }
        let model_cv = |alpha: f64| -> f64 {
            match (model_moment(alpha, 1.0), model_moment(alpha, 2.0)) {
                (Some(m1), Some(m2)) => (m2 - m1 * m1).max(0.0).sqrt() / m1,
                _ => f64::NAN,
            }
        };
        let lo = self.family.alpha_floor(kappa) * 1.02 + 0.05;
        let hi = 40.0;
        let alpha = oracle::find_root(|a| model_cv(a) - cv, lo, hi, 1e-6, 200)
            .unwrap_or_else(|_| lo.max(1.0))
            * multiplier;
        let beta = match model_moment(alpha, 1.0) {
            Some(mu) if mean > 0.0 => (mu / mean).powf(alpha),
            _ => 1.0,
        };
        with(alpha, beta)
    }

    fn hessian_stderr(&self, theta: &[f64]) -> Option<Vec<f64>> {
        let free = if self.fixed_kappa.is_some() { theta.len() - 1 } else { theta.len() };
        let h: Vec<f64> = theta[..free].iter().map(|v| 1e-3 * v.abs().max(1e-2)).collect();
        let f = |d: &[(usize, f64)]| -> f64 {
            let mut t = theta.to_vec();
            for &(i, s) in d {
                t[i] += s;
            }
            -self.log_likelihood(&t)
        };
        let f0 = f(&[]);
        let mut hess = DMatrix::<f64>::zeros(free, free);
        for i in 0..free {
            hess[(i, i)] = (f(&[(i, h[i])]) - 2.0 * f0 + f(&[(i, -h[i])])) / (h[i] * h[i]);
            for j in 0..i {
                let v = (f(&[(i, h[i]), (j, h[j])]) - f(&[(i, h[i]), (j, -h[j])]) - f(&[(i, -h[i]), (j, h[j])])
                    + f(&[(i, -h[i]), (j, -h[j])]))
                    / (4.0 * h[i] * h[j]);
                hess[(i, j)] = v;
                hess[(j, i)] = v;
            }
        }
        if !hess.iter().all(|v| v.is_finite()) {
            return None;
        }
        let cov = hess.cholesky()?.inverse();
        let mut se: Vec<f64> = (0..free).map(|i| cov[(i, i)].sqrt()).collect();
        if free < theta.len() {
            se.push(0.0);
        }
        Some(se)
    }
}

/// Maximum-likelihood fit by simplex search in transformed coordinates,
/// restarted from three deterministic starting points and polished once.
/// Standard errors come from the inverse observed information.
pub fn fit_mle(family: Family, sample: &Sample, options: &FitOptions) -> Result<FitResult> {
    sample.check_support(crate::dist::Support::HalfLine)?;
    if let Some(k) = options.fixed_kappa {
        crate::kappa::Kappa::new(k)?;
    }
    let problem = Problem {
        family,
        sample,
        fixed_kappa: options.fixed_kappa,
    };
    let total = sample.total_weight();
    let objective = |z: &[f64]| -problem.log_likelihood(&problem.to_natural(z)) / total;

    let mut starts: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            let kappa = options.fixed_kappa.unwrap_or([0.1, 0.3, 0.6][i]);
            let mult = if options.fixed_kappa.is_some() { [1.0, 0.6, 1.6][i] } else { 1.0 };
            problem.moment_start(kappa, mult)
        })
        .collect();
    if let Some(init) = options.init {
        let mut t = family
            .natural(&init)
            .ok_or_else(|| Error::domain("fit init", f64::NAN, "initial parameters of the fitted family"))?;
        if let Some(k) = options.fixed_kappa {
            *t.last_mut().expect("κ present") = k;
        }
        starts[0] = t;
    }

    let max_iter = if options.max_iter == 0 { 4000 } else { options.max_iter };
    let opts = SimplexOptions { max_iter, ..Default::default() };
    let mut iterations = 0;
    let mut best = None::<(Vec<f64>, f64, Vec<f64>)>;
    for start in &starts {
        let run = minimize(objective, &problem.to_free(start), &opts);
        iterations += run.iterations;
        if best.as_ref().is_none_or(|b| run.f < b.1) {
            best = Some((run.x, run.f, run.history));
        }
    }
    let (z, _, mut history) = best.expect("three starts");
    let polish = minimize(objective, &z, &SimplexOptions { step: 0.05, ..opts });
    iterations += polish.iterations;
    history.extend(polish.history);

    let theta = problem.to_natural(&polish.x);
    let log_likelihood = problem.log_likelihood(&theta);
    // a shape or scale running off to 0 or ∞ means no interior maximum
    let escaped = polish.x[..family.param_names().len() - 1].iter().any(|z| z.abs() > MAX_LOG_PARAM);
    let result = FitResult {
        spec: family.spec(&theta),
        log_likelihood,
        converged: polish.converged && log_likelihood.is_finite() && !escaped,
        iterations,
        stderr_estimates: if log_likelihood.is_finite() { problem.hessian_stderr(&theta) } else { None },
        param_names: family.param_names().to_vec(),
        history: history.iter().map(|f| -f * total).collect(),
    };
    let kappa = *theta.last().expect("κ present");
    if options.fixed_kappa.is_none() && kappa > KAPPA_BOUNDARY {
        return Err(Error::AllMassAtBoundary {
            kappa,
            best: Box::new(result),
        });
    }
    if !result.converged {
        return Err(Error::FitNonConvergence { best: Box::new(result) });
    }
    Ok(result)
}
