//! κ-deformed generalized logistic law (Type III) with mixing parameter λ,
//! and the κ-Logistic on the real line.
//!
//! With `e = exp_κ(−βx^α)` the survival is `λe/(1+(λ−1)e)`; λ = 1 is
//! Type II, 0<λ<1 bosonic and λ>1 fermionic kinetics.

use crate::dist::{check_probability, moment_by_quadrature, ContinuousDistribution, Support};
use crate::error::{Error, Result};
use crate::kappa::{exp_kappa, ln_kappa, Kappa};
use crate::oracle::{self, DerivativeOrder, QuadOptions};
use crate::type2::{ln_hypot1_from_ln, Type2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Type3 {
    base: Type2,
    lambda: f64,
}

impl Type3 {
    pub fn new(alpha: f64, beta: f64, lambda: f64, kappa: Kappa) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid("lambda", lambda, "λ>0"));
        }
        Ok(Type3 {
            base: Type2::new(alpha, beta, kappa)?,
            lambda,
        })
    }

    /// Type III₂, the κ-half-logistic (λ = 2, α = 1).
    pub fn half_logistic(beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(1.0, beta, 2.0, kappa)
    }

    pub fn alpha(&self) -> f64 {
        self.base.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.base.beta()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn kappa(&self) -> Kappa {
        self.base.kappa()
    }

    /// Shared with Type II.
    pub fn cumulative_hazard(&self, x: f64) -> f64 {
        self.base.cumulative_hazard(x)
    }

    /// `λe/(1+(λ−1)e)` and `(1−e)/(1+(λ−1)e)` as (upper, lower) pieces.
    fn pieces(&self, x: f64) -> (f64, f64) {
        let e = self.base.kernel(x);
        let one_minus_e = self.base.kernel_complement(x);
        let d = 1.0 + (self.lambda - 1.0) * e;
        (self.lambda * e / d, one_minus_e / d)
    }

    /// Residual of `dS/dx = −h S (1 − ((λ−1)/λ) S)` with `dS/dx` from
    /// finite differences and `h` the Type II hazard.
    pub fn rate_residual(&self, x: f64) -> Result<f64> {
        let h = self.base.kappa_hazard(x);
        let step = 0.1 / (h + 1.0 / x);
        let ds = oracle::differentiate(|t| self.survival(t), x, DerivativeOrder::First, step)?;
        // for α<0 the logistic law governs the cdf instead
        let g = if self.alpha() > 0.0 { self.survival(x) } else { self.cdf(x) };
        Ok(ds.value + h * g * (1.0 - (self.lambda - 1.0) / self.lambda * g))
    }

    fn check_moment(&self, m: f64) -> Result<()> {
        let s = m / self.alpha();
        let k = self.kappa().value();
        if s > -1.0 && s * k < 1.0 {
            Ok(())
        } else if self.alpha() > 0.0 {
            Err(Error::diverges(m, "m<α/κ"))
        } else {
            Err(Error::diverges(m, "m<|α|"))
        }
    }
}

impl ContinuousDistribution for Type3 {
    fn scale(&self) -> f64 {
        self.base.scale()
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.pdf(x).ln();
        }
        let lu = self.base.ln_u(x);
        let k = self.kappa().value();
        let damp = if k == 0.0 { 0.0 } else { ln_hypot1_from_ln(k.ln() + lu) };
        let e = self.base.kernel(x);
        self.lambda.ln() + self.alpha().abs().ln() + lu - x.ln() - damp + e.ln()
            - 2.0 * ((self.lambda - 1.0) * e).ln_1p()
    }

    /// `λ h e/(1+(λ−1)e)²`.
    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            let e = self.base.kernel(0.0);
            let d = 1.0 + (self.lambda - 1.0) * e;
            return self.lambda * self.base.pdf(0.0) / (d * d);
        }
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        let (up, lo) = self.pieces(x);
        if self.alpha() > 0.0 {
            lo
        } else {
            up
        }
    }

    fn survival(&self, x: f64) -> f64 {
        let (up, lo) = self.pieces(x);
        if self.alpha() > 0.0 {
            up
        } else {
            lo
        }
    }

    /// `βx^α = ln_κ(1 + λP/(1−P))`; for `α<0`, `ln_κ(1 + λ(1−P)/P)`.
    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p, Support::HalfLine)?;
        if p == 0.0 {
            return Ok(0.0);
        }
        let ratio = if self.alpha() > 0.0 {
            self.lambda * p / (1.0 - p)
        } else {
            self.lambda * (1.0 - p) / p
        };
        let k = self.kappa();
        let u = if k.value() == 0.0 {
            ratio.ln_1p()
        } else {
            (k.value() * ratio.ln_1p()).sinh() / k.value()
        };
        Ok((u / self.beta()).powf(1.0 / self.alpha()))
    }

    /// No closed form; quadrature after an analytic existence check (the
    /// tail matches Type II up to the factor λ).
    fn raw_moment(&self, m: f64) -> Result<f64> {
        self.check_moment(m)?;
        if m == 0.0 {
            return Ok(1.0);
        }
        moment_by_quadrature(self, m, QuadOptions::default()).map(|r| r.value)
    }
}

/// κ-Logistic on ℝ: `F(x) = 1/(1+exp_κ(−β(x−μ)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaLogistic {
    beta: f64,
    kappa: Kappa,
    location: f64,
}

impl KappaLogistic {
    pub fn new(beta: f64, kappa: Kappa) -> Result<Self> {
        Self::with_location(beta, kappa, 0.0)
    }

    pub fn with_location(beta: f64, kappa: Kappa, location: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", beta, "β>0"));
        }
        if !location.is_finite() {
            return Err(Error::invalid("location", location, "μ finite"));
        }
        Ok(KappaLogistic { beta, kappa, location })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    fn z(&self, x: f64) -> f64 {
        self.beta * (x - self.location)
    }
}

impl ContinuousDistribution for KappaLogistic {
    fn support(&self) -> Support {
        Support::RealLine
    }

    fn scale(&self) -> f64 {
        1.0 / self.beta
    }

    /// `β e / (√(1+κ²z²)(1+e)²)`, `e = exp_κ(−z)`, evaluated on `|z|` (the
    /// density is even in `z`).
    fn pdf(&self, x: f64) -> f64 {
        let z = self.z(x).abs();
        let e = exp_kappa(-z, self.kappa);
        let s = (self.kappa.value() * z).hypot(1.0);
        self.beta * e / (s * (1.0 + e) * (1.0 + e))
    }

    fn cdf(&self, x: f64) -> f64 {
        1.0 / (1.0 + exp_kappa(-self.z(x), self.kappa))
    }

    fn survival(&self, x: f64) -> f64 {
        1.0 / (1.0 + exp_kappa(self.z(x), self.kappa))
    }

    /// `x = μ + ln_κ(P/(1−P))/β`.
    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p, Support::RealLine)?;
        Ok(self.location + ln_kappa(p / (1.0 - p), self.kappa) / self.beta)
    }

    /// Integer orders `m < 1/κ`, from central moments of the standard law.
    fn raw_moment(&self, m: f64) -> Result<f64> {
        if m.fract() != 0.0 || m < 0.0 {
            return Err(Error::domain("raw_moment", m, "integer m≥0 on the real line"));
        }
        if m * self.kappa.value() >= 1.0 {
            return Err(Error::diverges(m, "m<1/κ"));
        }
        let standard = KappaLogistic::new(self.beta, self.kappa)?;
        let n = m as u32;
        let mut total = 0.0;
        let mut binom = 1.0;
        for j in 0..=n {
            if j > 0 {
                binom *= f64::from(n - j + 1) / f64::from(j);
            }
            if j % 2 == 1 {
                continue;
            }
            let central = if j == 0 {
                1.0
            } else {
                2.0 * oracle::integrate_semiaxis(
                    |z| z.powi(j as i32) * standard.pdf(z),
                    standard.scale(),
                    QuadOptions::default(),
                )?
                .value
            };
            total += binom * self.location.powi((n - j) as i32) * central;
        }
        Ok(total)
    }

    fn mode(&self) -> crate::dist::Mode {
        crate::dist::Mode::At { x: self.location }
    }
}
