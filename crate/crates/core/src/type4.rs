//! Type IV law, `P(x) = (2κβ)^{1/κ} x^{α/κ} exp_κ(−βx^α)`. It has no
//! classical counterpart: both cdf and density vanish as κ → 0.
//!
//! With `y = κβx^α` and `t = √(1+y²)+y` the cdf is `(2y/t)^{1/κ}`,
//! which is how it is evaluated here.

use statrs::function::beta::ln_beta;

use crate::dist::{check_probability, ContinuousDistribution, Support};
use crate::error::{Error, Result};
use crate::kappa::Kappa;
use crate::special::{asinh, ln_gamma, ln_gamma_ratio};
use crate::type2::ln_hypot1_from_ln;

/// Smallest κ accepted; below it the law is a point mass escaping to ∞.
pub const MIN_KAPPA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Type4 {
    alpha: f64,
    beta: f64,
    kappa: Kappa,
}

impl Type4 {
    pub fn new(alpha: f64, beta: f64, kappa: Kappa) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::invalid("alpha", alpha, "α>0"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", beta, "β>0"));
        }
        if kappa.value() < MIN_KAPPA {
            return Err(Error::DegenerateFamily {
                kappa: kappa.value(),
                min_kappa: MIN_KAPPA,
            });
        }
        Ok(Type4 { alpha, beta, kappa })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    fn ln_y(&self, x: f64) -> f64 {
        self.kappa.value().ln() + self.beta.ln() + self.alpha * x.ln()
    }

    /// `ln P(x)`.
    fn ln_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let k = self.kappa.value();
        let ly = self.ln_y(x);
        let y = ly.exp();
        if ly < 0.0 {
            // 1 − w = 2y/t is far from 1
            (std::f64::consts::LN_2 + ly - asinh(y)) / k
        } else {
            let ln_t = if y.is_finite() { asinh(y) } else { ly + std::f64::consts::LN_2 };
            (-(-2.0 * ln_t).exp()).ln_1p() / k
        }
    }

    /// Alternative evaluation straight from `(2κβ)^{1/κ} x^{α/κ} exp_κ(−βx^α)`.
    pub fn cdf_literal(&self, x: f64) -> f64 {
        let k = self.kappa.value();
        let u = self.beta * x.powf(self.alpha);
        ((2.0 * k * self.beta).ln() / k + self.alpha / k * x.ln() - asinh(k * u) / k).exp()
    }

    /// `⟨x^m⟩ = (1/κ)(2κβ)^{−m/α} B(1−m/2α, 1/κ+m/α)`; independent of the
    /// Γ-ratio form used by `raw_moment`.
    pub fn raw_moment_beta_route(&self, m: f64) -> Result<f64> {
        self.check_moment(m)?;
        let k = self.kappa.value();
        let r = m / self.alpha;
        Ok((-k.ln() - r * (2.0 * k * self.beta).ln() + ln_beta(1.0 - 0.5 * r, 1.0 / k + r)).exp())
    }

    fn check_moment(&self, m: f64) -> Result<()> {
        if m < 2.0 * self.alpha && 1.0 / self.kappa.value() + m / self.alpha > 0.0 {
            Ok(())
        } else {
            Err(Error::diverges(m, "m<2α"))
        }
    }

    /// Upper-tail law `1 − P ≈ x^{−2α}/(4κ³β²)`.
    pub fn upper_tail_asymptote(&self, x: f64) -> f64 {
        let k = self.kappa.value();
        x.powf(-2.0 * self.alpha) / (4.0 * k * k * k * self.beta * self.beta)
    }

    /// Lower-tail law `P ≈ (2κβ)^{1/κ} x^{α/κ}`.
    pub fn lower_tail_asymptote(&self, x: f64) -> f64 {
        let k = self.kappa.value();
        ((2.0 * k * self.beta).ln() / k + self.alpha / k * x.ln()).exp()
    }
}

impl ContinuousDistribution for Type4 {
    fn scale(&self) -> f64 {
        self.beta.powf(-1.0 / self.alpha)
    }

    /// `ln p = ln P + ln(α/κx) − asinh(y) − ln√(1+y²)`.
    fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let ly = self.ln_y(x);
        let y = ly.exp();
        let ln_t = if y.is_finite() { asinh(y) } else { ly + std::f64::consts::LN_2 };
        self.ln_cdf(x) + (self.alpha / self.kappa.value()).ln() - x.ln() - ln_t - ln_hypot1_from_ln(ly)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.ln_cdf(x).exp()
    }

    fn survival(&self, x: f64) -> f64 {
        -self.ln_cdf(x).exp_m1()
    }

    /// Closed inverse: `P^κ = 1 − w`, so `y = P^κ / (2√(1−P^κ))`.
    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p, Support::HalfLine)?;
        if p == 0.0 {
            return Ok(0.0);
        }
        let k = self.kappa.value();
        let pk = (k * p.ln()).exp();
        let w = -(k * p.ln()).exp_m1();
        let y = pk / (2.0 * w.sqrt());
        Ok((y / (k * self.beta)).powf(1.0 / self.alpha))
    }

    /// `⟨x^m⟩ = (2κβ)^{−m/α}/(1+κm/2α) · Γ(1/κ+m/α)Γ(1−m/2α)/Γ(1/κ+m/2α)`.
    fn raw_moment(&self, m: f64) -> Result<f64> {
        self.check_moment(m)?;
        let k = self.kappa.value();
        let r = m / self.alpha;
        let ln = -r * (2.0 * k * self.beta).ln() - (0.5 * k * r).ln_1p()
            + ln_gamma_ratio(1.0 / k + r, 1.0 / k + 0.5 * r)
            + ln_gamma(1.0 - 0.5 * r);
        Ok(ln.exp())
    }
}
