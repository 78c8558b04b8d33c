use super::Type1;
use crate::dist::{check_probability, ContinuousDistribution, Mode, Support};
use crate::error::{Error, Result};
use crate::kappa::{exp_kappa, kappa_erf_normalization, Kappa};
use crate::special::ln_gamma_ratio;

/// κ-Normal on ℝ, `f(x) = C_κ √(β/π) exp_κ(−βx²)`: the symmetrized
/// κ-half-normal.
#[derive(Debug, Clone)]
pub struct KappaNormal {
    beta: f64,
    kappa: Kappa,
    half: Type1,
    prefactor: f64,
}

impl KappaNormal {
    pub fn new(beta: f64, kappa: Kappa) -> Result<Self> {
        let half = Type1::half_normal(beta, kappa)?;
        let prefactor = kappa_erf_normalization(kappa) * (beta / std::f64::consts::PI).sqrt();
        Ok(KappaNormal {
            beta,
            kappa,
            half,
            prefactor,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    pub fn half_line(&self) -> &Type1 {
        &self.half
    }

    /// `σ² = (1/β)((2+κ)/(2−κ))(4κ/(4−9κ²))[Γ(1/2κ+1/4)/Γ(1/2κ−1/4)]²`,
    /// finite for `κ < 2/3`.
    pub fn variance(&self) -> Result<f64> {
        let k = self.kappa.value();
        if k == 0.0 {
            return Ok(0.5 / self.beta);
        }
        if 3.0 * k >= 2.0 {
            return Err(Error::VarianceDiverges {
                constraint: "κ<2/3".into(),
            });
        }
        let h = 0.5 / k;
        let ln = ((2.0 + k) / (2.0 - k)).ln() + (4.0 * k / (4.0 - 9.0 * k * k)).ln() + 2.0 * ln_gamma_ratio(h + 0.25, h - 0.25);
        Ok(ln.exp() / self.beta)
    }
}

impl ContinuousDistribution for KappaNormal {
    fn support(&self) -> Support {
        Support::RealLine
    }

    fn scale(&self) -> f64 {
        self.beta.powf(-0.5)
    }

    fn pdf(&self, x: f64) -> f64 {
        self.prefactor * exp_kappa(-self.beta * x * x, self.kappa)
    }

    /// `½(1 + erf_κ(√β x))`.
    fn cdf(&self, x: f64) -> f64 {
        if x >= 0.0 {
            0.5 + 0.5 * self.half.cdf(x)
        } else {
            0.5 * self.half.survival(-x)
        }
    }

    fn survival(&self, x: f64) -> f64 {
        self.cdf(-x)
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p, Support::RealLine)?;
        if p >= 0.5 {
            self.half.quantile(2.0 * p - 1.0)
        } else {
            self.half.quantile(1.0 - 2.0 * p).map(|x| -x)
        }
    }

    fn raw_moment(&self, m: f64) -> Result<f64> {
        if m.fract() != 0.0 || m < 0.0 {
            return Err(Error::domain("raw_moment", m, "integer m≥0 on the real line"));
        }
        let even = self.half.raw_moment(m)?;
        Ok(if (m as i64) % 2 == 0 { even } else { 0.0 })
    }

    fn mode(&self) -> Mode {
        Mode::At { x: 0.0 }
    }
}

/// κ-error function evaluated through the κ-Normal half-line cdf; a second,
/// independent route to [`crate::kappa::kappa_erf`].
pub fn kappa_erf_via_table(x: f64, kappa: Kappa) -> Result<f64> {
    let half = Type1::half_normal(1.0, kappa)?;
    Ok(half.cdf(x.abs()).copysign(x))
}
