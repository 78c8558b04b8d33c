//! κ-Weibull law (Type II): survival `exp_κ(−βx^α)`, hazard
//! `αβx^{α−1}/√(1+κ²β²x^{2α})`, cumulative hazard `asinh(κβx^α)/κ`.

use crate::dist::{check_probability, numeric_mode, ContinuousDistribution, Mode, Support};
use crate::error::{Error, Result};
use crate::kappa::{exp_kappa, ln_exp_kappa_neg_from_ln, ln_survival_moment, Kappa};
use crate::oracle::{self, DerivativeOrder};
use crate::special::{asinh, ln_gamma_ratio};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Type2 {
    alpha: f64,
    beta: f64,
    kappa: Kappa,
}

/// `ln √(1+v²)` from `ln v`.
pub(crate) fn ln_hypot1_from_ln(ln_v: f64) -> f64 {
    if ln_v > 20.0 {
        ln_v
    } else {
        0.5 * (2.0 * ln_v).exp().ln_1p()
    }
}

/// `ln_κ(1/y) = −sinh(κ ln y)/κ` for `0 < y ≤ 1`, from `ln y`.
pub(crate) fn ln_kappa_recip_from_ln(ln_y: f64, kappa: Kappa) -> f64 {
    let k = kappa.value();
    if k == 0.0 {
        -ln_y
    } else {
        -(k * ln_y).sinh() / k
    }
}

impl Type2 {
    pub fn new(alpha: f64, beta: f64, kappa: Kappa) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::invalid("alpha", alpha, "α≠0"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", beta, "β>0"));
        }
        Ok(Type2 { alpha, beta, kappa })
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

    pub(crate) fn ln_u(&self, x: f64) -> f64 {
        self.beta.ln() + self.alpha * x.ln()
    }

    /// `exp_κ(−βx^α)`, the survival for `α > 0` and the cdf for `α < 0`.
    pub(crate) fn kernel(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return if self.alpha > 0.0 { 1.0 } else { 0.0 };
        }
        let u = self.ln_u(x).exp();
        if u.is_finite() {
            exp_kappa(-u, self.kappa)
        } else {
            ln_exp_kappa_neg_from_ln(self.ln_u(x), self.kappa).exp()
        }
    }

    /// `1 − exp_κ(−βx^α)` without cancellation at small arguments.
    pub(crate) fn kernel_complement(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return if self.alpha > 0.0 { 0.0 } else { 1.0 };
        }
        -ln_exp_kappa_neg_from_ln(self.ln_u(x), self.kappa).exp_m1()
    }

    /// `h_κ(x) = |α|βx^{α−1}/√(1+κ²β²x^{2α})`; the hazard itself when `α > 0`.
    pub fn kappa_hazard(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return if self.alpha > 1.0 {
                0.0
            } else if self.alpha == 1.0 {
                self.beta
            } else {
                f64::INFINITY
            };
        }
        let lu = self.ln_u(x);
        let k = self.kappa.value();
        let damp = if k == 0.0 { 0.0 } else { ln_hypot1_from_ln(k.ln() + lu) };
        (self.alpha.abs().ln() + lu - x.ln() - damp).exp()
    }

    /// `H_κ(x) = asinh(κβx^α)/κ`, with `S = e^{−H}` for `α > 0`.
    pub fn cumulative_hazard(&self, x: f64) -> f64 {
        if self.alpha < 0.0 {
            return -self.survival(x).ln();
        }
        if x <= 0.0 {
            return 0.0;
        }
        let k = self.kappa.value();
        let lu = self.ln_u(x);
        let u = lu.exp();
        if k == 0.0 {
            u
        } else if u.is_finite() {
            asinh(k * u) / k
        } else {
            -ln_exp_kappa_neg_from_ln(lu, self.kappa)
        }
    }

    /// `dS/dx + h S`, with `dS/dx` from Richardson-extrapolated central
    /// differences. Vanishes when the closed forms are consistent.
    pub fn rate_residual(&self, x: f64) -> Result<f64> {
        let h = self.hazard(x);
        let step = 0.1 / (h + 1.0 / x);
        let ds = oracle::differentiate(|t| self.survival(t), x, DerivativeOrder::First, step)?;
        Ok(ds.value + h * self.survival(x))
    }

    fn moment_window(&self, m: f64) -> Result<f64> {
        let s = m / self.alpha;
        let k = self.kappa.value();
        if s > -1.0 && s * k < 1.0 {
            Ok(s)
        } else if self.alpha > 0.0 {
            Err(Error::diverges(m, "m<α/κ"))
        } else {
            Err(Error::diverges(m, "m<|α|"))
        }
    }

    /// Closed-form Gini coefficient (α > 0, mean finite: α > κ).
    pub fn gini(&self) -> Result<f64> {
        let (a, k) = (self.alpha, self.kappa.value());
        if a < 0.0 {
            return Err(Error::domain("gini", a, "α>0"));
        }
        if k >= a {
            return Err(Error::diverges(1.0, "m<α/κ"));
        }
        if k == 0.0 {
            return Ok(1.0 - (-std::f64::consts::LN_2 / a).exp());
        }
        let t = 0.5 / a;
        let ln = ((a + k) / (a + 0.5 * k)).ln()
            + ln_gamma_ratio(1.0 / k - t, 1.0 / k + t)
            + ln_gamma_ratio(0.5 / k + t, 0.5 / k - t);
        Ok(-ln.exp_m1())
    }

    /// Lorenz curve of the α = 1 member,
    /// `L(P) = 1 + (1−P)[ln_κ(1−P) − cosh(κ ln(1−P))]`.
    pub fn lorenz(&self, p: f64) -> Result<f64> {
        if self.alpha != 1.0 {
            return Err(Error::domain("lorenz", self.alpha, "α=1"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("lorenz", p, "0≤P≤1"));
        }
        if p == 1.0 {
            return Ok(1.0);
        }
        let y = 1.0 - p;
        let l = (-p).ln_1p();
        let k = self.kappa.value();
        let bracket = if k == 0.0 { l - 1.0 } else { (k * l).sinh() / k - (k * l).cosh() };
        Ok((1.0 + y * bracket).clamp(0.0, 1.0))
    }
}

impl ContinuousDistribution for Type2 {
    fn scale(&self) -> f64 {
        self.beta.powf(-1.0 / self.alpha)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.pdf(x).ln();
        }
        let lu = self.ln_u(x);
        let k = self.kappa.value();
        let damp = if k == 0.0 { 0.0 } else { ln_hypot1_from_ln(k.ln() + lu) };
        self.alpha.abs().ln() + lu - x.ln() - damp + ln_exp_kappa_neg_from_ln(lu, self.kappa)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            if self.alpha > 0.0 {
                return self.kappa_hazard(0.0);
            }
            // α<0: p ~ x^{−1−α/κ} near the origin
            let k = self.kappa.value();
            if k == 0.0 {
                return 0.0;
            }
            let e = -1.0 - self.alpha / k;
            return if e > 0.0 {
                0.0
            } else if e == 0.0 {
                (self.alpha.abs() / k) * (2.0 * k * self.beta).powf(-1.0 / k)
            } else {
                f64::INFINITY
            };
        }
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if self.alpha > 0.0 {
            self.kernel_complement(x)
        } else {
            self.kernel(x)
        }
    }

    fn survival(&self, x: f64) -> f64 {
        if self.alpha > 0.0 {
            self.kernel(x)
        } else {
            self.kernel_complement(x)
        }
    }

    fn hazard(&self, x: f64) -> f64 {
        if self.alpha > 0.0 {
            self.kappa_hazard(x)
        } else {
            self.pdf(x) / self.survival(x)
        }
    }

    /// `x(P) = β^{−1/α} (ln_κ(1/(1−P)))^{1/α}`; for `α < 0` the roles of
    /// `P` and `1−P` swap.
    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p, Support::HalfLine)?;
        if p == 0.0 {
            return Ok(0.0);
        }
        let u = if self.alpha > 0.0 {
            ln_kappa_recip_from_ln((-p).ln_1p(), self.kappa)
        } else {
            ln_kappa_recip_from_ln(p.ln(), self.kappa)
        };
        Ok((u / self.beta).powf(1.0 / self.alpha))
    }

    /// `⟨x^m⟩ = (2κβ)^{−m/α}/(1+κm/α) · Γ(1/2κ−m/2α)/Γ(1/2κ+m/2α) · Γ(1+m/α)`.
    fn raw_moment(&self, m: f64) -> Result<f64> {
        let s = self.moment_window(m)?;
        Ok((-s * self.beta.ln() + ln_survival_moment(s, self.kappa)).exp())
    }

    fn mode(&self) -> Mode {
        let (a, k) = (self.alpha, self.kappa.value());
        if a < 0.0 {
            return numeric_mode(self);
        }
        if a == 1.0 {
            return Mode::MonotoneDecreasing { density_at_origin: self.beta };
        }
        if a < 1.0 {
            return Mode::PoleAtOrigin;
        }
        // u² solves κ²(α²−κ²)v² + [α²+2κ²(α−1)]v − (α−1)² = 0; rationalized root
        let big_a = a * a + 2.0 * k * k * (a - 1.0);
        let z = 4.0 * k * k * (a * a - k * k) * (a - 1.0).powi(2) / (big_a * big_a);
        let v = 2.0 * (a - 1.0).powi(2) / (big_a * (1.0 + (1.0 + z).sqrt()));
        Mode::At {
            x: self.beta.powf(-1.0 / a) * v.powf(0.5 / a),
        }
    }
}
