//! κ-deformed generalized gamma law (Type I),
//! `p(x) = N x^{αν−1} exp_κ(−βx^α)`, with its named special cases, the
//! κ-Erlang closed cdf and the κ-Normal.

mod erlang;
mod normal;
mod table;

pub use erlang::ErlangPolynomials;
pub use normal::{kappa_erf_via_table, KappaNormal};

use table::KappaGammaIntegral;

use crate::dist::{check_probability, ContinuousDistribution, Mode, Support};
use crate::error::{Error, Result};
use crate::kappa::{ln_exp_kappa_neg_from_ln, ln_mellin_kappa, Kappa};
use crate::oracle::{self, OracleResult, QuadOptions};

#[derive(Debug)]
pub struct Type1 {
    alpha: f64,
    beta: f64,
    nu: f64,
    kappa: Kappa,
    /// `ln |N_κ|`
    ln_norm: f64,
    g: KappaGammaIntegral,
}

impl Clone for Type1 {
    fn clone(&self) -> Self {
        Type1::new(self.alpha, self.beta, self.nu, self.kappa).expect("parameters already validated")
    }
}

impl Type1 {
    pub fn new(alpha: f64, beta: f64, nu: f64, kappa: Kappa) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::invalid("alpha", alpha, "α≠0"));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", beta, "β>0"));
        }
        if !(nu > 0.0) || !nu.is_finite() || nu * kappa.value() >= 1.0 {
            return Err(Error::invalid("nu", nu, "0<ν<1/κ"));
        }
        let g = KappaGammaIntegral::new(nu, kappa)?;
        let ln_norm = alpha.abs().ln() + nu * beta.ln() - g.ln_mellin();
        Ok(Type1 {
            alpha,
            beta,
            nu,
            kappa,
            ln_norm,
            g,
        })
    }

    /// Type I₁, the κ-exponential law (α = ν = 1).
    pub fn exponential(beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(1.0, beta, 1.0, kappa)
    }

    /// Type I₂, κ-Erlang of integer order `n` (α = 1, ν = n).
    pub fn erlang(n: u32, beta: f64, kappa: Kappa) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedOrder {
                n,
                constraint: "n≥1".into(),
            });
        }
        if f64::from(n) * kappa.value() >= 1.0 {
            return Err(Error::invalid("n", f64::from(n), "nκ<1"));
        }
        ErlangPolynomials::new(n, kappa)?;
        Self::new(1.0, beta, f64::from(n), kappa)
    }

    /// Type I₃ (α = 1).
    pub fn gamma(nu: f64, beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(1.0, beta, nu, kappa)
    }

    /// Type I₄ with `dof` degrees of freedom (α = 1, ν = dof/2, β = 1/2).
    pub fn chi_squared(dof: u32, kappa: Kappa) -> Result<Self> {
        Self::new(1.0, 0.5, 0.5 * f64::from(dof), kappa)
    }

    /// Type I₅ (α = 2).
    pub fn nakagami(nu: f64, beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(2.0, beta, nu, kappa)
    }

    /// Type I₆ (α = 2, ν = 1).
    pub fn rayleigh(beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(2.0, beta, 1.0, kappa)
    }

    /// Type I₇ with `dof` degrees of freedom (α = 2, ν = dof/2, β = 1/2).
    pub fn chi(dof: u32, kappa: Kappa) -> Result<Self> {
        Self::new(2.0, 0.5, 0.5 * f64::from(dof), kappa)
    }

    /// Type I₈ (α = 2, ν = 3/2).
    pub fn maxwell(beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(2.0, beta, 1.5, kappa)
    }

    /// Type I₉ (α = 2, ν = 1/2).
    pub fn half_normal(beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(2.0, beta, 0.5, kappa)
    }

    /// Type I₁₀ (ν = 1).
    pub fn weibull(alpha: f64, beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(alpha, beta, 1.0, kappa)
    }

    /// Type I₁₁ (ν = 1/α).
    pub fn stretched_exponential(alpha: f64, beta: f64, kappa: Kappa) -> Result<Self> {
        Self::new(alpha, beta, 1.0 / alpha, kappa)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    /// `|N_κ| = |α| β^ν / M_κ(ν)`.
    pub fn normalization(&self) -> f64 {
        self.ln_norm.exp()
    }

    /// Closed polynomials when `α = 1` and `ν` is an integer.
    pub fn erlang_polynomials(&self) -> Option<ErlangPolynomials> {
        if self.alpha == 1.0 && self.nu.fract() == 0.0 {
            ErlangPolynomials::new(self.nu as u32, self.kappa).ok()
        } else {
            None
        }
    }

    fn ln_u(&self, x: f64) -> f64 {
        self.beta.ln() + self.alpha * x.ln()
    }

    /// Pareto exponent `b` of the density tail `p ∝ x^{−b}`, `b = 1+α/κ−αν`.
    /// For `α < 0` the power law sits at the origin instead.
    pub fn tail_exponent(&self) -> Result<f64> {
        let k = self.kappa.value();
        if k == 0.0 {
            return Err(Error::NoPowerLawTail);
        }
        Ok(1.0 + self.alpha / k - self.alpha * self.nu)
    }

    /// Prefactor `(2κβ)^{−1/κ} N_κ` of the upper power-law asymptote.
    pub fn tail_prefactor(&self) -> Result<f64> {
        let k = self.kappa.value();
        if k == 0.0 {
            return Err(Error::NoPowerLawTail);
        }
        Ok((self.ln_norm - (2.0 * k * self.beta).ln() / k).exp())
    }

    /// The cdf as a direct quadrature of the density, with its error
    /// estimate. Independent of the tabulated path used by [`Self::cdf`].
    pub fn cdf_by_quadrature(&self, x: f64, opts: QuadOptions) -> Result<OracleResult> {
        oracle::integrate_from_zero(|t| self.pdf(t), x, opts)
    }

    fn check_moment(&self, m: f64) -> Result<f64> {
        let r = self.nu + m / self.alpha;
        let k = self.kappa.value();
        if r > 0.0 && r * k < 1.0 {
            Ok(r)
        } else {
            Err(Error::diverges(m, "0<ν+m/α<1/κ"))
        }
    }
}

impl ContinuousDistribution for Type1 {
    fn scale(&self) -> f64 {
        self.beta.powf(-1.0 / self.alpha)
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        if x == 0.0 {
            return self.pdf(0.0).ln();
        }
        let lx = x.ln();
        self.ln_norm + (self.alpha * self.nu - 1.0) * lx + ln_exp_kappa_neg_from_ln(self.ln_u(x), self.kappa)
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            if self.alpha < 0.0 {
                return match self.mode() {
                    Mode::PoleAtOrigin => f64::INFINITY,
                    Mode::MonotoneDecreasing { density_at_origin } => density_at_origin,
                    Mode::At { .. } => 0.0,
                };
            }
            let e = self.alpha * self.nu - 1.0;
            return if e > 0.0 {
                0.0
            } else if e == 0.0 {
                self.normalization()
            } else {
                f64::INFINITY
            };
        }
        self.ln_pdf(x).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (lo, up) = self.g.both(self.ln_u(x).exp());
        if self.alpha > 0.0 {
            lo
        } else {
            up
        }
    }

    fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        let (lo, up) = self.g.both(self.ln_u(x).exp());
        if self.alpha > 0.0 {
            up
        } else {
            lo
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p, Support::HalfLine)?;
        if p == 0.0 {
            return Ok(0.0);
        }
        // for α<0 the cdf is the upper incomplete integral of u = βx^α
        let lower_side = (p <= 0.5) == (self.alpha > 0.0);
        let target = if p <= 0.5 { p } else { 1.0 - p };
        let u = self.g.inverse(target, !lower_side)?;
        Ok((u / self.beta).powf(1.0 / self.alpha))
    }

    fn raw_moment(&self, m: f64) -> Result<f64> {
        let r = self.check_moment(m)?;
        if m == 0.0 {
            return Ok(1.0);
        }
        let ln = -m / self.alpha * self.beta.ln() + ln_mellin_kappa(r, self.kappa)? - self.g.ln_mellin();
        Ok(ln.exp())
    }

    /// Interior mode at `x = β^{−1/α} c^{1/α} (1−κ²c²)^{−1/(2α)}`, `c = ν − 1/α`,
    /// whenever `0 < κc < 1`.
    fn mode(&self) -> Mode {
        let k = self.kappa.value();
        let c = self.nu - 1.0 / self.alpha;
        let interior = c > 0.0 && k * c < 1.0;
        if interior {
            let a = self.alpha;
            let x = self.beta.powf(-1.0 / a) * c.powf(1.0 / a) * (1.0 - k * k * c * c).powf(-0.5 / a);
            return Mode::At { x };
        }
        if self.alpha > 0.0 {
            if c == 0.0 {
                Mode::MonotoneDecreasing {
                    density_at_origin: self.normalization(),
                }
            } else {
                Mode::PoleAtOrigin
            }
        } else if k * c == 1.0 {
            Mode::MonotoneDecreasing {
                density_at_origin: self.tail_prefactor().unwrap_or(f64::NAN),
            }
        } else {
            Mode::PoleAtOrigin
        }
    }
}
