//! Closed-form cdf of the κ-Erlang law `N x^{n−1} exp_κ(−x)` through the
//! ansatz `P(x) = 1 − [R(x) + Q(x)√(1+κ²x²)] exp_κ(−x)` with polynomial `R`
//! of degree `n` and `Q` of degree `n−1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kappa::{exp_kappa, ln_exp_kappa, Kappa};
use crate::special::factorial;

/// Smallest admissible `|1 − m²κ²|` in the coefficient recursion.
const MIN_DENOMINATOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErlangPolynomials {
    pub n: u32,
    pub kappa: f64,
    /// `c_0..c_n`, with `R(x) = N Σ c_m x^m`.
    pub c: Vec<f64>,
    /// Coefficients of `Q(x)` (normalization included), degree `n−1`.
    pub q: Vec<f64>,
    /// `N_κ = ∏_{m=0}^{n}[1+(2m−n)κ] / (n−1)!`
    pub n_kappa: f64,
}

impl ErlangPolynomials {
    pub fn new(n: u32, kappa: Kappa) -> Result<Self> {
        let k = kappa.value();
        if n == 0 {
            return Err(Error::UnsupportedOrder {
                n,
                constraint: "n≥1".into(),
            });
        }
        let nf = f64::from(n);
        if nf * k >= 1.0 {
            return Err(Error::invalid("n", nf, format!("nκ<1 (κ={k})")));
        }
        let k2 = k * k;
        let denom = |m: u32| 1.0 - f64::from(m * m) * k2;
        for m in 0..=n {
            let d = denom(m);
            if d.abs() < MIN_DENOMINATOR {
                return Err(Error::Conditioning { m, denominator: d });
            }
        }
        let nu = n as usize;
        let mut c = vec![0.0; nu + 1];
        c[nu] = nf * k2 / denom(n);
        if n >= 2 {
            c[nu - 2] = (nf - 1.0) / (denom(n) * denom(n - 2));
            for m in (0..nu.saturating_sub(2)).rev() {
                let mf = m as f64;
                c[m] = (mf + 1.0) * (mf + 2.0) / denom(m as u32) * c[m + 2];
            }
        }
        // pair the factors m and n−m so N shares the denominators 1−j²κ² with c
        let n_kappa = (1..=n).rev().step_by(2).fold(1.0, |acc, j| acc * denom(j)) / factorial(n - 1);
        let mut q = vec![0.0; nu];
        for m in 0..nu - 1 {
            q[m] = n_kappa * (m as f64 + 1.0) * c[m + 1];
        }
        q[nu - 1] = n_kappa / denom(n);
        Ok(ErlangPolynomials {
            n,
            kappa: k,
            c,
            q,
            n_kappa,
        })
    }

    fn kappa(&self) -> Kappa {
        Kappa::new(self.kappa).expect("validated at construction")
    }

    /// Coefficients of `R(x)` with the normalization folded in.
    pub fn r_coeffs(&self) -> Vec<f64> {
        self.c.iter().map(|c| self.n_kappa * c).collect()
    }

    pub fn r(&self, x: f64) -> f64 {
        self.n_kappa * horner(&self.c, x)
    }

    pub fn q_poly(&self, x: f64) -> f64 {
        horner(&self.q, x)
    }

    fn r_prime(&self, x: f64) -> f64 {
        let d: Vec<f64> = self.c.iter().enumerate().skip(1).map(|(m, c)| m as f64 * c).collect();
        self.n_kappa * horner(&d, x)
    }

    fn q_prime(&self, x: f64) -> f64 {
        let d: Vec<f64> = self.q.iter().enumerate().skip(1).map(|(m, c)| m as f64 * c).collect();
        horner(&d, x)
    }

    /// `N x^{n−1} exp_κ(−x)`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if self.n == 1 {
            return self.n_kappa * exp_kappa(-x, self.kappa());
        }
        (self.n_kappa.ln() + f64::from(self.n - 1) * x.ln() + ln_exp_kappa(-x, self.kappa())).exp()
    }

    /// `[R + Q√(1+κ²x²)] exp_κ(−x)`.
    pub fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        let k = self.kappa;
        let ln_e = ln_exp_kappa(-x, self.kappa());
        if x <= 1.0 {
            let s = (k * x).hypot(1.0);
            return (self.r(x) + self.q_poly(x) * s) * ln_e.exp();
        }
        // factor x^n out of both polynomials so huge x cannot overflow
        let inv = 1.0 / x;
        let nn = self.n as usize;
        let r_scaled = self.n_kappa * self.c.iter().enumerate().map(|(m, c)| c * inv.powi((nn - m) as i32)).sum::<f64>();
        let s_over_x = k.hypot(inv);
        let q_scaled = self.q.iter().enumerate().map(|(m, c)| c * inv.powi((nn - 1 - m) as i32)).sum::<f64>();
        (f64::from(self.n) * x.ln() + (r_scaled + s_over_x * q_scaled).ln() + ln_e).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        1.0 - self.survival(x)
    }

    /// Analytic derivative of the ansatz cdf,
    /// `e[(R+Qs)/s − R′ − Q′s − κ²xQ/s]` with `s = √(1+κ²x²)`.
    pub fn ansatz_derivative(&self, x: f64) -> f64 {
        let k = self.kappa;
        let s = (k * x).hypot(1.0);
        let e = exp_kappa(-x, self.kappa());
        let (r, q) = (self.r(x), self.q_poly(x));
        e * ((r + q * s) / s - self.r_prime(x) - self.q_prime(x) * s - k * k * x * q / s)
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}
