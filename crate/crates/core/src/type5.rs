//! Type V: laws generated by successive derivatives of the κ-exponential
//! density `p(x) = (1−κ²)β exp_κ(−βx)`,
//! `P(n,x) = 1 − p^{(n−1)}(x)/p^{(n−1)}(0)`, for orders n = 1, 2, 3.

use crate::dist::{numeric_mode, ContinuousDistribution, Mode};
use crate::error::{Error, Result};
use crate::kappa::{ln_exp_kappa, Kappa};
use crate::type2::Type2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Type5 {
    n: u32,
    beta: f64,
    kappa: Kappa,
}

impl Type5 {
    pub fn new(n: u32, beta: f64, kappa: Kappa) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::UnsupportedOrder {
                n,
                constraint: "n∈{1,2,3}".into(),
            });
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid("beta", beta, "β>0"));
        }
        Ok(Type5 { n, beta, kappa })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    /// `p^{(j)}(0)` of the generatrix, exact in κ and β.
    pub fn generatrix_derivative_at_origin(&self, j: u32) -> f64 {
        let k2 = self.kappa.value().powi(2);
        let b = self.beta;
        match j {
            0 => (1.0 - k2) * b,
            1 => -(1.0 - k2) * b * b,
            2 => (1.0 - k2) * b.powi(3),
            3 => -(1.0 - k2).powi(2) * b.powi(4),
            _ => unreachable!("orders above three are rejected at construction"),
        }
    }

    /// `p^{(j)}(x)` of the generatrix for `j ≤ 3`.
    pub fn generatrix_derivative(&self, j: u32, x: f64) -> f64 {
        let k = self.kappa.value();
        let (k2, b) = (k * k, self.beta);
        let e = (ln_exp_kappa(-b * x, self.kappa)).exp();
        let s = (k * b * x).hypot(1.0);
        let bx = b * x;
        match j {
            0 => (1.0 - k2) * b * e,
            1 => -(1.0 - k2) * b * b * e / s,
            2 => (1.0 - k2) * b.powi(3) * e * (1.0 / (s * s) + k2 * bx / s.powi(3)),
            3 => {
                -(1.0 - k2) * b.powi(4) * e * ((1.0 - k2) / s.powi(3) + 3.0 * k2 * bx / s.powi(4) + 3.0 * k2 * k2 * bx * bx / s.powi(5))
            }
            _ => panic!("generatrix derivative of order {j} is not available"),
        }
    }

    fn ln_survival(&self, x: f64) -> f64 {
        let k = self.kappa.value();
        let b = self.beta;
        let ln_e = ln_exp_kappa(-b * x, self.kappa);
        let s = (k * b * x).hypot(1.0);
        match self.n {
            1 => ln_e,
            2 => ln_e - s.ln(),
            _ => ln_e - 2.0 * s.ln() + (k * k * b * x / s).ln_1p(),
        }
    }

    /// Exponent of the density's power-law tail, `−n − 1/κ`.
    pub fn tail_exponent(&self) -> Result<f64> {
        let k = self.kappa.value();
        if k == 0.0 {
            return Err(Error::NoPowerLawTail);
        }
        Ok(-f64::from(self.n) - 1.0 / k)
    }

    /// `∫x^m p(n,x)dx = (−1)^m m! p^{(n−1−m)}(0)/p^{(n−1)}(0)` for `m ≤ n−1`.
    pub fn moment_identity(&self, m: u32) -> Result<f64> {
        if m + 1 > self.n {
            return Err(Error::domain("moment_identity", f64::from(m), "m≤n−1"));
        }
        let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        let fact: f64 = (1..=m).map(f64::from).product();
        Ok(sign * fact * self.generatrix_derivative_at_origin(self.n - 1 - m)
            / self.generatrix_derivative_at_origin(self.n - 1))
    }
}

impl ContinuousDistribution for Type5 {
    fn scale(&self) -> f64 {
        1.0 / self.beta
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let k = self.kappa.value();
        let (k2, b) = (k * k, self.beta);
        let e = (ln_exp_kappa(-b * x, self.kappa)).exp();
        let s = (k * b * x).hypot(1.0);
        let bx = b * x;
        match self.n {
            1 => b * e / s,
            2 => b * e * (1.0 / (s * s) + k2 * bx / s.powi(3)),
            _ => b * e * ((1.0 - k2) / s.powi(3) + 3.0 * k2 * bx / s.powi(4) + 3.0 * k2 * k2 * bx * bx / s.powi(5)),
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        -self.ln_survival(x).exp_m1()
    }

    fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        self.ln_survival(x).exp()
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        if self.n == 1 {
            return Type2::new(1.0, self.beta, self.kappa)?.quantile(p);
        }
        crate::dist::invert_cdf(self, p)
    }

    /// Integer `m ≤ n−1` through the derivative identity; larger orders
    /// through `⟨x^m⟩_n = −m p^{(n−2)}(0)/p^{(n−1)}(0) ⟨x^{m−1}⟩_{n−1}` down to
    /// the Type II₁ closed form. Finite for `m < n−1+1/κ`.
    fn raw_moment(&self, m: f64) -> Result<f64> {
        if m < 0.0 {
            return Err(Error::domain("raw_moment", m, "m≥0"));
        }
        let n = f64::from(self.n);
        let k = self.kappa.value();
        if (m - n + 1.0) * k >= 1.0 {
            return Err(Error::diverges(m, "m<n−1+1/κ"));
        }
        if m.fract() == 0.0 && m <= n - 1.0 {
            return self.moment_identity(m as u32);
        }
        if m <= n - 2.0 {
            // only non-integer 0<m<1 at n=3 lands here
            return crate::dist::moment_by_quadrature(self, m, crate::oracle::QuadOptions::default()).map(|r| r.value);
        }
        let mut factor = 1.0;
        let mut order = m;
        for level in (2..=self.n).rev() {
            let d = Type5::new(level, self.beta, self.kappa)?;
            factor *= -order * d.generatrix_derivative_at_origin(level - 2) / d.generatrix_derivative_at_origin(level - 1);
            order -= 1.0;
        }
        Ok(factor * Type2::new(1.0, self.beta, self.kappa)?.raw_moment(order)?)
    }

    fn mode(&self) -> Mode {
        if self.n == 1 {
            return Mode::MonotoneDecreasing { density_at_origin: self.beta };
        }
        numeric_mode(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::moment_by_quadrature;
    use crate::oracle::{self, DerivativeOrder, QuadOptions};

    fn k(v: f64) -> Kappa {
        Kappa::new(v).unwrap()
    }

    #[test]
    fn order_window() {
        assert!(matches!(Type5::new(4, 1.0, k(0.2)), Err(Error::UnsupportedOrder { .. })));
        assert!(Type5::new(0, 1.0, k(0.2)).is_err());
    }

    #[test]
    fn printed_means_and_variances() {
        for &kv in &[0.1, 0.3, 0.5] {
            let beta = 1.7;
            let d2 = Type5::new(2, beta, k(kv)).unwrap();
            let s2 = d2.descriptive_stats();
            assert!((s2.mean.unwrap() - 1.0 / beta).abs() < 1e-14);
            let v2 = (1.0 + kv * kv) / ((1.0 - kv * kv) * beta * beta);
            assert!((s2.variance.unwrap() - v2).abs() < 1e-13);
            let q = moment_by_quadrature(&d2, 2.0, QuadOptions::default()).unwrap().value - 1.0 / (beta * beta);
            assert!(((q - v2) / v2).abs() < 1e-8);

            let d3 = Type5::new(3, beta, k(kv)).unwrap();
            let s3 = d3.descriptive_stats();
            assert!((s3.mean.unwrap() - 1.0 / beta).abs() < 1e-14);
            assert!((s3.variance.unwrap() - 1.0 / (beta * beta)).abs() < 1e-13);
        }
    }

    #[test]
    fn recursion_matches_quadrature() {
        let d = Type5::new(3, 1.2, k(0.3)).unwrap();
        for &m in &[2.5, 3.0, 3.8] {
            let a = d.raw_moment(m).unwrap();
            let q = moment_by_quadrature(&d, m, QuadOptions::default()).unwrap().value;
            assert!(((a - q) / a).abs() < 1e-8, "m={m}");
        }
        assert!(matches!(d.raw_moment(5.4), Err(Error::MomentDiverges { .. })));
    }

    #[test]
    fn survival_equals_generatrix_ratio() {
        for n in 1..=3 {
            let d = Type5::new(n, 0.8, k(0.45)).unwrap();
            for &x in &[0.0, 0.4, 2.0, 30.0] {
                let ratio = d.generatrix_derivative(n - 1, x) / d.generatrix_derivative_at_origin(n - 1);
                assert!((d.survival(x) - ratio).abs() < 1e-14 * ratio.max(1e-300) + 1e-300);
                let pdf = -d.generatrix_derivative(n, x) / d.generatrix_derivative_at_origin(n - 1);
                assert!(((d.pdf(x) - pdf) / pdf).abs() < 1e-13);
            }
            assert!((d.generatrix_derivative(n - 1, 0.0) - d.generatrix_derivative_at_origin(n - 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn order_two_pdf_by_finite_differences() {
        let d = Type5::new(2, 1.0, k(0.4)).unwrap();
        for &x in &[0.2, 1.0, 3.0, 10.0] {
            let fd = oracle::differentiate(|t| d.cdf(t), x, DerivativeOrder::First, 0.1 * x).unwrap().value;
            assert!((fd - d.pdf(x)).abs() < 1e-7 * d.pdf(x).max(1.0));
        }
    }

    #[test]
    fn first_order_is_type_two_one() {
        let d = Type5::new(1, 1.4, k(0.3)).unwrap();
        let t = Type2::new(1.0, 1.4, k(0.3)).unwrap();
        for i in 0..25 {
            let x = 0.13 * f64::from(i) + 0.01;
            assert!((d.pdf(x) - t.pdf(x)).abs() < 1e-12 * t.pdf(x));
            assert!((d.cdf(x) - t.cdf(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_slope() {
        let d = Type5::new(2, 1.0, k(0.5)).unwrap();
        assert_eq!(d.tail_exponent().unwrap(), -4.0);
        assert_eq!(Type5::new(3, 1.0, k(0.25)).unwrap().tail_exponent().unwrap(), -7.0);
        let (lo, hi) = (1e2 / 0.5, 1e4 / 0.5);
        let slope = (d.pdf(hi).ln() - d.pdf(lo).ln()) / (hi.ln() - lo.ln());
        assert!((slope + 4.0).abs() < 0.04);
    }

    #[test]
    fn classical_limit_is_exponential() {
        for n in 1..=3 {
            let d = Type5::new(n, 2.0, k(1e-7)).unwrap();
            for &x in &[0.1, 1.0, 3.0] {
                assert!((d.cdf(x) - (1.0 - (-2.0 * x).exp())).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn third_order_mode_moves_inward_for_large_kappa() {
        assert!(matches!(Type5::new(3, 1.0, k(0.3)).unwrap().mode(), Mode::MonotoneDecreasing { .. }));
        assert!(matches!(Type5::new(3, 1.0, k(0.8)).unwrap().mode(), Mode::At { .. }));
    }
}
