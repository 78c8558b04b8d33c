//! κ-deformed exponential and logarithm, their power-law asymptotes, the
//! Mellin transform of `exp_κ(−x)` and the κ-error function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{self, QuadOptions};
use crate::special::{asinh, ln_gamma, ln_gamma_ratio};

/// Below this κ the deformed functions are evaluated through the
/// `asinh`/`sinh` representation instead of the power form.
pub const KAPPA_SWITCH: f64 = 1e-4;

/// Deformation parameter, `0 ≤ κ < 1`. `κ = 0` is the exact classical limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Kappa(f64);

impl Kappa {
    pub const CLASSICAL: Kappa = Kappa(0.0);

    pub fn new(kappa: f64) -> Result<Self> {
        if (0.0..1.0).contains(&kappa) {
            Ok(Kappa(kappa))
        } else {
            Err(Error::invalid("kappa", kappa, "0≤κ<1"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when classical-limit evaluation paths are taken.
    pub fn is_classical(self) -> bool {
        self.0 < KAPPA_SWITCH
    }

    /// `1/κ`, infinite at `κ = 0`.
    pub fn inverse(self) -> f64 {
        1.0 / self.0
    }
}

impl TryFrom<f64> for Kappa {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Kappa::new(value)
    }
}

impl From<Kappa> for f64 {
    fn from(k: Kappa) -> f64 {
        k.0
    }
}

/// `ln exp_κ(x) = asinh(κx)/κ`.
pub fn ln_exp_kappa(x: f64, kappa: Kappa) -> f64 {
    let k = kappa.0;
    if k == 0.0 {
        x
    } else {
        asinh(k * x) / k
    }
}

/// `ln exp_κ(−u)` given `ln u`, finite even when `u` itself overflows.
pub(crate) fn ln_exp_kappa_neg_from_ln(ln_u: f64, kappa: Kappa) -> f64 {
    let k = kappa.0;
    if k == 0.0 {
        return -ln_u.exp();
    }
    let z = k.ln() + ln_u;
    if z > 30.0 {
        -(z + std::f64::consts::LN_2) / k
    } else {
        -z.exp().asinh() / k
    }
}

/// `exp_κ(x) = (√(1+κ²x²)+κx)^{1/κ}`, evaluated as `exp(asinh(κx)/κ)`,
/// which keeps full relative precision for small κ.
pub fn exp_kappa(x: f64, kappa: Kappa) -> f64 {
    ln_exp_kappa(x, kappa).exp()
}

/// The defining power form `(√(1+κ²x²)+κx)^{1/κ}`, with negative arguments
/// through `1/exp_κ(−x)`. Loses about `ε/κ` relative precision.
pub fn exp_kappa_power_form(x: f64, kappa: Kappa) -> f64 {
    let k = kappa.0;
    if k == 0.0 {
        return x.exp();
    }
    let y = (k * x).abs();
    let base = if y > 1e150 { 2.0 * y } else { y.hypot(1.0) + y };
    let up = base.powf(1.0 / k);
    if x >= 0.0 {
        up
    } else {
        1.0 / up
    }
}

pub fn checked_exp_kappa(x: f64, kappa: Kappa) -> Result<f64> {
    if x.is_finite() {
        Ok(exp_kappa(x, kappa))
    } else {
        Err(Error::domain("exp_kappa", x, "x finite"))
    }
}

/// `ln_κ(t) = (t^κ − t^{−κ})/(2κ)`, evaluated as `sinh(κ ln t)/κ`.
pub fn ln_kappa(t: f64, kappa: Kappa) -> f64 {
    let k = kappa.0;
    let l = t.ln();
    if k == 0.0 {
        l
    } else {
        (k * l).sinh() / k
    }
}

pub fn checked_ln_kappa(t: f64, kappa: Kappa) -> Result<f64> {
    if t > 0.0 && !t.is_nan() {
        Ok(ln_kappa(t, kappa))
    } else {
        Err(Error::domain("ln_kappa", t, "t>0"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSign {
    Positive,
    Negative,
}

/// `exp_κ(x) ≈ prefactor · |x|^exponent` as `x → ±∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailAsymptote {
    pub exponent: f64,
    pub prefactor: f64,
}

impl TailAsymptote {
    pub fn eval(&self, x: f64) -> f64 {
        self.prefactor * x.abs().powf(self.exponent)
    }
}

pub fn tail_asymptote(kappa: Kappa, sign: TailSign) -> Result<TailAsymptote> {
    let k = kappa.0;
    if k == 0.0 {
        return Err(Error::NoPowerLawTail);
    }
    let s = match sign {
        TailSign::Positive => 1.0,
        TailSign::Negative => -1.0,
    };
    Ok(TailAsymptote {
        exponent: s / k,
        prefactor: (s * (2.0 * k).ln() / k).exp(),
    })
}

/// `ln M_κ(r)`, with `M_κ(r) = ∫₀^∞ x^{r−1} exp_κ(−x) dx`.
pub fn ln_mellin_kappa(r: f64, kappa: Kappa) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain("mellin_kappa", r, "r>0"));
    }
    let k = kappa.0;
    if k == 0.0 {
        return Ok(ln_gamma(r));
    }
    if r * k >= 1.0 {
        return Err(Error::MellinDiverges { r, bound: 1.0 / k });
    }
    let h = 0.5 / k;
    Ok(-r * (2.0 * k).ln() - (k * r).ln_1p() + ln_gamma_ratio(h - 0.5 * r, h + 0.5 * r) + ln_gamma(r))
}

/// `M_κ(r) = (2κ)^{−r}/(1+κr) · Γ(1/2κ−r/2)/Γ(1/2κ+r/2) · Γ(r)` for `0<r<1/κ`.
pub fn mellin_kappa(r: f64, kappa: Kappa) -> Result<f64> {
    ln_mellin_kappa(r, kappa).map(f64::exp)
}

/// `ln E[W^s]` for `W` with survival `exp_κ(−w)`: equal to `ln(s·M_κ(s))`
/// for `s > 0`, extended to `−1 < s < 1/κ`.
pub(crate) fn ln_survival_moment(s: f64, kappa: Kappa) -> f64 {
    let k = kappa.0;
    if s == 0.0 {
        return 0.0;
    }
    if k == 0.0 {
        return ln_gamma(1.0 + s);
    }
    let h = 0.5 / k;
    -s * (2.0 * k).ln() - (k * s).ln_1p() + ln_gamma_ratio(h - 0.5 * s, h + 0.5 * s) + ln_gamma(1.0 + s)
}

/// `C_κ = (1+κ/2)√(2κ) Γ(1/2κ+1/4)/Γ(1/2κ−1/4)`, tending to 1 as κ → 0.
pub fn kappa_erf_normalization(kappa: Kappa) -> f64 {
    let k = kappa.0;
    if k == 0.0 {
        return 1.0;
    }
    let h = 0.5 / k;
    ((0.5 * k).ln_1p() + 0.5 * (2.0 * k).ln() + ln_gamma_ratio(h + 0.25, h - 0.25)).exp()
}

/// `erf_κ(x) = C_κ (2/√π) ∫₀^x exp_κ(−t²) dt`.
pub fn kappa_erf(x: f64, kappa: Kappa) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("kappa_erf", x, "x finite"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if kappa.0 == 0.0 {
        return Ok(statrs::function::gamma::gamma_lr(0.5, x * x).copysign(x));
    }
    let ax = x.abs();
    if ax.is_infinite() {
        return Ok(x.signum());
    }
    let scale = kappa_erf_normalization(kappa) * 2.0 / std::f64::consts::PI.sqrt();
    let integrand = |t: f64| exp_kappa(-t * t, kappa);
    let opts = QuadOptions::default().with_rel_tol(1e-13);
    let v = if ax <= 2.0 {
        scale * oracle::integrate(integrand, 0.0, ax, opts)?.value
    } else {
        1.0 - scale * oracle::integrate_to_infinity(integrand, ax, opts)?.value
    };
    Ok(v.copysign(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(v: f64) -> Kappa {
        Kappa::new(v).unwrap()
    }

    #[test]
    fn construction_window() {
        assert!(Kappa::new(0.0).is_ok());
        assert!(Kappa::new(0.999).is_ok());
        assert!(Kappa::new(1.0).is_err());
        assert!(Kappa::new(-0.1).is_err());
        assert!(Kappa::new(f64::NAN).is_err());
        assert!(k(5e-5).is_classical());
        assert!(!k(0.3).is_classical());
    }

    #[test]
    fn reference_values() {
        assert_eq!(exp_kappa(0.0, k(0.7)), 1.0);
        assert!((exp_kappa(1.0, k(0.5)) - 2.618033988749895).abs() < 1e-14);
        assert!((exp_kappa(-1.0, k(0.5)) - 0.3819660112501051).abs() < 1e-15);
        assert_eq!(ln_kappa(1.0, k(0.4)), 0.0);
        assert!((ln_kappa(2.0, k(0.5)) - (2f64.sqrt() - 0.5f64.sqrt())).abs() < 1e-15);
        assert!((ln_kappa(exp_kappa(3.7, k(0.25)), k(0.25)) - 3.7).abs() < 1e-13);
    }

    #[test]
    fn non_finite_and_non_positive_arguments_are_rejected() {
        assert!(checked_exp_kappa(f64::INFINITY, k(0.3)).is_err());
        assert!(checked_exp_kappa(f64::NAN, k(0.3)).is_err());
        assert!(checked_ln_kappa(0.0, k(0.3)).is_err());
        assert!(checked_ln_kappa(-1.0, k(0.3)).is_err());
    }

    #[test]
    fn extreme_arguments_stay_finite_or_saturate() {
        assert_eq!(exp_kappa(-1e300, k(0.5)), 0.0);
        assert!(exp_kappa(1e300, k(0.9)).is_infinite());
        let v = exp_kappa(-1e6, k(0.5));
        assert!(v > 0.0 && ((v / (2.0 * 0.5 * 1e6f64).powf(-2.0)) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tail_asymptote_values() {
        let t = tail_asymptote(k(0.5), TailSign::Negative).unwrap();
        assert_eq!(t.exponent, -2.0);
        assert!((t.prefactor - 1.0).abs() < 1e-15);
        assert_eq!(tail_asymptote(k(0.25), TailSign::Negative).unwrap().exponent, -4.0);
        assert!(matches!(tail_asymptote(k(0.0), TailSign::Negative), Err(Error::NoPowerLawTail)));
        for &kv in &[0.1, 0.3, 0.7] {
            let kk = k(kv);
            let t = tail_asymptote(kk, TailSign::Negative).unwrap();
            let x = 1e4 / kv;
            assert!((exp_kappa(-x, kk) / t.eval(x) - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn mellin_reference_values() {
        assert!((mellin_kappa(1.0, k(0.5)).unwrap() - 4.0 / 3.0).abs() < 1e-14);
        assert!(mellin_kappa(2.9, k(0.3)).unwrap().is_finite());
        assert!(matches!(mellin_kappa(3.4, k(0.3)), Err(Error::MellinDiverges { .. })));
        assert!(mellin_kappa(0.0, k(0.3)).is_err());
        for &r in &[0.5, 1.0, 2.5] {
            let g = ln_gamma(r).exp();
            assert!((mellin_kappa(r, k(0.0)).unwrap() - g).abs() < 1e-14 * g);
            assert!((mellin_kappa(r, k(1e-7)).unwrap() / g - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn mellin_matches_quadrature_grid() {
        for &kv in &[0.1, 0.2, 0.3, 0.45] {
            for &r in &[0.5, 1.0, 1.5, 2.0] {
                if r * kv >= 1.0 {
                    continue;
                }
                let kk = k(kv);
                let q = oracle::integrate_semiaxis(
                    |x| x.powf(r - 1.0) * exp_kappa(-x, kk),
                    1.0,
                    QuadOptions::default(),
                )
                .unwrap();
                let m = mellin_kappa(r, kk).unwrap();
                assert!(((m - q.value) / m).abs() < 1e-8, "κ={kv} r={r}: {m} vs {}", q.value);
            }
        }
    }

    #[test]
    fn erf_normalization_tends_to_one() {
        let mut prev = f64::INFINITY;
        for &kv in &[0.1, 0.01, 1e-3, 1e-4, 1e-6] {
            let d = (kappa_erf_normalization(k(kv)) - 1.0).abs();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-9);
    }

    #[test]
    fn erf_values() {
        assert_eq!(kappa_erf(0.0, k(0.4)).unwrap(), 0.0);
        assert!((kappa_erf(1.0, k(0.0)).unwrap() - 0.8427007929497149).abs() < 1e-14);
        assert!((kappa_erf(1.0, k(1e-6)).unwrap() - 0.8427007929497149).abs() < 1e-6);
        assert!((kappa_erf(1e8, k(0.4)).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(kappa_erf(f64::INFINITY, k(0.4)).unwrap(), 1.0);
        let a = kappa_erf(1.7, k(0.4)).unwrap();
        assert!((kappa_erf(-1.7, k(0.4)).unwrap() + a).abs() < 1e-15);
        // the two integration branches meet continuously
        let below = kappa_erf(2.0, k(0.6)).unwrap();
        let above = kappa_erf(2.0 + 1e-9, k(0.6)).unwrap();
        assert!((above - below).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn reciprocal_identity(x in -50.0f64..50.0, kv in 0.0f64..0.95) {
            let kk = k(kv);
            let p = exp_kappa(x, kk) * exp_kappa(-x, kk);
            prop_assert!((p - 1.0).abs() < 1e-12);
        }

        #[test]
        fn power_and_asinh_forms_agree(x in -50.0f64..50.0, kv in 0.1f64..0.9) {
            let kk = k(kv);
            let a = exp_kappa_power_form(x, kk);
            let b = exp_kappa(x, kk);
            prop_assert!(((a - b) / b).abs() < 1e-12);
        }

        #[test]
        fn small_argument_matches_exp(x in -1e-3f64..1e-3, kv in 0.0f64..0.9) {
            let d = (exp_kappa(x, k(kv)) - x.exp()).abs();
            prop_assert!(d <= 5.0 * kv * kv * x.abs().powi(3) * x.abs().exp() + 1e-14);
        }

        #[test]
        fn log_inverts_exp(x in -100.0f64..100.0, kv in 0.0f64..0.95) {
            let kk = k(kv);
            prop_assert!((ln_kappa(exp_kappa(x, kk), kk) - x).abs() < 1e-10);
        }

        #[test]
        fn exp_is_increasing(x in -40.0f64..40.0, dx in 1e-3f64..5.0, kv in 0.0f64..0.95) {
            let kk = k(kv);
            prop_assert!(exp_kappa(x + dx, kk) > exp_kappa(x, kk));
        }
    }
}
