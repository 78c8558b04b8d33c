//! The evaluation surface shared by every family, plus generic numerical
//! fallbacks (quantile inversion, mode search, descriptive statistics) and
//! the half-line to real-line symmetrizer.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{self, OracleResult, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// `x ≥ 0`
    HalfLine,
    /// `x ∈ ℝ`
    RealLine,
}

/// Location of the density maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    At { x: f64 },
    /// Maximum at the origin with a finite density value there.
    MonotoneDecreasing { density_at_origin: f64 },
    /// The density diverges at the origin.
    PoleAtOrigin,
}

impl Mode {
    pub fn location(&self) -> f64 {
        match *self {
            Mode::At { x } => x,
            _ => 0.0,
        }
    }
}

/// Moment-derived summaries. A field is `None` when the raw moments it needs
/// diverge. Kurtosis is the standardized fourth central moment (not excess).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub mean: Option<f64>,
    pub variance: Option<f64>,
    pub coefficient_of_variation: Option<f64>,
    pub skewness: Option<f64>,
    pub kurtosis: Option<f64>,
}

pub trait ContinuousDistribution {
    fn support(&self) -> Support {
        Support::HalfLine
    }

    /// Characteristic scale, used to anchor quadrature and root brackets.
    fn scale(&self) -> f64;

    fn pdf(&self, x: f64) -> f64;

    fn ln_pdf(&self, x: f64) -> f64 {
        self.pdf(x).ln()
    }

    fn cdf(&self, x: f64) -> f64;

    fn survival(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    fn hazard(&self, x: f64) -> f64 {
        let s = self.survival(x);
        if s > 0.0 {
            self.pdf(x) / s
        } else {
            f64::INFINITY
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        invert_cdf(self, p)
    }

    /// `E[X^m]`. Errors with `MomentDiverges` outside the existence window.
    fn raw_moment(&self, m: f64) -> Result<f64>;

    fn mode(&self) -> Mode {
        numeric_mode(self)
    }

    fn descriptive_stats(&self) -> DescriptiveStats {
        stats_from_moments(|m| self.raw_moment(m).ok())
    }
}

pub(crate) fn check_probability(p: f64, support: Support) -> Result<()> {
    let ok = match support {
        Support::HalfLine => (0.0..1.0).contains(&p),
        Support::RealLine => p > 0.0 && p < 1.0,
    };
    if ok {
        Ok(())
    } else {
        let constraint = match support {
            Support::HalfLine => "0≤P<1",
            Support::RealLine => "0<P<1",
        };
        Err(Error::domain("quantile", p, constraint))
    }
}

/// Standard central-moment combinations of the first four raw moments.
pub fn stats_from_moments<F: Fn(f64) -> Option<f64>>(raw: F) -> DescriptiveStats {
    let m1 = raw(1.0);
    let m2 = raw(2.0);
    let m3 = raw(3.0);
    let m4 = raw(4.0);
    let variance = match (m1, m2) {
        (Some(a), Some(b)) => Some((b - a * a).max(0.0)),
        _ => None,
    };
    let sd = variance.map(f64::sqrt);
    let coefficient_of_variation = match (sd, m1) {
        (Some(s), Some(mu)) if mu != 0.0 => Some(s / mu),
        _ => None,
    };
    let skewness = match (m1, m2, m3, sd) {
        (Some(a), Some(b), Some(c), Some(s)) if s > 0.0 => {
            Some((c - 3.0 * a * b + 2.0 * a.powi(3)) / s.powi(3))
        }
        _ => None,
    };
    let kurtosis = match (m1, m2, m3, m4, variance) {
        (Some(a), Some(b), Some(c), Some(d), Some(v)) if v > 0.0 => {
            Some((d - 4.0 * a * c + 6.0 * a * a * b - 3.0 * a.powi(4)) / (v * v))
        }
        _ => None,
    };
    DescriptiveStats {
        mean: m1,
        variance,
        coefficient_of_variation,
        skewness,
        kurtosis,
    }
}

/// Inverts the cdf by outward doubling to a bracket followed by Brent's
/// method. Upper quantiles are solved on the survival function so that
/// `1 − P` keeps its relative precision.
pub fn invert_cdf<D: ContinuousDistribution + ?Sized>(d: &D, p: f64) -> Result<f64> {
    check_probability(p, d.support())?;
    if p == 0.0 {
        return Ok(0.0);
    }
    if d.support() == Support::RealLine {
        return invert_real_line(d, p);
    }
    let upper = p > 0.5;
    let target = if upper { 1.0 - p } else { p };
    let g = |x: f64| {
        if upper {
            target - d.survival(x)
        } else {
            d.cdf(x) - target
        }
    };
    let mut hi = d.scale();
    let mut lo = 0.0;
    let mut steps = 0;
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > 2100 || !hi.is_finite() {
            return Err(Error::NoConvergence {
                what: "quantile bracketing",
                evaluations: steps,
            });
        }
    }
    if lo == 0.0 {
        // tighten the lower end so tiny quantiles keep relative accuracy
        let mut probe = hi * 0.5;
        let mut n = 0;
        while probe > f64::MIN_POSITIVE && g(probe) > 0.0 && n < 2100 {
            hi = probe;
            probe *= 0.5;
            n += 1;
        }
        lo = if g(probe) <= 0.0 { probe } else { 0.0 };
    }
    oracle::find_root(g, lo, hi, 0.0, 400)
}

fn invert_real_line<D: ContinuousDistribution + ?Sized>(d: &D, p: f64) -> Result<f64> {
    let upper = p > 0.5;
    let g = |x: f64| {
        if upper {
            (1.0 - p) - d.survival(x)
        } else {
            d.cdf(x) - p
        }
    };
    let s = d.scale();
    let (mut lo, mut hi) = (-s, s);
    let mut steps = 0;
    while g(lo) > 0.0 {
        lo *= 2.0;
        steps += 1;
        if steps > 2100 || !lo.is_finite() {
            return Err(Error::NoConvergence {
                what: "quantile bracketing",
                evaluations: steps,
            });
        }
    }
    while g(hi) < 0.0 {
        hi *= 2.0;
        steps += 1;
        if steps > 2100 || !hi.is_finite() {
            return Err(Error::NoConvergence {
                what: "quantile bracketing",
                evaluations: steps,
            });
        }
    }
    oracle::find_root(g, lo, hi, 1e-300, 400)
}

/// Locates the density maximum by a logarithmic scan followed by
/// golden-section refinement.
pub fn numeric_mode<D: ContinuousDistribution + ?Sized>(d: &D) -> Mode {
    let s = d.scale();
    let lo_exp = -12.0;
    let hi_exp = 6.0;
    let n = 721;
    let xs: Vec<f64> = (0..n)
        .map(|i| s * 10f64.powf(lo_exp + (hi_exp - lo_exp) * i as f64 / (n - 1) as f64))
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| d.ln_pdf(x)).collect();
    let (imax, _) = ys
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, by), (i, &y)| if y > by { (i, y) } else { (bi, by) });
    if imax == 0 {
        let p0 = d.pdf(0.0);
        return if p0.is_finite() {
            Mode::MonotoneDecreasing { density_at_origin: p0 }
        } else {
            Mode::PoleAtOrigin
        };
    }
    let a = xs[imax - 1];
    let b = xs[(imax + 1).min(n - 1)];
    // refine on a log scale; the bracket spans one scan cell either side
    let t = oracle::argmax(|t| d.ln_pdf(t.exp()), a.ln(), b.ln());
    Mode::At { x: t.exp() }
}

/// `∫ x^m pdf(x) dx` by quadrature over the support.
pub fn moment_by_quadrature<D: ContinuousDistribution + ?Sized>(
    d: &D,
    m: f64,
    opts: QuadOptions,
) -> Result<OracleResult> {
    // log form keeps x^m·p(x) finite where x^m alone would overflow
    let weighted = |x: f64| if x > 0.0 { (m * x.ln() + d.ln_pdf(x)).exp() } else { 0.0 };
    let half = oracle::integrate_semiaxis(weighted, d.scale(), opts)?;
    match d.support() {
        Support::HalfLine => Ok(half),
        Support::RealLine => {
            let neg = oracle::integrate_semiaxis(|x| (m * x.ln() + d.ln_pdf(-x)).exp(), d.scale(), opts)?;
            Ok(OracleResult {
                value: half.value + neg.value,
                abs_error_estimate: half.abs_error_estimate + neg.abs_error_estimate,
                evaluations: half.evaluations + neg.evaluations,
            })
        }
    }
}

/// Real-line distribution `F(x) = ½ + ½ sign(x) P(|x|)` built from a
/// half-line distribution `P`.
#[derive(Debug, Clone)]
pub struct Symmetric<D> {
    inner: D,
}

impl<D: ContinuousDistribution> Symmetric<D> {
    pub fn new(inner: D) -> Self {
        assert_eq!(inner.support(), Support::HalfLine, "symmetrize needs a half-line distribution");
        Symmetric { inner }
    }

    pub fn inner(&self) -> &D {
        &self.inner
    }
}

impl<D: ContinuousDistribution> ContinuousDistribution for Symmetric<D> {
    fn support(&self) -> Support {
        Support::RealLine
    }

    fn scale(&self) -> f64 {
        self.inner.scale()
    }

    fn pdf(&self, x: f64) -> f64 {
        0.5 * self.inner.pdf(x.abs())
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        self.inner.ln_pdf(x.abs()) - std::f64::consts::LN_2
    }

    fn cdf(&self, x: f64) -> f64 {
        if x >= 0.0 {
            0.5 + 0.5 * self.inner.cdf(x)
        } else {
            0.5 * self.inner.survival(-x)
        }
    }

    fn survival(&self, x: f64) -> f64 {
        if x >= 0.0 {
            0.5 * self.inner.survival(x)
        } else {
            0.5 + 0.5 * self.inner.cdf(-x)
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p, Support::RealLine)?;
        if p >= 0.5 {
            self.inner.quantile(2.0 * p - 1.0)
        } else {
            self.inner.quantile(1.0 - 2.0 * p).map(|x| -x)
        }
    }

    fn raw_moment(&self, m: f64) -> Result<f64> {
        if m.fract() != 0.0 || m < 0.0 {
            return Err(Error::domain("raw_moment", m, "integer m≥0 on the real line"));
        }
        let even = self.inner.raw_moment(m)?;
        Ok(if (m as i64) % 2 == 0 { even } else { 0.0 })
    }

    fn mode(&self) -> Mode {
        match self.inner.mode() {
            // a half-line maximum at the origin becomes an interior peak
            Mode::MonotoneDecreasing { .. } => Mode::At { x: 0.0 },
            other => other,
        }
    }
}
