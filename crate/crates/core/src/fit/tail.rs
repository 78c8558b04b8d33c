//! Pareto tail index from the upper order statistics.
//!
//! The Hill estimate of the extreme-value index γ is bias-reduced with
//! second-order parameters (ρ, β) estimated at a larger `k₁ = ⌊n^0.995⌋`,
//! then converted to the density exponent `b = 1 + 1/γ`.

use super::sample::Sample;
use crate::error::{Error, Result};

pub const MIN_TAIL_POINTS: usize = 30;

/// Plain Hill estimate of γ from the top `k` order statistics of an
/// ascending slice.
pub fn hill(sorted: &[f64], k: usize) -> Result<f64> {
    let n = sorted.len();
    if k < 1 || k >= n {
        return Err(Error::InsufficientTail { needed: k + 1, got: n });
    }
    let threshold = sorted[n - k - 1];
    if !(threshold > 0.0) {
        return Err(Error::domain("tail_index", threshold, "positive tail threshold"));
    }
    let lt = threshold.ln();
    Ok(sorted[n - k..].iter().map(|x| x.ln() - lt).sum::<f64>() / k as f64)
}

fn log_excess_moments(sorted: &[f64], k: usize) -> [f64; 3] {
    let n = sorted.len();
    let lt = sorted[n - k - 1].ln();
    let mut m = [0.0; 3];
    for x in &sorted[n - k..] {
        let d = x.ln() - lt;
        m[0] += d;
        m[1] += d * d;
        m[2] += d * d * d;
    }
    m.map(|v| v / k as f64)
}

/// Second-order shape ρ (τ = 0 member of the Fraga Alves family).
fn rho_hat(sorted: &[f64], k: usize) -> f64 {
    let [m1, m2, m3] = log_excess_moments(sorted, k);
    let a = m1.ln() - 0.5 * (m2 / 2.0).ln();
    let b = 0.5 * (m2 / 2.0).ln() - (m3 / 6.0).ln() / 3.0;
    let t = a / b;
    -(3.0 * (t - 1.0) / (t - 3.0)).abs()
}

/// Second-order scale β (Gomes–Martins).
fn beta_hat(sorted: &[f64], k: usize, rho: f64) -> f64 {
    let n = sorted.len();
    let kf = k as f64;
    let u: Vec<f64> = (1..=k).map(|i| i as f64 * (sorted[n - i].ln() - sorted[n - i - 1].ln())).collect();
    let d = |a: f64| (1..=k).map(|i| (i as f64 / kf).powf(-a)).sum::<f64>() / kf;
    let dd = |a: f64| (1..=k).map(|i| (i as f64 / kf).powf(-a) * u[i - 1]).sum::<f64>() / kf;
    let (d_r, dd_0, dd_r, dd_2r) = (d(rho), dd(0.0), dd(rho), dd(2.0 * rho));
    (kf / n as f64).powf(rho) * (d_r * dd_0 - dd_r) / (d_r * dd_r - dd_2r)
}

/// Estimated density exponent `b` in `p(x) ∝ x^{−b}` from the top
/// `fraction` of the sample.
pub fn tail_index(sample: &Sample, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction <= 0.5) {
        return Err(Error::domain("tail_index", fraction, "0<fraction≤0.5"));
    }
    let xs = sample.values();
    let n = xs.len();
    let k = (fraction * n as f64).floor() as usize;
    if k < MIN_TAIL_POINTS {
        return Err(Error::InsufficientTail {
            needed: MIN_TAIL_POINTS,
            got: k,
        });
    }
    let mut gamma = hill(xs, k)?;
    let k1 = ((n as f64).powf(0.995).floor() as usize).min(n - 1);
    if xs[n - k1 - 1] > 0.0 {
        let rho = rho_hat(xs, k1);
        if rho.is_finite() && rho < -0.1 {
            let beta = beta_hat(xs, k1, rho);
            let corrected = gamma * (1.0 - beta / (1.0 - rho) * (n as f64 / k as f64).powf(rho));
            if corrected.is_finite() && corrected > 0.0 {
                gamma = corrected;
            }
        }
    }
    Ok(1.0 + 1.0 / gamma)
}
