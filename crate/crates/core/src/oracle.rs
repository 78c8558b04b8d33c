//! Independent numerical machinery: adaptive Gauss–Kronrod quadrature on
//! finite and semi-infinite ranges, Richardson-extrapolated differentiation,
//! golden-section argmax and a bracketing root finder.
//!
//! The closed forms elsewhere in the crate are checked against these
//! routines, and families without a closed cdf fall back on them.
//!
//! Semi-infinite integrals are mapped through `x = s·eᵗ`. Under this map an
//! algebraic endpoint singularity `x^{γ−1}` (γ>0) and a Pareto tail `x^{−1−ε}`
//! (ε>0) both become exponentially decaying in `t`, so neither needs a
//! family-specific substitution.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Value plus an error estimate from a numerical oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

/// Environment variable that caps oracle evaluations in the CLI.
pub const EVAL_BUDGET_ENV: &str = "KAPPA_DIST_EVAL_BUDGET";

static DEFAULT_MAX_EVALS: AtomicUsize = AtomicUsize::new(2_000_000);

/// Sets the evaluation cap that `QuadOptions::default()` starts from.
pub fn set_default_eval_budget(max_evals: usize) {
    DEFAULT_MAX_EVALS.store(max_evals.max(1), AtomicOrdering::Relaxed);
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_evals: DEFAULT_MAX_EVALS.load(AtomicOrdering::Relaxed),
        }
    }
}

impl QuadOptions {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }
}

// Gauss–Kronrod 10/21 abscissae and weights (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525452218,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
struct RuleResult {
    value: f64,
    error: f64,
    abs_value: f64,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> RuleResult {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    RuleResult {
        value,
        error,
        abs_value: res_abs,
    }
}

/// Single non-adaptive 21-point Gauss–Kronrod panel.
pub fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    gk21(&f, a, b).value
}

struct Panel {
    a: f64,
    b: f64,
    rule: RuleResult,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.rule.error == other.rule.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.error.total_cmp(&other.rule.error)
    }
}

/// Globally adaptive quadrature of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<OracleResult> {
    integrate_ref(&f, a, b, opts)
}

fn integrate_ref<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, opts: QuadOptions) -> Result<OracleResult> {
    if a == b {
        return Ok(OracleResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let first = gk21(f, a, b);
    let mut evaluations = 21;
    if !first.value.is_finite() {
        return Err(Error::NoConvergence {
            what: "quadrature (non-finite integrand)",
            evaluations,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut total = first.value;
    let mut error = first.error;
    let mut abs_total = first.abs_value;
    heap.push(Panel { a, b, rule: first });

    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if error <= target || error <= 50.0 * f64::EPSILON * abs_total {
            break;
        }
        if evaluations + 42 > opts.max_evals {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                evaluations,
            });
        }
        let worst = heap.pop().expect("panel heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval no longer divisible in floating point; accept what we have
            heap.push(worst);
            break;
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        evaluations += 42;
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::NoConvergence {
                what: "quadrature (non-finite integrand)",
                evaluations,
            });
        }
        total += left.value + right.value - worst.rule.value;
        error += left.error + right.error - worst.rule.error;
        abs_total += left.abs_value + right.abs_value - worst.rule.abs_value;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            rule: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            rule: right,
        });
    }
    // re-sum to shed drift from the running updates
    let (value, err) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.rule.value, e + p.rule.error));
    Ok(OracleResult {
        value,
        abs_error_estimate: err,
        evaluations,
    })
}

#[derive(Clone, Copy)]
enum Direction {
    Down,
    Up,
}

/// Integrates `x ↦ f(x)` over `(0, anchor]` (Down) or `[anchor, ∞)` (Up)
/// through `x = anchor·eᵗ`, expanding outward in doubling chunks of `t`.
fn integrate_log_tail<F: Fn(f64) -> f64>(
    f: &F,
    anchor: f64,
    direction: Direction,
    opts: QuadOptions,
) -> Result<OracleResult> {
    let sign = match direction {
        Direction::Down => -1.0,
        Direction::Up => 1.0,
    };
    let g = |t: f64| {
        let x = anchor * (sign * t).exp();
        if x == 0.0 || !x.is_finite() {
            0.0
        } else {
            f(x) * x
        }
    };
    let t_limit = match direction {
        Direction::Down => (anchor / 1e-300).ln(),
        Direction::Up => (1e300 / anchor).ln(),
    };
    let mut total = 0.0f64;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut lo = 0.0;
    let mut width = 1.0;
    let mut last_chunk = f64::INFINITY;
    let mut last_edge = f64::INFINITY;
    while lo < t_limit {
        let hi = (lo + width).min(t_limit);
        let chunk_opts = QuadOptions {
            abs_tol: opts.abs_tol.max(1e-3 * opts.rel_tol * total.abs()),
            max_evals: opts.max_evals.saturating_sub(evaluations),
            ..opts
        };
        let chunk = integrate_ref(&g, lo, hi, chunk_opts).map_err(|e| match e {
            Error::NoConvergence { what, evaluations: n } => Error::NoConvergence {
                what,
                evaluations: evaluations + n,
            },
            other => other,
        })?;
        evaluations += chunk.evaluations;
        total += chunk.value;
        error += chunk.abs_error_estimate;
        last_chunk = chunk.value.abs();
        let edge = (g(hi) * hi.max(1.0)).abs();
        last_edge = edge;
        evaluations += 1;
        let negligible = opts.abs_tol.max(1e-2 * opts.rel_tol * total.abs());
        if lo >= 2.0 && last_chunk <= negligible && edge <= negligible {
            break;
        }
        if total == 0.0 && lo >= 64.0 {
            // identically zero far from the anchor
            break;
        }
        lo = hi;
        width *= 2.0;
        if evaluations >= opts.max_evals {
            return Err(Error::NoConvergence {
                what: "semi-infinite quadrature",
                evaluations,
            });
        }
    }
    if lo >= t_limit {
        let negligible = opts.abs_tol.max(opts.rel_tol * total.abs());
        // the edge value bounds what lies beyond the representable range
        if last_edge > negligible {
            return Err(Error::NoConvergence {
                what: "semi-infinite quadrature (tail not decaying)",
                evaluations,
            });
        }
    }
    Ok(OracleResult {
        value: total,
        abs_error_estimate: error + last_chunk,
        evaluations,
    })
}

/// `∫₀^b f(x) dx`, tolerant of integrable singularities at the origin.
pub fn integrate_from_zero<F: Fn(f64) -> f64>(f: F, b: f64, opts: QuadOptions) -> Result<OracleResult> {
    if b <= 0.0 {
        return Ok(OracleResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    integrate_log_tail(&f, b, Direction::Down, opts)
}

/// `∫ₐ^∞ f(x) dx` for `a > 0`, tolerant of Pareto tails `x^{−1−ε}`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, opts: QuadOptions) -> Result<OracleResult> {
    assert!(a > 0.0, "tail quadrature anchor must be positive");
    integrate_log_tail(&f, a, Direction::Up, opts)
}

/// `∫₀^∞ f(x) dx`, split at `split` (typically the distribution's scale).
pub fn integrate_semiaxis<F: Fn(f64) -> f64>(f: F, split: f64, opts: QuadOptions) -> Result<OracleResult> {
    assert!(split > 0.0 && split.is_finite(), "split point must be positive");
    let lower = integrate_log_tail(&f, split, Direction::Down, opts)?;
    let upper = integrate_log_tail(
        &f,
        split,
        Direction::Up,
        opts.with_max_evals(opts.max_evals.saturating_sub(lower.evaluations)),
    )?;
    Ok(OracleResult {
        value: lower.value + upper.value,
        abs_error_estimate: lower.abs_error_estimate + upper.abs_error_estimate,
        evaluations: lower.evaluations + upper.evaluations,
    })
}

/// Order of a numerical derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// Central differences with Richardson extrapolation over successive step
/// halvings. `h0` must keep `x ± h0` inside the domain of `f`.
pub fn differentiate<F: Fn(f64) -> f64>(f: F, x: f64, order: DerivativeOrder, h0: f64) -> Result<OracleResult> {
    const LEVELS: usize = 10;
    let fx = if order == DerivativeOrder::Second { f(x) } else { 0.0 };
    let mut evaluations = usize::from(order == DerivativeOrder::Second);
    let difference = |h: f64| match order {
        DerivativeOrder::First => (f(x + h) - f(x - h)) / (2.0 * h),
        DerivativeOrder::Second => (f(x + h) - 2.0 * fx + f(x - h)) / (h * h),
    };
    let mut table = [[0.0f64; LEVELS]; LEVELS];
    let mut h = h0;
    table[0][0] = difference(h);
    evaluations += 2;
    let mut best = table[0][0];
    let mut best_err = f64::INFINITY;
    for i in 1..LEVELS {
        h *= 0.5;
        table[i][0] = difference(h);
        evaluations += 2;
        let mut factor = 1.0;
        for j in 1..=i {
            factor *= 4.0;
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
            let err = (table[i][j] - table[i][j - 1])
                .abs()
                .max((table[i][j] - table[i - 1][j - 1]).abs());
            if err <= best_err {
                best_err = err;
                best = table[i][j];
            }
        }
        // roundoff has taken over once the diagonal stops improving
        if (table[i][i] - table[i - 1][i - 1]).abs() >= 2.0 * best_err {
            break;
        }
    }
    if !best.is_finite() {
        return Err(Error::NoConvergence {
            what: "numerical differentiation",
            evaluations,
        });
    }
    Ok(OracleResult {
        value: best,
        abs_error_estimate: best_err,
        evaluations,
    })
}

/// Golden-section search for the maximizer of a unimodal `f` on `[a, b]`.
pub fn argmax<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (a.abs() + b.abs()) + f64::MIN_POSITIVE {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Brent's bracketing root finder (bisection, secant and inverse quadratic
/// steps). `f(a)` and `f(b)` must differ in sign.
pub fn find_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, x_tol: f64, max_iter: usize) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::domain("find_root", fa, "f(a)·f(b)<0"));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::NoConvergence {
        what: "root bracketing",
        evaluations: max_iter,
    })
}
