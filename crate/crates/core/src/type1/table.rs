//! Regularized κ-incomplete gamma integral
//! `G_ν(u) = ∫₀^u w^{ν−1} exp_κ(−w) dw / M_κ(ν)` and its complement.
//!
//! Integer `ν` uses the closed Erlang ansatz, `κ = 0` the ordinary
//! incomplete gamma function, everything else a lazily built table of
//! cumulative integrals between geometric nodes. A lookup then costs one
//! short quadrature inside a single panel.

use std::sync::OnceLock;

use statrs::function::gamma::{gamma_lr, gamma_ur};

use super::erlang::ErlangPolynomials;
use crate::error::{Error, Result};
use crate::kappa::{ln_exp_kappa, ln_mellin_kappa, Kappa};
use crate::oracle::{self, QuadOptions};

const FIRST_NODE: f64 = 1e-6;
const NODE_RATIO: f64 = 1.25;
/// Largest `ν` handled by the closed Erlang ansatz.
const MAX_ERLANG_ORDER: f64 = 24.0;

#[derive(Debug)]
struct Table {
    nodes: Vec<f64>,
    /// `G(nodes[i])`
    lower: Vec<f64>,
    /// `1 − G(nodes[i])`, accumulated from the far tail inward.
    upper: Vec<f64>,
}

#[derive(Debug)]
enum Kind {
    Classical,
    Erlang(ErlangPolynomials),
    Tabulated(OnceLock<Table>),
}

#[derive(Debug)]
pub(crate) struct KappaGammaIntegral {
    nu: f64,
    kappa: Kappa,
    ln_mellin: f64,
    kind: Kind,
}

fn quad() -> QuadOptions {
    QuadOptions::default().with_rel_tol(1e-13)
}

impl KappaGammaIntegral {
    pub(crate) fn new(nu: f64, kappa: Kappa) -> Result<Self> {
        let ln_mellin = ln_mellin_kappa(nu, kappa)?;
        let kind = if kappa.value() == 0.0 {
            Kind::Classical
        } else if nu.fract() == 0.0 && nu <= MAX_ERLANG_ORDER {
            match ErlangPolynomials::new(nu as u32, kappa) {
                Ok(p) => Kind::Erlang(p),
                Err(Error::Conditioning { .. }) => Kind::Tabulated(OnceLock::new()),
                Err(e) => return Err(e),
            }
        } else {
            Kind::Tabulated(OnceLock::new())
        };
        Ok(KappaGammaIntegral {
            nu,
            kappa,
            ln_mellin,
            kind,
        })
    }

    pub(crate) fn ln_mellin(&self) -> f64 {
        self.ln_mellin
    }

    /// Normalized integrand `w^{ν−1} exp_κ(−w) / M_κ(ν)`.
    pub(crate) fn density(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return if self.nu < 1.0 {
                f64::INFINITY
            } else if self.nu == 1.0 {
                (-self.ln_mellin).exp()
            } else {
                0.0
            };
        }
        ((self.nu - 1.0) * w.ln() + ln_exp_kappa(-w, self.kappa) - self.ln_mellin).exp()
    }

    fn series(&self, u: f64) -> f64 {
        let nu = self.nu;
        (nu * u.ln() - self.ln_mellin).exp() * (1.0 / nu - u / (nu + 1.0) + u * u / (2.0 * (nu + 2.0)))
    }

    fn far_tail(&self, u: f64) -> f64 {
        oracle::integrate_to_infinity(|w| self.density(w), u, quad())
            .map(|r| r.value)
            .unwrap_or(0.0)
    }

    fn table<'a>(&self, cell: &'a OnceLock<Table>) -> &'a Table {
        cell.get_or_init(|| {
            let last = (5e4f64).max(100.0 * self.nu);
            let mut nodes = vec![FIRST_NODE];
            while *nodes.last().unwrap() < last {
                let next = nodes.last().unwrap() * NODE_RATIO;
                nodes.push(next);
            }
            let segments: Vec<f64> = nodes
                .windows(2)
                .map(|w| self.segment(w[0], w[1]))
                .collect();
            let mut lower = Vec::with_capacity(nodes.len());
            lower.push(self.series(FIRST_NODE));
            for s in &segments {
                lower.push(lower.last().unwrap() + s);
            }
            let mut upper = vec![0.0; nodes.len()];
            upper[nodes.len() - 1] = self.far_tail(*nodes.last().unwrap());
            for i in (0..segments.len()).rev() {
                upper[i] = upper[i + 1] + segments[i];
            }
            Table { nodes, lower, upper }
        })
    }

    fn panel(t: &Table, u: f64) -> usize {
        let guess = ((u / FIRST_NODE).ln() / NODE_RATIO.ln()).floor() as usize;
        let mut i = guess.min(t.nodes.len() - 2);
        while i > 0 && t.nodes[i] > u {
            i -= 1;
        }
        while i + 2 < t.nodes.len() && t.nodes[i + 1] <= u {
            i += 1;
        }
        i
    }

    /// `G(u)` together with `1 − G(u)`, each computed without cancellation
    /// where possible.
    pub(crate) fn both(&self, u: f64) -> (f64, f64) {
        if u <= 0.0 {
            return (0.0, 1.0);
        }
        if u.is_infinite() {
            return (1.0, 0.0);
        }
        match &self.kind {
            Kind::Classical => (gamma_lr(self.nu, u), gamma_ur(self.nu, u)),
            Kind::Erlang(p) => {
                let s = p.survival(u);
                (1.0 - s, s)
            }
            Kind::Tabulated(cell) => {
                let t = self.table(cell);
                if u < FIRST_NODE {
                    let lo = self.series(u);
                    return (lo, 1.0 - lo);
                }
                if u >= *t.nodes.last().unwrap() {
                    let up = self.far_tail(u);
                    return (1.0 - up, up);
                }
                let i = Self::panel(t, u);
                if t.lower[i] <= 0.5 {
                    let lo = t.lower[i] + self.segment(t.nodes[i], u);
                    (lo, 1.0 - lo)
                } else {
                    let up = t.upper[i + 1] + self.segment(u, t.nodes[i + 1]);
                    (1.0 - up, up)
                }
            }
        }
    }

    fn segment(&self, a: f64, b: f64) -> f64 {
        oracle::integrate(|x| self.density(x), a, b, quad())
            .map(|r| r.value)
            .unwrap_or_else(|_| oracle::gauss_kronrod_21(|x| self.density(x), a, b))
    }

    #[cfg(test)]
    fn lower(&self, u: f64) -> f64 {
        self.both(u).0
    }

    #[cfg(test)]
    fn upper(&self, u: f64) -> f64 {
        self.both(u).1
    }

    /// Solves `G(u) = p` (or `1 − G(u) = 1 − p` when `upper`) by Newton steps
    /// safeguarded with bisection on a bracket.
    pub(crate) fn inverse(&self, target: f64, upper: bool) -> Result<f64> {
        let f = |u: f64| {
            let (lo, up) = self.both(u);
            if upper {
                target - up
            } else {
                lo - target
            }
        };
        // f is increasing in u in both orientations
        let (mut a, mut b) = (0.0f64, self.nu.max(1.0));
        while f(b) < 0.0 {
            a = b;
            b *= 4.0;
            if !b.is_finite() {
                return Err(Error::NoConvergence {
                    what: "incomplete integral inversion",
                    evaluations: 0,
                });
            }
        }
        if a == 0.0 {
            let mut probe = b * 0.25;
            while probe > 1e-300 && f(probe) > 0.0 {
                b = probe;
                probe *= 0.25;
            }
            if f(probe) <= 0.0 {
                a = probe;
            }
        }
        let mut u = if a > 0.0 { (a * b).sqrt() } else { 0.5 * b };
        for _ in 0..200 {
            let fu = f(u);
            if fu == 0.0 {
                return Ok(u);
            }
            if fu < 0.0 {
                a = u;
            } else {
                b = u;
            }
            let slope = self.density(u);
            let mut next = u - fu / slope;
            if !(next > a && next < b) || !next.is_finite() {
                next = if a > 0.0 && b / a > 4.0 { (a * b).sqrt() } else { 0.5 * (a + b) };
            }
            if (next - u).abs() <= 2e-15 * u || (b - a) <= 4.0 * f64::EPSILON * b {
                return Ok(next);
            }
            u = next;
        }
        Err(Error::NoConvergence {
            what: "incomplete integral inversion",
            evaluations: 200,
        })
    }
}
