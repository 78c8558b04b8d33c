//! Serializable parameter sets for every family and a single evaluation
//! type that dispatches to the concrete implementations.

use serde::{Deserialize, Serialize};

use crate::dist::{ContinuousDistribution, DescriptiveStats, Mode, Support};
use crate::error::Result;
use crate::kappa::Kappa;
use crate::type1::{KappaNormal, Type1};
use crate::type2::Type2;
use crate::type3::{KappaLogistic, Type3};
use crate::type4::Type4;
use crate::type5::Type5;

/// Unvalidated parameters. `build` checks them and yields a [`Distribution`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistributionSpec {
    #[serde(rename = "type1")]
    Type1 { alpha: f64, beta: f64, nu: f64, kappa: f64 },
    Erlang { n: u32, beta: f64, kappa: f64 },
    #[serde(rename = "type2")]
    Type2 { alpha: f64, beta: f64, kappa: f64 },
    #[serde(rename = "type3")]
    Type3 { alpha: f64, beta: f64, lambda: f64, kappa: f64 },
    #[serde(rename = "type4")]
    Type4 { alpha: f64, beta: f64, kappa: f64 },
    #[serde(rename = "type5")]
    Type5 { n: u32, beta: f64, kappa: f64 },
    #[serde(rename = "knormal")]
    KappaNormal { beta: f64, kappa: f64 },
    #[serde(rename = "klogistic")]
    KappaLogistic { beta: f64, location: f64, kappa: f64 },
}

impl DistributionSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            DistributionSpec::Type1 { .. } => "type1",
            DistributionSpec::Erlang { .. } => "erlang",
            DistributionSpec::Type2 { .. } => "type2",
            DistributionSpec::Type3 { .. } => "type3",
            DistributionSpec::Type4 { .. } => "type4",
            DistributionSpec::Type5 { .. } => "type5",
            DistributionSpec::KappaNormal { .. } => "knormal",
            DistributionSpec::KappaLogistic { .. } => "klogistic",
        }
    }

    /// Parameters in declaration order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            DistributionSpec::Type1 { alpha, beta, nu, kappa } => {
                vec![("alpha", alpha), ("beta", beta), ("nu", nu), ("kappa", kappa)]
            }
            DistributionSpec::Erlang { n, beta, kappa } => vec![("n", f64::from(n)), ("beta", beta), ("kappa", kappa)],
            DistributionSpec::Type2 { alpha, beta, kappa } | DistributionSpec::Type4 { alpha, beta, kappa } => {
                vec![("alpha", alpha), ("beta", beta), ("kappa", kappa)]
            }
            DistributionSpec::Type3 { alpha, beta, lambda, kappa } => {
                vec![("alpha", alpha), ("beta", beta), ("lambda", lambda), ("kappa", kappa)]
            }
            DistributionSpec::Type5 { n, beta, kappa } => vec![("n", f64::from(n)), ("beta", beta), ("kappa", kappa)],
            DistributionSpec::KappaNormal { beta, kappa } => vec![("beta", beta), ("kappa", kappa)],
            DistributionSpec::KappaLogistic { beta, location, kappa } => {
                vec![("beta", beta), ("location", location), ("kappa", kappa)]
            }
        }
    }

    pub fn kappa(&self) -> f64 {
        match *self {
            DistributionSpec::Type1 { kappa, .. }
            | DistributionSpec::Erlang { kappa, .. }
            | DistributionSpec::Type2 { kappa, .. }
            | DistributionSpec::Type3 { kappa, .. }
            | DistributionSpec::Type4 { kappa, .. }
            | DistributionSpec::Type5 { kappa, .. }
            | DistributionSpec::KappaNormal { kappa, .. }
            | DistributionSpec::KappaLogistic { kappa, .. } => kappa,
        }
    }

    pub fn build(&self) -> Result<Distribution> {
        let k = Kappa::new(self.kappa())?;
        Ok(match *self {
            DistributionSpec::Type1 { alpha, beta, nu, .. } => Distribution::Type1(Type1::new(alpha, beta, nu, k)?),
            DistributionSpec::Erlang { n, beta, .. } => Distribution::Type1(Type1::erlang(n, beta, k)?),
            DistributionSpec::Type2 { alpha, beta, .. } => Distribution::Type2(Type2::new(alpha, beta, k)?),
            DistributionSpec::Type3 { alpha, beta, lambda, .. } => {
                Distribution::Type3(Type3::new(alpha, beta, lambda, k)?)
            }
            DistributionSpec::Type4 { alpha, beta, .. } => Distribution::Type4(Type4::new(alpha, beta, k)?),
            DistributionSpec::Type5 { n, beta, .. } => Distribution::Type5(Type5::new(n, beta, k)?),
            DistributionSpec::KappaNormal { beta, .. } => Distribution::KappaNormal(KappaNormal::new(beta, k)?),
            DistributionSpec::KappaLogistic { beta, location, .. } => {
                Distribution::KappaLogistic(KappaLogistic::with_location(beta, k, location)?)
            }
        })
    }
}

/// A validated distribution of any family.
#[derive(Debug, Clone)]
pub enum Distribution {
    Type1(Type1),
    Type2(Type2),
    Type3(Type3),
    Type4(Type4),
    Type5(Type5),
    KappaNormal(KappaNormal),
    KappaLogistic(KappaLogistic),
}

macro_rules! dispatch {
    ($self:expr, $d:ident => $body:expr) => {
        match $self {
            Distribution::Type1($d) => $body,
            Distribution::Type2($d) => $body,
            Distribution::Type3($d) => $body,
            Distribution::Type4($d) => $body,
            Distribution::Type5($d) => $body,
            Distribution::KappaNormal($d) => $body,
            Distribution::KappaLogistic($d) => $body,
        }
    };
}

impl ContinuousDistribution for Distribution {
    fn support(&self) -> Support {
        dispatch!(self, d => d.support())
    }

    fn scale(&self) -> f64 {
        dispatch!(self, d => d.scale())
    }

    fn pdf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.pdf(x))
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.ln_pdf(x))
    }

    fn cdf(&self, x: f64) -> f64 {
        dispatch!(self, d => d.cdf(x))
    }

    fn survival(&self, x: f64) -> f64 {
        dispatch!(self, d => d.survival(x))
    }

    fn hazard(&self, x: f64) -> f64 {
        dispatch!(self, d => d.hazard(x))
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        dispatch!(self, d => d.quantile(p))
    }

    fn raw_moment(&self, m: f64) -> Result<f64> {
        dispatch!(self, d => d.raw_moment(m))
    }

    fn mode(&self) -> Mode {
        dispatch!(self, d => d.mode())
    }

    fn descriptive_stats(&self) -> DescriptiveStats {
        dispatch!(self, d => d.descriptive_stats())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_keeps_tag() {
        let s = DistributionSpec::Type3 { alpha: 2.0, beta: 1.0, lambda: 0.5, kappa: 0.2 };
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.starts_with(r#"{"family":"type3","alpha":2.0"#), "{j}");
        assert_eq!(serde_json::from_str::<DistributionSpec>(&j).unwrap(), s);
    }

    #[test]
    fn build_validates() {
        assert!(DistributionSpec::Type2 { alpha: 1.0, beta: -1.0, kappa: 0.2 }.build().is_err());
        assert!(DistributionSpec::Type2 { alpha: 1.0, beta: 1.0, kappa: 1.0 }.build().is_err());
        assert!(DistributionSpec::Erlang { n: 4, beta: 1.0, kappa: 0.3 }.build().is_err());
        let d = DistributionSpec::Erlang { n: 3, beta: 1.0, kappa: 0.3 }.build().unwrap();
        assert!((d.raw_moment(0.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn type3_with_unit_lambda_is_type2() {
        let a = DistributionSpec::Type3 { alpha: 1.5, beta: 0.7, lambda: 1.0, kappa: 0.3 }.build().unwrap();
        let b = DistributionSpec::Type2 { alpha: 1.5, beta: 0.7, kappa: 0.3 }.build().unwrap();
        assert_eq!(a.cdf(1.3), b.cdf(1.3));
    }
}
