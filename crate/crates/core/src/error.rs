use thiserror::Error;

use crate::fit::FitResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violates its family's parameter window.
    #[error("invalid parameter {name}={value}: requires {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: String,
    },

    /// An operation argument lies outside the operation's domain.
    #[error("domain error in {operation}: {value} violates {constraint}")]
    Domain {
        operation: &'static str,
        value: f64,
        constraint: String,
    },

    #[error("moment of order {order} diverges: requires {constraint}")]
    MomentDiverges { order: f64, constraint: String },

    #[error("variance diverges: requires {constraint}")]
    VarianceDiverges { constraint: String },

    #[error("Mellin transform of order r={r} diverges: requires r<1/κ={bound}")]
    MellinDiverges { r: f64, bound: f64 },

    #[error("no power-law tail in classical limit (κ=0)")]
    NoPowerLawTail,

    #[error("family has no classical limit: requires κ≥{min_kappa}, got κ={kappa}")]
    DegenerateFamily { kappa: f64, min_kappa: f64 },

    #[error("unsupported order n={n}: requires {constraint}")]
    UnsupportedOrder { n: u32, constraint: String },

    #[error("ill-conditioned coefficients: |1-m²κ²|={denominator:e} for m={m}")]
    Conditioning { m: u32, denominator: f64 },

    #[error("{what} did not converge after {evaluations} evaluations")]
    NoConvergence {
        what: &'static str,
        evaluations: usize,
    },

    #[error("maximum-likelihood fit did not converge after {} iterations", best.iterations)]
    FitNonConvergence { best: Box<FitResult> },

    #[error("optimum pinned at boundary κ→1 (κ={kappa})")]
    AllMassAtBoundary { kappa: f64, best: Box<FitResult> },

    #[error("insufficient tail points: need at least {needed}, got {got}")]
    InsufficientTail { needed: usize, got: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, constraint: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            value,
            constraint: constraint.into(),
        }
    }

    pub(crate) fn domain(operation: &'static str, value: f64, constraint: impl Into<String>) -> Self {
        Error::Domain {
            operation,
            value,
            constraint: constraint.into(),
        }
    }

    pub(crate) fn diverges(order: f64, constraint: impl Into<String>) -> Self {
        Error::MomentDiverges {
            order,
            constraint: constraint.into(),
        }
    }
}
