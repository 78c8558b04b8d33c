//! κ-deformed exponential and logarithm, the five κ-distribution families
//! built on them, and tools for sampling, fitting and tail analysis.
//!
//! ```
//! use kappa_dist::{ContinuousDistribution, Kappa, Type2};
//!
//! let d = Type2::new(2.0, 1.0, Kappa::new(0.3).unwrap()).unwrap();
//! let x = d.quantile(0.5).unwrap();
//! assert!((d.cdf(x) - 0.5).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used deliberately so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod error;
pub mod cli;
pub mod family;
pub mod fit;
pub mod kappa;
pub mod oracle;
pub mod special;
pub mod type1;
pub mod type2;
pub mod type3;
pub mod type4;
pub mod type5;

pub use dist::{ContinuousDistribution, DescriptiveStats, Mode, Support, Symmetric};
pub use error::{Error, Result};
pub use family::{Distribution, DistributionSpec};
pub use kappa::{exp_kappa, ln_kappa, mellin_kappa, Kappa};
pub use type1::{ErlangPolynomials, KappaNormal, Type1};
pub use type2::Type2;
pub use type3::{KappaLogistic, Type3};
pub use type4::Type4;
pub use type5::Type5;
