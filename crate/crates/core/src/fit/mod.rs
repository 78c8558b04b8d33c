//! Random variates, maximum-likelihood fitting and tail-index estimation.

mod mle;
mod sample;
mod simplex;
mod tail;

pub use mle::{fit_mle, Family, FitOptions, FitResult};
pub use sample::{ks_critical_99, ks_statistic, sample, Sample};
pub use tail::{hill, tail_index};
