// NaN must fail parameter checks, which `!(x > 0.0)` does and `x <= 0.0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandit;
pub mod cli;
pub mod confidence;
pub mod config;
pub mod distributions;
pub mod empirical;
pub mod error;
pub mod estimate;
pub mod evt_estimator;
pub mod experiments;
pub mod gpd_mle;
pub mod threshold_select;
mod optim;
pub mod rng;
pub mod special;

pub use error::{Error, Result};
