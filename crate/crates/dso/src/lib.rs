//! Approximate distance sensitivity oracle for up to `f` edge failures.
//!
//! A query `(s, t, F)` builds a complete auxiliary graph on `s`, `t` and the
//! endpoints of `F`, weights each edge by the best of a short-path estimate
//! and a pivot-based estimate from fault-tolerant trees, and returns the
//! auxiliary `s`-`t` distance.

mod balls;
mod oracle;
mod params;

pub use balls::{classify_ball, BallIndex, BallRecord};
pub use oracle::{AuxGraph, Case, Dso, EdgeWeight, QueryOutcome, SpaceReport};
pub use params::{derive_dso_params, DsoConfig, DsoParams};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DsoError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("projected size {projected} words exceeds budget {budget}")]
    BudgetExceeded { projected: u128, budget: u128 },
    #[error("{got} failures exceed the sensitivity {max}")]
    TooManyFailures { got: usize, max: usize },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(transparent)]
    Format(#[from] graph_core::envelope::EnvelopeError),
}
