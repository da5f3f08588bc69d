// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid complex dimension n = {0} (need n >= 2)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected real dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("focal point at r = {radius}: D(r) is singular (condition number {condition:e})")]
    FocalPoint { radius: f64, condition: f64 },

    #[error("point is at distance {distance} from the focal submanifold, expected {expected}")]
    OffTube { distance: f64, expected: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
