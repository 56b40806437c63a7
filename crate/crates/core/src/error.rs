use thiserror::Error;

use crate::expr::ExprError;

/// Errors raised by the geometry, flow and curvature routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CtlError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degrees of freedom must be at least 1")]
    ZeroDimension,

    #[error("dimension too large: n = {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite state encountered; last valid time t = {last_time}")]
    NonFiniteState { last_time: f64 },

    #[error("point {point:?} lies outside the domain of {what}")]
    Domain { what: String, point: Vec<f64> },

    #[error("metric is degenerate at {point:?} (|det| = {det:e})")]
    Degenerate { point: Vec<f64>, det: f64 },

    #[error("curvature is singular: |rho^2 - c_v| = {gap:e} is inside the band {band:e}")]
    Singular { gap: f64, band: f64 },

    #[error("metric function vanishes at {point:?}")]
    ZeroOmega { point: Vec<f64> },

    #[error(transparent)]
    Expression(#[from] ExprError),
}

pub type Result<T> = std::result::Result<T, CtlError>;
