use thiserror::Error;

use crate::optimizer::TraceRow;

/// Errors produced by the planning library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("layout has no base stations")]
    EmptyLayout,

    #[error("base stations {first} and {second} coincide")]
    DuplicatePoints { first: usize, second: usize },

    #[error("base station {index} at ({x}, {y}) lies outside the field")]
    PointOutsideField { index: usize, x: f64, y: f64 },

    #[error("operation requires a square field")]
    NotSquareField,

    #[error("operation requires a circular field")]
    NotCircleField,

    #[error("offset {d} is outside the supported range [0, {max})")]
    OffsetOutOfRange { d: f64, max: f64 },

    #[error("no circular arrangement is available for {n_bs} base stations")]
    UnsupportedArrangement { n_bs: usize },

    #[error("no base-station count satisfies the power limit")]
    Infeasible { trace: Vec<TraceRow> },

    #[error("quadrature did not reach tolerance {tolerance:e} (estimated error {error:e})")]
    QuadratureFailure { tolerance: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
