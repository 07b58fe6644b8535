use thiserror::Error;

/// Errors raised by the geometry, dynamics and work-statistics routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input (non-finite entries, non-positive mass, ...).
    #[error("invalid input: {0}")]
    Input(String),
    /// A point lies outside the configured validity radius of a frame.
    #[error("point outside validity radius: r = {radius_at_point:e} > {limit:e}")]
    Domain { radius_at_point: f64, limit: f64 },
    /// The expanded metric is degenerate or not Lorentzian at the point.
    #[error("geometry error: {0}")]
    Geometry(String),
    /// Operators of different dimension were combined.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    /// Floating-point breakdown (NaN/inf, failed quadrature, ...).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A truncation or convergence guard tripped.
    #[error("convergence error: {0}")]
    Convergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
