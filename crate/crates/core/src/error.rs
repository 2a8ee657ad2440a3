use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScatterError {
    #[error("wavenumber k = 0 is degenerate for plane-wave matching")]
    DegenerateK,

    #[error("integration produced a non-finite state at x = {x}")]
    NonFiniteState { x: f64 },

    #[error("left and right transmission amplitudes disagree at k = {k} (relative difference {relative:e})")]
    TransmissionMismatch { k: f64, relative: f64 },

    #[error("invalid solver configuration: {0}")]
    InvalidSolver(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid scan range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, ScatterError>;
