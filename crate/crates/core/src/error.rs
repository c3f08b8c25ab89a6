//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of the engine.
///
/// Variants split into two families: precondition violations
/// (the caller asked for something outside the domain of the formula)
/// and numerical failures (the algorithm could not meet its tolerance).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("caustic: {0}")]
    Caustic(String),
    #[error("total internal reflection (n_a sin(theta_a) / n_b = {0})")]
    TotalInternalReflection(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resonance pole: {0}")]
    Pole(String),
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("grid too coarse: {0}")]
    Nyquist(String),
    #[error("boundary leakage: {0}")]
    Leakage(String),
    #[error("tolerance not met: {0}")]
    Tolerance(String),
    #[error("Riccati solution blew up at t = {t}")]
    BlowUp { t: f64 },
    #[error("backend disagreement: {0}")]
    Inconsistent(String),
    #[error("io: {0}")]
    Io(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numerical,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Leakage(_)
            | Error::Tolerance(_)
            | Error::BlowUp { .. }
            | Error::Inconsistent(_) => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
