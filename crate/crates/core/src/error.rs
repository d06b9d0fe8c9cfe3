use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("frame error: {0}")]
    Frame(String),
    #[error("compatibility error: {0}")]
    Compatibility(String),
    #[error("skewness error: {0}")]
    Skewness(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("type error: {0}")]
    Type(String),
    #[error("invalid curvature tensor: {0}")]
    InvalidCurvature(String),
    #[error("convention mismatch: {0}")]
    ConventionMismatch(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("metric error: {0}")]
    Metric(String),
    #[error("conditioning error: {0}")]
    Conditioning(String),
    #[error("finite-difference quality error: {0}")]
    FiniteDifferenceQuality(String),
}
