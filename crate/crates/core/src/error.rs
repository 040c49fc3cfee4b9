use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty measure")]
    EmptyMeasure,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("non-simple zero at t = {0}")]
    NonSimpleZero(f64),
    #[error("pole: z = {0} is a support point")]
    Pole(f64),
    #[error("{0} is not a zero of the model")]
    NotAZero(f64),
    #[error("window too small: tolerance {tol:e} needs a window of at least {required}")]
    WindowTooSmall { tol: f64, required: f64 },
    #[error("density gap too small in window (at x = {at})")]
    DensityGap { at: f64 },
    #[error("support mismatch: {0}")]
    SupportMismatch(String),
    #[error("division by zero derivative at t = {0}")]
    ZeroDerivative(f64),
    #[error("no admissible u on the search grid (excluded length {excluded})")]
    NoAdmissibleU { excluded: f64 },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
