use thiserror::Error;

/// Errors raised by the numeric and exact layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument must be positive, got 0")]
    ZeroArgument,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("level must be prime, got {0}")]
    NotPrime(u64),
    #[error("eigenvalue separation failed at level {level}: gap {gap:.3e}; raise working precision")]
    EigenSeparation { level: u64, gap: f64 },
    #[error("need {needed} coefficients but only {available} are available")]
    InsufficientCoefficients { needed: usize, available: usize },
    #[error("root number of form {form} is indeterminate")]
    IndeterminateSign { form: usize },
    #[error("c-sum truncation needs c_max = {needed} beyond the hard cap {cap}")]
    TailCapExceeded { needed: u64, cap: u64 },
    #[error("harmonic weights rejected: {0}")]
    WeightFit(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("1/4 - lambda1 = {0} is not the square of a rational")]
    NonSquareDiscriminant(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
