use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dyadic exponent overflow")]
    ExponentOverflow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,

    #[error("a polynomial of degree at least 1 is required")]
    ConstantPolynomial,

    #[error("gcd of two zero polynomials is undefined")]
    BothZero,

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("invalid interval: lower endpoint exceeds upper endpoint")]
    InvalidInterval,

    #[error("degenerate interval: width must be positive")]
    DegenerateInterval,

    #[error("subdivision exceeded the depth cap of {cap}")]
    DepthCapExceeded { cap: u32 },

    #[error("root finder did not converge for {poly}")]
    NonConvergence { poly: String },

    #[error("point {0} coincides with a root")]
    AtRoot(f64),

    #[error("empty input")]
    EmptyInput,

    #[error("harmonic mean requires strictly positive entries, got {0}")]
    NonPositive(f64),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("invalid benchmark parameters: {0}")]
    InvalidParameters(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
