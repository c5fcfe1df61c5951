use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unsupported dimension n = {0} (need n >= {1})")]
    UnsupportedDimension(usize, usize),
    #[error("matrix is not in SO0(1,n): residual {0:.3e}")]
    NotInGroup(f64),
    #[error("matrix is not in so(1,n): residual {0:.3e}")]
    NotInAlgebra(f64),
    #[error("logarithm undefined: {0}")]
    LogDomain(String),
    #[error("linearly dependent inputs")]
    Dependent,
    #[error("point is not on the hyperboloid: residual {0:.3e}")]
    NotOnHyperboloid(f64),
    #[error("degenerate triangle")]
    DegenerateTriangle,
    #[error("coincident points")]
    CoincidentPoints,
    #[error("start element does not lie over the curve start (distance {0:.3e})")]
    StartMismatch(f64),
    #[error("curve is not a loop: gap {0:.3e}")]
    NotALoop(f64),
    #[error("non-finite value while integrating")]
    NonFinite,
    #[error("curves have mismatched domains")]
    DomainMismatch,
    #[error("rank-deficient Jacobian at ({0:.4}, {1:.4})")]
    RankDeficient(f64, f64),
    #[error("subdivision step {0} outside the supported range 0..=4")]
    StepOutOfRange(usize),
    #[error("address {0} not found in level")]
    AddressNotFound(String),
    #[error("grid point {0} outside the domain of {1}")]
    GridDomain(String, &'static str),
    #[error("zero bracket: degenerate tangent plane")]
    ZeroBracket,
    #[error("invalid disk specification: {0}")]
    InvalidDisk(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
