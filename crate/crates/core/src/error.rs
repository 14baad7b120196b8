use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input: {0}")]
    EmptyInput(String),
    #[error("unbounded polyhedron where a polytope was required")]
    Unbounded,
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("class is not effective: {0}")]
    NotEffective(String),
    #[error("invalid contraction: {0}")]
    InvalidContraction(String),
    #[error("cells {0} and {1} are not in face relation")]
    NotAdjacent(usize, usize),
    #[error("cell {0} is not a codimension-one wall")]
    NotAWall(usize),
    #[error("not a Mori fibre space: {0}")]
    NotMoriFibreSpace(String),
    #[error("slice construction failed after {attempts} attempts: {condition}")]
    RetryExhausted { attempts: usize, condition: String },
    #[error("size limit exceeded: {what} is {found}, limit {limit}")]
    LimitExceeded {
        what: String,
        found: usize,
        limit: usize,
    },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::EmptyInput(_) => "empty-input",
            Error::Unbounded => "unbounded",
            Error::InvalidFan(_) => "invalid-fan",
            Error::Unsupported(_) => "unsupported",
            Error::NotEffective(_) => "not-effective",
            Error::InvalidContraction(_) => "invalid-contraction",
            Error::NotAdjacent(..) => "not-adjacent",
            Error::NotAWall(_) => "not-a-wall",
            Error::NotMoriFibreSpace(_) => "not-a-mori-fibre-space",
            Error::RetryExhausted { .. } => "retry-exhausted",
            Error::LimitExceeded { .. } => "limit-exceeded",
            Error::Internal(_) => "internal-error",
            Error::Parse(_) => "parse-error",
            Error::Io(_) => "io-error",
            Error::Usage(_) => "usage-error",
        }
    }
}
