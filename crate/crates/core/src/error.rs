use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Reasons why six plane points fail to be in general position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralPositionFailure {
    /// Two of the points coincide (1-based indices).
    Repeated(usize, usize),
    /// Three points on a line (1-based indices).
    Collinear(usize, usize, usize),
    /// All six points on a conic.
    Conic,
}

impl std::fmt::Display for GeneralPositionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeneralPositionFailure::Repeated(a, b) => write!(f, "repeated points {{{a},{b}}}"),
            GeneralPositionFailure::Collinear(a, b, c) => write!(f, "collinear {{{a},{b},{c}}}"),
            GeneralPositionFailure::Conic => write!(f, "conic"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over the base field")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    SpecMismatch(String, String),
    #[error("no primitive {n}-th root of unity in {field}")]
    NoSuchRoot { n: u64, field: String },
    #[error("unsupported field operation: {0}")]
    UnsupportedField(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("not a sixer")]
    NotASixer,
    #[error("surface is not smooth")]
    NotSmooth,
    #[error("configuration mismatch: {0}")]
    ConfigurationMismatch(String),
    #[error("matrix is not an automorphism of the surface")]
    NotAnAutomorphism,
    #[error("points not in general position: {0}")]
    NotGeneralPosition(GeneralPositionFailure),
    #[error("identity failure: {0}")]
    IdentityFailure(String),
    #[error("not a determinantal representation")]
    NotADeterminantalRep,
    #[error("cube root unavailable; try {suggestion}")]
    CubeRootUnavailable { suggestion: String },
    #[error("surface is not split: {found} rational lines")]
    NotSplit { found: usize },
    #[error("no solution in field: {0}")]
    NoSolutionInField(String),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
