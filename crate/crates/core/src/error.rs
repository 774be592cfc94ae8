use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero vector does not determine a direction")]
    ZeroVector,

    #[error("coefficient matrix is not symmetric")]
    NotSymmetric,

    #[error("squared coefficient of pivot axis {0} vanishes")]
    ZeroPivot(char),

    #[error("every pivot axis has a vanishing squared coefficient")]
    AllPivotsDegenerate,

    #[error("expected a {expected} cone, got {found}")]
    WrongClassification {
        expected: &'static str,
        found: String,
    },

    #[error("seed ({m}, {n}, {p}) does not satisfy the form identity")]
    InvalidSeed { m: String, n: String, p: String },

    #[error("({y}, {z}, {u}) does not satisfy the discriminant identity")]
    DiscriminantMismatch { y: String, z: String, u: String },

    #[error("negative input: {0}")]
    Negative(String),

    #[error("right-hand side multiplier must be nonzero")]
    ZeroMultiplier,

    #[error("matrix is not a toral automorphism: {0}")]
    NotAutomorphism(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("cannot parse `{0}` as an exact rational (use p or p/q)")]
    Parse(String),

    #[error("expected an integer, got `{0}`")]
    NotInteger(String),

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
