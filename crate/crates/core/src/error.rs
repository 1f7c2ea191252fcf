use thiserror::Error;

/// Errors raised by the engine. Check failures are never errors; they are
/// reported through the relation and certificate reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("both polynomials are zero")]
    ZeroPolynomials,
    #[error("state is not homogeneous")]
    NotHomogeneous,
    #[error("state mixes lattice cosets")]
    MixedCoset,
    #[error("lattice label {0} is not in (1/2k)Z")]
    BadLabel(String),
    #[error("mode {0} is incompatible with the sector")]
    BadMode(String),
    #[error("vertex operators are only defined for states on integral labels")]
    NonIntegralSource,
    #[error("k must be at least {min}, got {k}")]
    BadK { k: u32, min: u32 },
    #[error("twisted vertex operators for e^(m alpha) with |m| = {0} are not supported")]
    UnsupportedTwist(i64),
    #[error("module {0} is not available here")]
    WrongModule(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("cutoff {cutoff} is below the target's top weight {top}")]
    CutoffTooSmall { cutoff: i64, top: String },
    #[error("state is not theta-invariant")]
    NotThetaInvariant,
    #[error("empty input")]
    EmptyInput,
    #[error("mismatched k: {0} vs {1}")]
    KMismatch(u32, u32),
}

pub type Result<T> = std::result::Result<T, Error>;
