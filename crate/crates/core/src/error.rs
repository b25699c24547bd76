use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum HodgeError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed filtration: {0}")]
    MalformedFiltration(String),

    #[error("not a mixed Hodge structure: {0}")]
    NotAnMhs(String),

    #[error("not oriented: {0}")]
    NotOriented(String),

    #[error("delta^(r,r)(e) is not proportional to the bottom generator (residual {0:e})")]
    ZeroBottomPairing(f64),

    #[error("not a generalized biextension: {0}")]
    NotGeneralizedBiextension(String),

    #[error("not a morphism of mixed Hodge structures: {0}")]
    NotAMorphism(String),

    #[error("morphism is not injective on the extreme weight pieces")]
    NotInjectiveOnEnds,

    #[error("splitting iteration did not converge (residual {0:e})")]
    NoConvergence(f64),

    #[error("block of type ({0},{1}) is not in Lambda^(-1,-1) of the reference structure")]
    InvalidBlockType(i32, i32),

    #[error("invalid biextension spec: {0}")]
    InvalidSpec(String),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("relative weight filtration does not exist: {0}")]
    DoesNotExist(String),

    #[error("Deligne system construction failed: {0}")]
    ConstructionFailed(String),

    #[error("variation is not Hodge-Tate")]
    NotHodgeTate,

    #[error("weight length {0} is too small (need at least 4)")]
    LengthTooSmall(i32),

    #[error("invalid variation: {0}")]
    InvalidVariation(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("fiber {index} of the path is invalid: {source}")]
    PathPoint { index: usize, source: Box<HodgeError> },

    #[error("unsupported precision: {0} bits (supported: 53, 106)")]
    UnsupportedPrecision(u32),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HodgeError>;
