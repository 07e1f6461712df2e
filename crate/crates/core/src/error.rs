use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("presentation has no generators")]
    Empty,

    #[error("generators are not minimal: generator {divisor} divides generator {multiple}")]
    NotMinimal { divisor: usize, multiple: usize },

    #[error(
        "generator {generator} has total degree {degree}; the defining ideal must lie in the \
         square of the maximal ideal (I ⊆ 𝔪²), so every generator needs degree at least 2"
    )]
    LowDegree { generator: usize, degree: u32 },

    #[error("unknown variable `{0}` (not listed in `variables`)")]
    UnknownVariable(String),

    #[error("variable `{0}` is listed more than once")]
    DuplicateVariable(String),

    #[error("{what}: {size} exceeds the supported bound {bound}")]
    SizeBound {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("expected a point with {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid field specification: {0}")]
    InvalidField(String),

    #[error("coordinate {0} is not invertible in the chosen field")]
    NotInvertible(String),

    #[error("invalid sampling configuration: {0}")]
    InvalidConfig(String),

    #[error("component is not connected in the GCD graph")]
    Disconnected,

    #[error("GCD graph matches no catalog entry (this should be impossible)")]
    CatalogMiss,

    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),
}
