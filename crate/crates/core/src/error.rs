use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be between 1 and {max}, got {got}")]
    Dimension { got: usize, max: usize },

    #[error("side {axis} has length {side}; sides must be even and at least 4")]
    Side { axis: usize, side: usize },

    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("vertex set is empty")]
    EmptySet,

    #[error("vertex sets live on different domains")]
    DomainMismatch,

    #[error("color {color} at position {position} is out of range for {k} colors")]
    ColorRange { position: usize, color: usize, k: usize },

    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },

    #[error("cube labeling is not surjective onto {colors} colors (missing {missing:?})")]
    NotSurjective { colors: usize, missing: Vec<u8> },

    #[error("the labeling is not {k}-polychromatic: cube at {witness:?} sees colors {colors:?}")]
    NotPolychromatic {
        k: usize,
        witness: Vec<usize>,
        colors: Vec<u8>,
    },

    #[error("coloring {index} is not a proper 2-coloring in direction {index}")]
    ImproperTuple { index: usize },

    #[error("tuple is only {n}-fold invariant; directions {directions:?} are not orthogonally invariant")]
    InsufficientInvariance { n: usize, directions: Vec<usize> },

    #[error("sizing: {0}")]
    Sizing(String),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    #[error("invalid toast: {0}")]
    InvalidToast(String),

    #[error("unknown piece id {0}")]
    UnknownPiece(usize),

    #[error("search space guard: {0}")]
    Infeasible(String),

    #[error("unsupported format version {got} (expected {expected})")]
    FormatVersion { got: u32, expected: u32 },

    #[error("render: {0}")]
    Render(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
