use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("degenerate triangle: an adjacent side has vanishing sine")]
    DegenerateTriangle,

    #[error("normalized curvature must lie in [-1, 1], got {0}")]
    CurvatureOutOfRange(f64),

    #[error("boundary radius must be positive and finite, got {0}")]
    InvalidBoundary(f64),

    #[error("scene parse error at line {line}, column {column}: {message}")]
    SceneParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid scene field `{field}`: {message}")]
    SceneValidation { field: String, message: String },

    #[error("unknown input action `{0}`")]
    UnknownAction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::SceneValidation {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
