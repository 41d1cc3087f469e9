use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("variety is degenerate: stacked tangent spaces never fill the ambient space ({0})")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error("numerical fit did not converge (best relative residual {best_residual:e})")]
    FitFailed { best_residual: f64 },

    #[error("two-point split failed after {attempts} attempts (best relative residual {best_residual:e})")]
    SplitFailed { attempts: usize, best_residual: f64 },

    #[error("root refinement failed: {0}")]
    RootFinding(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
