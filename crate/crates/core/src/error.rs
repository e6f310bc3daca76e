use thiserror::Error;

/// Errors raised by the exact kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("Cayley-Dickson level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Lie closure exceeded the safety bound of {0} dimensions")]
    ClosureBound(usize),

    #[error("Clifford system fails verification: {0}")]
    InvalidSystem(String),

    #[error("form matrix entries are not homogeneous 2-forms")]
    NotHomogeneous,

    #[error("point is not on the unit sphere")]
    OffSphere,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
