use thiserror::Error;

/// Errors surfaced by tile operations, planning and predictors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two tiles fed to the same MMA have different dimensions.
    #[error("tile dimensions differ: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A tile dimension below the minimum the reduction can work with.
    #[error("tile dimension must be at least 2, got {m}")]
    InvalidTileDim { m: usize },

    /// Step predictions are defined for problems of at least two elements.
    #[error("step prediction needs a problem size of at least 2, got {n}")]
    ProblemTooSmall { n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
