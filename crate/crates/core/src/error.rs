use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("rank-deficient matrix: singular value {sigma:.3e} below tolerance {tol:.3e}")]
    RankDeficient { sigma: f64, tol: f64 },

    #[error("zero matrix has no singular entropy")]
    ZeroMatrix,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// True for failures of a numerical routine on otherwise well-formed input.
    /// A non-unitary argument is an input error, not a numerical one.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::RankDeficient { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
