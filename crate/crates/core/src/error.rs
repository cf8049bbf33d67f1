use thiserror::Error;

use crate::linalg::LinalgError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("d must be >= 1")]
    EmptyTuple,
    #[error("matrix {index} is {rows}x{cols}, expected {n}x{n}")]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        n: usize,
    },
    #[error("tuple shapes differ: (d={left_d}, n={left_n}) vs (d={right_d}, n={right_n})")]
    TupleMismatch {
        left_d: usize,
        left_n: usize,
        right_d: usize,
        right_n: usize,
    },
    #[error("expected {expected} coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("{0}")]
    ZeroTuple(&'static str),
    #[error("matrix size n = {n} exceeds the sampling oracle limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("empty point set")]
    EmptyPointSet,
    #[error("points have inconsistent dimension: expected {expected}, found {found}")]
    PointDimension { expected: usize, found: usize },
    #[error("point {index} has a non-finite coordinate")]
    NonFinitePoint { index: usize },
    #[error("subspace basis is empty")]
    EmptyBasis,
    #[error("basis matrix {index} is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    BasisShape {
        index: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
