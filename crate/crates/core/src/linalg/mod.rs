//! Dense complex linear algebra at desk scale.
//!
//! Everything here is self-contained: complex vectors and matrices stored as
//! `Complex64`, a cyclic Jacobi eigensolver for Hermitian matrices, and an SVD
//! built on top of it. Inner products are conjugate-linear in the first
//! argument throughout the crate.

mod eig;
mod matrix;
mod svd;
mod vector;

pub(crate) use eig::top_eigenvalue_in_place;
pub use eig::{herm_eig, top_eigenvalue, EigResult};
pub use matrix::{rank_one, CMatrix};
pub use svd::{svd, SvdResult};
pub use vector::{inner, CVector};

pub use num_complex::Complex64;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (||H - H*||_F = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },
    #[error("empty vector or matrix")]
    Empty,
}

pub(crate) const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) const ZERO: Complex64 = c64(0.0, 0.0);
