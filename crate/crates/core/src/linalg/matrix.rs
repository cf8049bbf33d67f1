use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::vector::inner_slices;
use super::{CVector, LinalgError, ZERO};

/// Row-major dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|z| !z.is_finite()) {
            return Err(LinalgError::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self::from_diag(&diag.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Stacks matrices with a common column count on top of each other.
    pub fn vstack(blocks: &[CMatrix]) -> Result<Self, LinalgError> {
        let first = blocks.first().ok_or(LinalgError::Empty)?;
        let cols = first.cols;
        let mut data = Vec::with_capacity(blocks.iter().map(|b| b.data.len()).sum());
        let mut rows = 0;
        for block in blocks {
            if block.cols != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    found: block.cols,
                });
            }
            rows += block.rows;
            data.extend_from_slice(&block.data);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector::from_vec_unchecked((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &CMatrix) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &CVector) -> Result<CVector, LinalgError> {
        if self.cols != x.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(CVector::from_vec_unchecked(self.apply(x.as_slice())))
    }

    pub(crate) fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `⟨x|M x⟩ = x* M x`.
    pub fn quadratic_form(&self, x: &CVector) -> Result<Complex64, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.cols != x.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self.form(x.as_slice()))
    }

    pub(crate) fn form(&self, x: &[Complex64]) -> Complex64 {
        inner_slices(x, &self.apply(x))
    }

    pub fn add(&self, rhs: &CMatrix) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &CMatrix) -> Result<Self, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    fn zip_with(
        &self,
        rhs: &CMatrix,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `tr(self* rhs)`, the Frobenius inner product (conjugate-linear in `self`).
    pub fn frobenius_inner(&self, rhs: &CMatrix) -> Result<Complex64, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(inner_slices(&self.data, &rhs.data))
    }

    /// `||H - H*||_F`.
    pub fn hermitian_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl From<CMatrix> for Vec<Vec<[f64; 2]>> {
    fn from(m: CMatrix) -> Self {
        (0..m.rows)
            .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for CMatrix {
    type Error = LinalgError;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> Result<Self, Self::Error> {
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .collect();
        CMatrix::from_rows(&rows)
    }
}

/// The rank-one operator `y ↦ ⟨x|y⟩ x`, i.e. the matrix `x x*` with entries
/// `x_i conj(x_j)`.
pub fn rank_one(x: &CVector) -> CMatrix {
    let n = x.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = x[i] * x[j].conj();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.sub(b).unwrap().max_abs() <= tol
    }

    #[test]
    fn rank_one_examples() {
        let e1 = CVector::basis(2, 0);
        assert_eq!(rank_one(&e1), CMatrix::from_real_diag(&[1.0, 0.0]));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = CVector::from_real(&[s, s]).unwrap();
        let half = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(close(&rank_one(&x), &half, 1e-15));

        let y = CVector::new(vec![c64(s, 0.0), c64(0.0, s)]).unwrap();
        let expected = CMatrix::from_rows(&[
            vec![c64(0.5, 0.0), c64(0.0, -0.5)],
            vec![c64(0.0, 0.5), c64(0.5, 0.0)],
        ])
        .unwrap();
        assert!(close(&rank_one(&y), &expected, 1e-15));
    }

    #[test]
    fn rank_one_is_hermitian_with_trace_norm_squared() {
        let x = CVector::new(vec![c64(0.3, -1.2), c64(2.0, 0.5), c64(-0.7, 0.1)]).unwrap();
        let p = rank_one(&x);
        assert!(p.hermitian_residual() < 1e-14);
        assert!((p.trace().re - x.norm_sqr()).abs() < 1e-13);
        assert!(p.trace().im.abs() < 1e-15);
    }

    #[test]
    fn shape_errors() {
        let a = CMatrix::zeros(2, 3);
        let b = CMatrix::zeros(2, 2);
        assert!(a.matmul(&b).is_err());
        assert!(a.add(&b).is_err());
        assert!(matches!(
            a.quadratic_form(&CVector::zeros(3)),
            Err(LinalgError::NotSquare { .. })
        ));
        assert!(CMatrix::new(2, 2, vec![ZERO; 3]).is_err());
        assert!(matches!(
            CMatrix::new(1, 2, vec![ZERO, c64(f64::INFINITY, 0.0)]),
            Err(LinalgError::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn vstack_and_adjoint() {
        let a = CMatrix::identity(2);
        let b = CMatrix::from_rows(&vec![vec![c64(0.0, 1.0), c64(2.0, 0.0)]; 2]).unwrap();
        let s = CMatrix::vstack(&[a, b.clone()]).unwrap();
        assert_eq!((s.rows(), s.cols()), (4, 2));
        assert_eq!(s[(2, 0)], c64(0.0, 1.0));
        assert_eq!(b.adjoint()[(0, 1)], c64(0.0, -1.0));
    }
}
