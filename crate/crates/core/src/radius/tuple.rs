use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, ZERO};

/// An ordered tuple `(A_1, ..., A_d)` of `n x n` complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatTuple {
    n: usize,
    matrices: Vec<CMatrix>,
}

impl MatTuple {
    pub fn new(matrices: Vec<CMatrix>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptyTuple)?;
        let n = first.rows();
        for (index, m) in matrices.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::ShapeMismatch {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    n,
                });
            }
        }
        Ok(Self { n, matrices })
    }

    pub fn single(m: CMatrix) -> Result<Self> {
        Self::new(vec![m])
    }

    pub fn zeros(n: usize, d: usize) -> Self {
        assert!(n > 0 && d > 0);
        Self {
            n,
            matrices: vec![CMatrix::zeros(n, n); d],
        }
    }

    pub fn d(&self) -> usize {
        self.matrices.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn get(&self, k: usize) -> &CMatrix {
        &self.matrices[k]
    }

    pub fn is_zero(&self) -> bool {
        self.matrices.iter().all(CMatrix::is_zero)
    }

    pub fn same_shape(&self, other: &MatTuple) -> Result<()> {
        if self.d() != other.d() || self.n != other.n {
            return Err(Error::TupleMismatch {
                left_d: self.d(),
                left_n: self.n,
                right_d: other.d(),
                right_n: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MatTuple) -> Result<Self> {
        self.same_shape(other)?;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| a.add(b))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Self { n: self.n, matrices })
    }

    pub fn sub(&self, other: &MatTuple) -> Result<Self> {
        self.same_shape(other)?;
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Every component multiplied by the same scalar.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            n: self.n,
            matrices: self.matrices.iter().map(|m| m.scaled(factor)).collect(),
        }
    }

    /// `A + t B` for a common complex scalar `t`.
    pub fn shifted(&self, t: Complex64, direction: &MatTuple) -> Result<Self> {
        self.add(&direction.scaled(t))
    }

    /// `A + λB` with one coefficient per component.
    pub fn shifted_by(&self, lambda: &ComplexCoefficients, direction: &MatTuple) -> Result<Self> {
        self.add(&scale_tuple(lambda, direction)?)
    }

    /// `(⟨x|A_1 x⟩, ..., ⟨x|A_d x⟩)`.
    pub fn witnesses(&self, x: &CVector) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.n);
        self.matrices.iter().map(|m| m.form(x.as_slice())).collect()
    }

    /// `(||A_1 x||^2 + ... + ||A_d x||^2)^{1/2}`.
    pub fn stacked_norm_at(&self, x: &CVector) -> f64 {
        self.matrices
            .iter()
            .map(|m| m.apply(x.as_slice()).iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    /// The `dn x n` matrix with `A_1, ..., A_d` stacked vertically.
    pub fn stacked(&self) -> CMatrix {
        CMatrix::vstack(&self.matrices).expect("components share a shape")
    }

    /// `Σ λ_k A_k`.
    pub fn combination(&self, lambda: &[Complex64]) -> CMatrix {
        debug_assert_eq!(lambda.len(), self.d());
        let mut out = CMatrix::zeros(self.n, self.n);
        for (m, &l) in self.matrices.iter().zip(lambda) {
            if l != ZERO {
                out = out.add(&m.scaled(l)).expect("same shape");
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrices
            .iter()
            .map(|m| m.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// `(U* A_1 U, ..., U* A_d U)`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        let ua = u.adjoint();
        let matrices = self
            .matrices
            .iter()
            .map(|m| ua.matmul(m).and_then(|p| p.matmul(u)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(matrices)
    }
}

/// Coefficients `λ = (λ_1, ..., λ_d)` used to form `λB = (λ_1 B_1, ..., λ_d B_d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct ComplexCoefficients(Vec<Complex64>);

impl ComplexCoefficients {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidConfig("non-finite coefficient".into()));
        }
        Ok(Self(entries))
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![ZERO; d])
    }

    pub fn ones(d: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Real coordinates `(re_1, im_1, re_2, im_2, ...)`.
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn from_real(coords: &[f64]) -> Self {
        debug_assert!(coords.len() % 2 == 0);
        Self(
            coords
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }
}

impl From<ComplexCoefficients> for Vec<[f64; 2]> {
    fn from(c: ComplexCoefficients) -> Self {
        c.0.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl TryFrom<Vec<[f64; 2]>> for ComplexCoefficients {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// `λB = (λ_1 B_1, ..., λ_d B_d)`.
pub fn scale_tuple(lambda: &ComplexCoefficients, tuple: &MatTuple) -> Result<MatTuple> {
    if lambda.len() != tuple.d() {
        return Err(Error::CoefficientCount {
            expected: tuple.d(),
            found: lambda.len(),
        });
    }
    Ok(MatTuple {
        n: tuple.n,
        matrices: tuple
            .matrices
            .iter()
            .zip(lambda.as_slice())
            .map(|(m, &l)| m.scaled(l))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn scale_tuple_examples() {
        let b = MatTuple::new(vec![CMatrix::identity(2), CMatrix::from_real_diag(&[1.0, -1.0])])
            .unwrap();
        assert!(scale_tuple(&ComplexCoefficients::zeros(2), &b).unwrap().is_zero());
        assert_eq!(scale_tuple(&ComplexCoefficients::ones(2), &b).unwrap(), b);

        let i = MatTuple::single(CMatrix::identity(2)).unwrap();
        let scaled = scale_tuple(&ComplexCoefficients::new(vec![c64(0.0, 1.0)]).unwrap(), &i).unwrap();
        assert_eq!(scaled.get(0)[(1, 1)], c64(0.0, 1.0));
        assert_eq!(scaled.get(0)[(0, 1)], ZERO);
    }

    #[test]
    fn scale_tuple_rejects_wrong_length() {
        let b = MatTuple::zeros(2, 2);
        assert!(matches!(
            scale_tuple(&ComplexCoefficients::zeros(3), &b),
            Err(Error::CoefficientCount { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn construction_validates_shapes() {
        assert_eq!(MatTuple::new(vec![]).unwrap_err(), Error::EmptyTuple);
        let err = MatTuple::new(vec![CMatrix::identity(2), CMatrix::identity(3)]).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { index: 1, .. }));
        assert!(MatTuple::new(vec![CMatrix::zeros(2, 3)]).is_err());
    }

    #[test]
    fn witnesses_and_stacked_norm() {
        let a = MatTuple::new(vec![CMatrix::from_real_diag(&[2.0, 0.0]), CMatrix::from_real_diag(&[0.0, 1.0])])
            .unwrap();
        let e1 = CVector::basis(2, 0);
        assert_eq!(a.witnesses(&e1), vec![c64(2.0, 0.0), ZERO]);
        assert!((a.stacked_norm_at(&e1) - 2.0).abs() < 1e-15);
        assert_eq!(a.stacked().rows(), 4);
    }
}
