use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{LinalgError, ZERO};

/// A finite, non-empty complex vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct CVector(Vec<Complex64>);

impl CVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::Empty);
        }
        if let Some(index) = entries.iter().position(|z| !z.is_finite()) {
            return Err(LinalgError::NonFinite { index });
        }
        Ok(Self(entries))
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!(!entries.is_empty());
        Self(entries)
    }

    pub fn from_real(entries: &[f64]) -> Result<Self, LinalgError> {
        Self::new(entries.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        assert!(i < n, "basis index {i} out of range for length {n}");
        let mut entries = vec![ZERO; n];
        entries[i] = Complex64::new(1.0, 0.0);
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        Self(vec![ZERO; n])
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

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        Some(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * factor).collect())
    }

    pub fn axpy(&self, alpha: Complex64, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(
            self.0
                .iter()
                .zip(other.iter())
                .map(|(a, b)| a + alpha * b)
                .collect(),
        )
    }

    /// Representative of the phase class `{e^{iφ} x}`: the first entry of
    /// (numerically) maximal modulus is made real and positive.
    pub fn canonical_phase(&self) -> Self {
        let max = self.0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return self.clone();
        }
        let pivot = self
            .0
            .iter()
            .find(|z| z.norm() >= max * (1.0 - 1e-9))
            .copied()
            .unwrap_or(ZERO);
        let phase = pivot.conj() / pivot.norm();
        self.scaled(phase)
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, index: usize) -> &Complex64 {
        &self.0[index]
    }
}

impl From<CVector> for Vec<[f64; 2]> {
    fn from(v: CVector) -> Self {
        v.0.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl TryFrom<Vec<[f64; 2]>> for CVector {
    type Error = LinalgError;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self, Self::Error> {
        CVector::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// `⟨u|v⟩ = Σ conj(u_i) v_i`.
pub fn inner(u: &CVector, v: &CVector) -> Result<Complex64, LinalgError> {
    if u.len() != v.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(inner_slices(u.as_slice(), v.as_slice()))
}

pub(crate) fn inner_slices(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
