use num_complex::Complex64;

use super::vector::inner_slices;
use super::{herm_eig, CMatrix, CVector, LinalgError};

/// Thin singular value decomposition with `min(rows, cols)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    pub left: Vec<CVector>,
    pub right: Vec<CVector>,
}

const RANK_TOL: f64 = 1e-12;

/// SVD through the Hermitian eigenproblem of `A* A`.
///
/// Right vectors are eigenvectors of `A* A`; singular values are recomputed as
/// `||A v_i||`, and left vectors are `A v_i / s_i`. Triplets with
/// `s_i ≤ 1e-12 s_1` get `s_i = 0` and a Gram-Schmidt completed left vector.
pub fn svd(a: &CMatrix) -> Result<SvdResult, LinalgError> {
    let gram = a.adjoint().matmul(a)?;
    let eig = herm_eig(&gram)?;
    let k = a.rows().min(a.cols());

    let mut triplets: Vec<(f64, CVector, Vec<Complex64>)> = eig
        .eigenvectors
        .into_iter()
        .map(|v| {
            let av = a.apply(v.as_slice());
            let s = av.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (s, v, av)
        })
        .collect();
    triplets.sort_by(|x, y| y.0.total_cmp(&x.0));
    triplets.truncate(k);

    let s1 = triplets.first().map_or(0.0, |t| t.0);
    let mut singular_values = Vec::with_capacity(k);
    let mut left: Vec<CVector> = Vec::with_capacity(k);
    let mut right = Vec::with_capacity(k);
    for (s, v, av) in triplets {
        if s > RANK_TOL * s1 && s > 0.0 {
            let inv = Complex64::new(1.0 / s, 0.0);
            left.push(CVector::from_vec_unchecked(av.into_iter().map(|z| z * inv).collect()));
            singular_values.push(s);
        } else {
            left.push(complete_orthonormal(&left, a.rows()));
            singular_values.push(0.0);
        }
        right.push(v);
    }
    Ok(SvdResult {
        singular_values,
        left,
        right,
    })
}

/// A unit vector orthogonal to every vector in `basis`, built by
/// Gram-Schmidt from the standard basis vector that survives best.
fn complete_orthonormal(basis: &[CVector], dim: usize) -> CVector {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for i in 0..dim {
        let mut w = CVector::basis(dim, i).into_inner();
        // twice for numerical orthogonality
        for _ in 0..2 {
            for b in basis {
                let proj = inner_slices(b.as_slice(), &w);
                for (wj, bj) in w.iter_mut().zip(b.iter()) {
                    *wj -= proj * bj;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, w));
        }
    }
    let (norm, w) = best.expect("dimension is positive");
    let inv = Complex64::new(1.0 / norm, 0.0);
    CVector::from_vec_unchecked(w.into_iter().map(|z| z * inv).collect())
}
