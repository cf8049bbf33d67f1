use num_complex::Complex64;

use super::{CMatrix, CVector, LinalgError, ZERO};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVector>,
}

const HERMITIAN_TOL: f64 = 1e-10;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `h_pq` with a diagonal
/// unitary and then applies a real plane rotation, so the working matrix stays
/// Hermitian with a real diagonal.
pub fn herm_eig(h: &CMatrix) -> Result<EigResult, LinalgError> {
    check_hermitian(h)?;
    let n = h.rows();
    let (diag, vectors) = jacobi(h, true);
    let vectors = vectors.expect("vectors requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&j| {
            CVector::from_vec_unchecked((0..n).map(|i| vectors[i * n + j]).collect())
                .canonical_phase()
        })
        .collect();
    Ok(EigResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Largest eigenvalue of a Hermitian matrix. The caller guarantees the input
/// is Hermitian; closed forms are used for `n ≤ 3`.
pub fn top_eigenvalue(h: &CMatrix) -> f64 {
    debug_assert!(h.is_square());
    let mut scratch = h.as_slice().to_vec();
    top_eigenvalue_in_place(&mut scratch, h.rows())
}

/// [`top_eigenvalue`] on a row-major buffer that may be overwritten.
pub(crate) fn top_eigenvalue_in_place(a: &mut [Complex64], n: usize) -> f64 {
    match n {
        1 => a[0].re,
        2 => {
            let p = a[0].re;
            let q = a[3].re;
            0.5 * (p + q) + (0.5 * (p - q)).hypot(a[1].norm())
        }
        3 => top_eigenvalue_3x3(a),
        _ => {
            let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            jacobi_in_place(a, None, n, scale);
            (0..n).map(|i| a[i * n + i].re).fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// Trigonometric solution of the characteristic cubic.
fn top_eigenvalue_3x3(a: &[Complex64]) -> f64 {
    let (h00, h11, h22) = (a[0].re, a[4].re, a[8].re);
    let (h01, h02, h12) = (a[1], a[2], a[5]);
    let off = h01.norm_sqr() + h02.norm_sqr() + h12.norm_sqr();
    let q = (h00 + h11 + h22) / 3.0;
    let (b0, b1, b2) = (h00 - q, h11 - q, h22 - q);
    let p2 = b0 * b0 + b1 * b1 + b2 * b2 + 2.0 * off;
    if p2 <= 0.0 {
        return q;
    }
    let p = (p2 / 6.0).sqrt();
    let det = b0 * b1 * b2 + 2.0 * (h01 * h12 * h02.conj()).re
        - b0 * h12.norm_sqr()
        - b1 * h02.norm_sqr()
        - b2 * h01.norm_sqr();
    let r = (det / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    q + 2.0 * p * (r.acos() / 3.0).cos()
}

fn check_hermitian(h: &CMatrix) -> Result<(), LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL * h.frobenius_norm().max(1.0) {
        return Err(LinalgError::NotHermitian { residual });
    }
    Ok(())
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Returns the diagonal after convergence and, optionally, the accumulated
/// unitary (row-major, eigenvectors in columns).
fn jacobi(h: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<Vec<Complex64>>) {
    let n = h.rows();
    // symmetrize to remove rounding-level anti-Hermitian noise
    let mut a: Vec<Complex64> = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] = 0.5 * (h[(i, j)] + h[(j, i)].conj());
        }
    }
    let mut v = want_vectors.then(|| {
        let mut id = vec![ZERO; n * n];
        for i in 0..n {
            id[i * n + i] = Complex64::new(1.0, 0.0);
        }
        id
    });
    jacobi_in_place(&mut a, v.as_deref_mut(), n, h.frobenius_norm());
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    (diag, v)
}

fn jacobi_in_place(a: &mut [Complex64], mut v: Option<&mut [Complex64]>, n: usize, scale: f64) {
    let threshold = OFF_DIAGONAL_TOL * scale;
    if scale == 0.0 {
        return;
    }
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(a, n) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a, v.as_deref_mut(), n, p, q);
            }
        }
    }
}

fn rotate(a: &mut [Complex64], v: Option<&mut [Complex64]>, n: usize, p: usize, q: usize) {
    let c = a[p * n + q];
    let r = c.norm();
    if r == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = (c / r).conj();
    let theta = 0.5 * (2.0 * r).atan2(aqq - app);
    let (sn, cs) = theta.sin_cos();

    let vpp = Complex64::new(cs, 0.0);
    let vpq = Complex64::new(sn, 0.0);
    let vqp = -sn * phase;
    let vqq = cs * phase;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * vpp + akq * vqp;
        a[k * n + q] = akp * vpq + akq * vqq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = vpp.conj() * apk + vqp.conj() * aqk;
        a[q * n + k] = vpq.conj() * apk + vqq.conj() * aqk;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = vkp * vpp + vkq * vqp;
            v[k * n + q] = vkp * vpq + vkq * vqq;
        }
    }
}
