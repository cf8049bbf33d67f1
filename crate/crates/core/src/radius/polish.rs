//! Second-order local refinement of `f(x) = Σ_k |⟨x|A_k x⟩|²` on the unit
//! sphere, in real coordinates `z = (Re x, Im x)`.

use num_complex::Complex64;

use super::MatTuple;
use crate::linalg::{herm_eig, CMatrix, CVector};

const MAX_STEPS: usize = 60;
const MAX_BACKTRACKS: usize = 40;

/// Real symmetric `M` with `zᵀ M z = ⟨x|H x⟩` for Hermitian `H`, row-major.
fn realify(h: &CMatrix) -> Vec<f64> {
    let n = h.rows();
    let m = 2 * n;
    let mut out = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            out[i * m + j] = z.re;
            out[i * m + n + j] = -z.im;
            out[(n + i) * m + j] = z.im;
            out[(n + i) * m + n + j] = z.re;
        }
    }
    out
}

/// `f(z) = Σ_j (zᵀ M_j z)²` with two forms per component: the Hermitian
/// and skew-Hermitian parts of `A_k` give the real and imaginary parts of
/// `⟨x|A_k x⟩`.
struct Quartic {
    dim: usize,
    forms: Vec<Vec<f64>>,
}

impl Quartic {
    fn new(a: &MatTuple) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let minus_half_i = Complex64::new(0.0, -0.5);
        let mut forms = Vec::with_capacity(2 * a.d());
        for m in a.matrices() {
            let adj = m.adjoint();
            let herm = m.add(&adj).expect("square").scaled(half);
            let skew = m.sub(&adj).expect("square").scaled(minus_half_i);
            forms.push(realify(&herm));
            forms.push(realify(&skew));
        }
        Self {
            dim: 2 * a.n(),
            forms,
        }
    }

    fn apply(&self, m: &[f64], z: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| m[i * self.dim..(i + 1) * self.dim].iter().zip(z).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.forms
            .iter()
            .map(|m| {
                let q = dot(z, &self.apply(m, z));
                q * q
            })
            .sum()
    }

    /// Value, Euclidean gradient and Euclidean Hessian (row-major).
    fn derivatives(&self, z: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let n = self.dim;
        let mut f = 0.0;
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        for m in &self.forms {
            let mz = self.apply(m, z);
            let q = dot(z, &mz);
            f += q * q;
            for i in 0..n {
                grad[i] += 4.0 * q * mz[i];
                for j in 0..n {
                    hess[i * n + j] += 8.0 * mz[i] * mz[j] + 4.0 * q * m[i * n + j];
                }
            }
        }
        (f, grad, hess)
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn normalize(z: &mut [f64]) -> bool {
    let norm = dot(z, z).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return false;
    }
    z.iter_mut().for_each(|v| *v /= norm);
    true
}

fn to_real(x: &CVector) -> Vec<f64> {
    x.iter().map(|z| z.re).chain(x.iter().map(|z| z.im)).collect()
}

fn to_complex(z: &[f64]) -> CVector {
    let n = z.len() / 2;
    CVector::new((0..n).map(|i| Complex64::new(z[i], z[n + i])).collect()).expect("finite unit vector")
}

/// Regularized Newton ascent from `x`. The phase direction `i·x`, along
/// which `f` is constant, is excluded from the step; every accepted step
/// strictly increases `f`, so the result is never worse than `x`.
pub(crate) fn polish(a: &MatTuple, x: &CVector) -> CVector {
    let quartic = Quartic::new(a);
    let n = quartic.dim;
    let mut z = to_real(x);
    if !normalize(&mut z) {
        return x.clone();
    }
    let mut f = quartic.value(&z);

    for _ in 0..MAX_STEPS {
        let (_, grad, hess) = quartic.derivatives(&z);
        let half = n / 2;
        let jz: Vec<f64> = (0..n).map(|i| if i < half { -z[half + i] } else { z[i - half] }).collect();
        let radial = dot(&z, &grad);
        let phase = dot(&jz, &grad);
        let g: Vec<f64> = (0..n).map(|i| grad[i] - radial * z[i] - phase * jz[i]).collect();
        let g_norm = dot(&g, &g).sqrt();
        if g_norm == 0.0 {
            break;
        }

        // Projected Riemannian Hessian; the normal and phase directions are
        // pushed far down the spectrum so that they carry no step.
        let proj = |i: usize, j: usize| {
            let id = if i == j { 1.0 } else { 0.0 };
            id - z[i] * z[j] - jz[i] * jz[j]
        };
        let mut shifted = hess.clone();
        for i in 0..n {
            shifted[i * n + i] -= radial;
        }
        let scale = 1.0 + hess.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    let pik = proj(i, k);
                    if pik == 0.0 {
                        continue;
                    }
                    for l in 0..n {
                        acc += pik * shifted[k * n + l] * proj(l, j);
                    }
                }
                let outside = if i == j { 1.0 } else { 0.0 } - proj(i, j);
                data.push(Complex64::new(acc - scale * outside, 0.0));
            }
        }
        let h = CMatrix::new(n, n, data).expect("finite Hessian");
        let h = h.add(&h.adjoint()).expect("square").scaled(Complex64::new(0.5, 0.0));
        let Ok(eig) = herm_eig(&h) else { break };
        let top = eig.eigenvalues[0];
        let mut mu = if top < 0.0 { 0.0 } else { top + g_norm };

        let coeffs: Vec<f64> = eig
            .eigenvectors
            .iter()
            .map(|v| v.iter().zip(&g).map(|(vi, gi)| vi.re * gi).sum())
            .collect();
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let mut y = z.clone();
            for ((v, &lambda), &c) in eig.eigenvectors.iter().zip(&eig.eigenvalues).zip(&coeffs) {
                let denom = mu - lambda;
                if denom <= 0.0 {
                    continue;
                }
                for (yi, vi) in y.iter_mut().zip(v.iter()) {
                    *yi += c / denom * vi.re;
                }
            }
            if normalize(&mut y) {
                let fy = quartic.value(&y);
                if fy > f {
                    accepted = Some((y, fy));
                    break;
                }
            }
            mu = 2.0 * mu + g_norm;
        }
        match accepted {
            Some((y, fy)) => {
                let gain = fy - f;
                z = y;
                f = fy;
                if gain <= 1e-15 * f {
                    break;
                }
            }
            None => break,
        }
    }
    to_complex(&z)
}
