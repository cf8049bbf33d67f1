#![allow(dead_code)]

use jnr::linalg::{CMatrix, Complex64};
use jnr::radius::MatTuple;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let data = (0..rows * cols)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    CMatrix::new(rows, cols, data).unwrap()
}

pub fn random_tuple(n: usize, d: usize, rng: &mut ChaCha8Rng) -> MatTuple {
    MatTuple::new((0..d).map(|_| random_matrix(n, n, rng)).collect()).unwrap()
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn real_diag(d: &[f64]) -> CMatrix {
    CMatrix::from_real_diag(d)
}

pub fn tuple(ms: Vec<CMatrix>) -> MatTuple {
    MatTuple::new(ms).unwrap()
}

pub fn single(m: CMatrix) -> MatTuple {
    MatTuple::single(m).unwrap()
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n)
}

/// `diag(1, -1)`.
pub fn sign2() -> CMatrix {
    real_diag(&[1.0, -1.0])
}

/// `[[0, 1], [0, 0]]`.
pub fn nilpotent2() -> CMatrix {
    CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
}

/// The single-entry matrix with a one at `(i, j)`.
pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> CMatrix {
    let mut data = vec![c(0.0, 0.0); rows * cols];
    data[i * cols + j] = c(1.0, 0.0);
    CMatrix::new(rows, cols, data).unwrap()
}

/// `diag(1, ζ, ζ²)` with `ζ = e^{2πi/3}`.
pub fn cube_roots() -> CMatrix {
    let z = |k: f64| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k / 3.0);
    CMatrix::from_diag(&[z(0.0), z(1.0), z(2.0)])
}

/// Writes `t` as a tuple file.
pub fn tuple_json(t: &MatTuple) -> String {
    let matrices: Vec<Vec<Vec<[f64; 2]>>> = t
        .matrices()
        .iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect()
        })
        .collect();
    serde_json::json!({ "n": t.n(), "d": t.d(), "matrices": matrices }).to_string()
}
