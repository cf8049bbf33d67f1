//! Numerical radius of a single matrix by sweeping the rotation angle of its
//! Hermitian part: `w(M) = max_θ λ_max((e^{iθ}M + e^{-iθ}M*)/2)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::linalg::{herm_eig, top_eigenvalue_in_place, CMatrix, CVector};

const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;

pub(crate) struct Sweep {
    cos_part: CMatrix,
    sin_part: CMatrix,
}

pub(crate) struct SweepPoint {
    pub x: CVector,
}

impl Sweep {
    pub fn new(m: &CMatrix) -> Self {
        let adj = m.adjoint();
        let half = Complex64::new(0.5, 0.0);
        let cos_part = m.add(&adj).expect("square").scaled(half);
        let sin_part = m.sub(&adj).expect("square").scaled(Complex64::new(0.0, 0.5));
        Self { cos_part, sin_part }
    }

    fn rotated(&self, theta: f64) -> CMatrix {
        let (s, c) = theta.sin_cos();
        self.cos_part
            .scaled(Complex64::new(c, 0.0))
            .add(&self.sin_part.scaled(Complex64::new(s, 0.0)))
            .expect("same shape")
    }

    fn top(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let mut buf: Vec<Complex64> = self
            .cos_part
            .as_slice()
            .iter()
            .zip(self.sin_part.as_slice())
            .map(|(a, b)| a * c + b * s)
            .collect();
        top_eigenvalue_in_place(&mut buf, self.cos_part.rows())
    }

    /// Full sweep: `samples` equispaced angles on `[0, 2π)`, then golden
    /// section on the bracket around the best sample.
    pub fn global(&self, samples: usize, tol: f64) -> SweepPoint {
        let step = TAU / samples as f64;
        let mut best = (0usize, f64::NEG_INFINITY);
        for j in 0..samples {
            let v = self.top(step * j as f64);
            if v > best.1 {
                best = (j, v);
            }
        }
        let center = step * best.0 as f64;
        self.refine(center - step, center + step, (center, best.1), tol)
    }

    /// Top eigenpair of the rotated Hermitian part at a fixed angle.
    pub fn at(&self, theta: f64) -> SweepPoint {
        let eig = herm_eig(&self.rotated(theta)).expect("rotated Hermitian part");
        SweepPoint {
            x: eig.eigenvectors[0].clone(),
        }
    }

    fn refine(&self, mut lo: f64, mut hi: f64, seed: (f64, f64), tol: f64) -> SweepPoint {
        let mut best = seed;
        let mut x1 = hi - INV_GOLDEN * (hi - lo);
        let mut x2 = lo + INV_GOLDEN * (hi - lo);
        let mut f1 = self.top(x1);
        let mut f2 = self.top(x2);
        while hi - lo > tol {
            if f1 >= f2 {
                if f1 > best.1 {
                    best = (x1, f1);
                }
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_GOLDEN * (hi - lo);
                f1 = self.top(x1);
            } else {
                if f2 > best.1 {
                    best = (x2, f2);
                }
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_GOLDEN * (hi - lo);
                f2 = self.top(x2);
            }
        }
        for (t, f) in [(x1, f1), (x2, f2)] {
            if f > best.1 {
                best = (t, f);
            }
        }
        self.at(best.0.rem_euclid(TAU))
    }
}
