//! Brute-force reference computations for tests and the `verify` command.
//!
//! Sphere sampling and the hull enumeration use nothing but the numeric
//! kernel. Finite differences and coefficient grids evaluate norms through
//! the radius solver (with more restarts) or a plain SVD.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{svd, CMatrix, CVector};
use crate::radius::{joint_numerical_radius, joint_numerical_radius_seeded, ComplexCoefficients, MatTuple, SolverConfig};

/// Largest `n` accepted by [`omega_by_sampling`].
pub const MAX_SAMPLING_N: usize = 4;
/// A grid value below `norm(A) - DECREASE_TOL` counts as a decrease.
pub const DECREASE_TOL: f64 = 1e-6;
/// Slack in the definition-level parallelism test.
pub const PARALLEL_SLACK: f64 = 1e-5;

const POLISH_TOP: usize = 10;
const POLISH_ITERATIONS: usize = 50;
const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    pub sphere_samples: usize,
    pub fd_step: f64,
    /// Half-width of the coefficient box, per real coordinate.
    pub grid_radius: f64,
    pub grid_step: f64,
    /// The grid is repeated at each of these multiples of radius and step.
    pub grid_scales: Vec<f64>,
    /// Random coefficient samples per scale when the grid would be more than
    /// four-dimensional.
    pub grid_samples: usize,
    /// Restarts for solver-based evaluations; suspected decreases are
    /// re-checked with four times as many.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            sphere_samples: 200_000,
            fd_step: 1e-5,
            grid_radius: 1.0,
            grid_step: 0.1,
            grid_scales: vec![1.0, 0.1, 0.01],
            grid_samples: 1000,
            restarts: 8,
            seed: 42,
        }
    }
}

impl OracleConfig {
    /// Defaults with sampling budget and grid step sized for `n` and `d`:
    /// 200000 sphere samples at `n ≤ 2`, two million above; about 400 grid
    /// points per scale for `d = 1` and 625 for `d = 2`.
    pub fn for_shape(n: usize, d: usize) -> Self {
        let sphere_samples = if n <= 2 { 200_000 } else { 2_000_000 };
        let grid_step = if d <= 1 { 0.1 } else { 0.5 };
        Self {
            sphere_samples,
            grid_step,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [self.fd_step, self.grid_radius, self.grid_step];
        if self.sphere_samples == 0
            || self.restarts == 0
            || self.grid_samples == 0
            || positive.iter().any(|v| !(*v > 0.0 && v.is_finite()))
            || self.grid_scales.is_empty()
            || self.grid_scales.iter().any(|v| !(*v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidConfig("oracle parameters must be positive".into()));
        }
        Ok(())
    }

    fn solver(&self) -> SolverConfig {
        SolverConfig {
            seed: self.seed,
            ..SolverConfig::default().with_restarts(self.restarts)
        }
    }
}

fn quad(m: &CMatrix, x: &[Complex64]) -> Complex64 {
    let n = x.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += m[(i, j)] * x[j];
        }
        acc += x[i].conj() * row;
    }
    acc
}

fn jnr_at(a: &MatTuple, x: &[Complex64]) -> f64 {
    a.matrices().iter().map(|m| quad(m, x).norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) -> bool {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|z| *z /= n);
    true
}

fn gaussian_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        if normalize(&mut v) {
            return v;
        }
    }
}

/// Riemannian gradient ascent on `Σ_k |⟨x|A_k x⟩|^2`, accepting only
/// improving steps.
fn polish(a: &MatTuple, start: &[Complex64]) -> f64 {
    let n = start.len();
    let mut x = start.to_vec();
    let mut value = jnr_at(a, &x);
    let mut step = 0.1 / value.max(f64::MIN_POSITIVE);
    for _ in 0..POLISH_ITERATIONS {
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        for m in a.matrices() {
            let c = quad(m, &x);
            for i in 0..n {
                let mut ax = Complex64::new(0.0, 0.0);
                let mut ahx = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    ax += m[(i, j)] * x[j];
                    ahx += m[(j, i)].conj() * x[j];
                }
                g[i] += c.conj() * ax + c * ahx;
            }
        }
        let radial: Complex64 = x.iter().zip(&g).map(|(xi, gi)| xi.conj() * gi).sum();
        for (gi, xi) in g.iter_mut().zip(&x) {
            *gi -= xi * radial.re;
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut y: Vec<Complex64> = x.iter().zip(&g).map(|(xi, gi)| xi + gi * step).collect();
            if normalize(&mut y) {
                let v = jnr_at(a, &y);
                if v > value {
                    x = y;
                    value = v;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
        step *= 2.0;
    }
    value
}

/// Lower bound on `ω(A)` from complex-Gaussian sphere samples.
///
/// The top samples of every prefix of length `N, N/2, N/4, ..., 1` are
/// polished, so doubling the sample count with the same seed never lowers
/// the result.
pub fn omega_by_sampling(a: &MatTuple, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    if a.n() > MAX_SAMPLING_N {
        return Err(Error::TooLarge {
            n: a.n(),
            max: MAX_SAMPLING_N,
        });
    }
    let total = cfg.sphere_samples;
    let mut checkpoints = vec![total];
    while *checkpoints.last().expect("non-empty") / 2 >= 1 {
        let next = checkpoints.last().expect("non-empty") / 2;
        checkpoints.push(next);
    }
    checkpoints.reverse();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut top: Vec<(f64, usize, Vec<Complex64>)> = Vec::with_capacity(POLISH_TOP + 1);
    let mut polished: Vec<(usize, f64)> = Vec::new();
    let mut best: f64 = 0.0;
    let mut next = 0;
    for i in 0..total {
        let x = gaussian_unit(a.n(), &mut rng);
        let v = jnr_at(a, &x);
        if top.len() < POLISH_TOP || v > top[top.len() - 1].0 {
            let pos = top.partition_point(|e| e.0 >= v);
            top.insert(pos, (v, i, x));
            top.truncate(POLISH_TOP);
        }
        if i + 1 == checkpoints[next] {
            for (raw, idx, x) in &top {
                best = best.max(*raw);
                if polished.iter().all(|(j, _)| j != idx) {
                    let p = polish(a, x);
                    polished.push((*idx, p));
                    best = best.max(p);
                }
            }
            next += 1;
        }
    }
    Ok(best)
}

/// `max |Σ_k conj(⟨x|B_k x⟩) ⟨x|A_k x⟩|` over raw sphere samples.
pub fn parallel_objective_by_sampling(a: &MatTuple, b: &MatTuple, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    a.same_shape(b)?;
    if a.n() > MAX_SAMPLING_N {
        return Err(Error::TooLarge {
            n: a.n(),
            max: MAX_SAMPLING_N,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: f64 = 0.0;
    for _ in 0..cfg.sphere_samples {
        let x = gaussian_unit(a.n(), &mut rng);
        let s: Complex64 = a
            .matrices()
            .iter()
            .zip(b.matrices())
            .map(|(ak, bk)| quad(ak, &x) * quad(bk, &x).conj())
            .sum();
        best = best.max(s.norm());
    }
    Ok(best)
}

/// `(ω(A + tB) - ω(A)) / t`, the solver warm-started at the maximizers of `A`.
pub fn dd_by_finite_difference(a: &MatTuple, b: &MatTuple, t: f64, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidConfig("finite-difference step must be positive".into()));
    }
    a.same_shape(b)?;
    if b.is_zero() {
        return Ok(0.0);
    }
    let solver = cfg.solver().with_restarts(4 * cfg.restarts);
    let base = joint_numerical_radius(a, &solver)?;
    let seeds: Vec<CVector> = base.maximizers.iter().map(|m| m.x.clone()).collect();
    let moved = joint_numerical_radius_seeded(&a.shifted(Complex64::new(t, 0.0), b)?, &seeds, &solver)?;
    Ok((moved.value - base.value) / t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridVerdict {
    /// No grid point lowered the norm by more than [`DECREASE_TOL`].
    pub orthogonal: bool,
    /// The grid point with the lowest norm.
    pub best_lambda: ComplexCoefficients,
    pub best_value: f64,
    pub base_value: f64,
    pub evaluations: usize,
}

fn grid_axis(radius: f64, step: f64) -> Vec<f64> {
    let k = (radius / step).floor() as i64;
    (-k..=k).map(|i| i as f64 * step).collect()
}

/// Coefficient vectors (in `ℂ^p`) probed at every scale.
fn grid_points(p: usize, cfg: &OracleConfig) -> Vec<Vec<Complex64>> {
    let dims = 2 * p;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    for &scale in &cfg.grid_scales {
        let radius = cfg.grid_radius * scale;
        if dims <= 4 {
            let axis = grid_axis(radius, cfg.grid_step * scale);
            let mut idx = vec![0usize; dims];
            loop {
                let real: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
                out.push(real.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect());
                let mut k = 0;
                while k < dims {
                    idx[k] += 1;
                    if idx[k] < axis.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == dims {
                    break;
                }
            }
        } else {
            for _ in 0..cfg.grid_samples {
                let u = gaussian_unit(p, &mut rng);
                let r = radius * rand::Rng::random::<f64>(&mut rng).powf(1.0 / dims as f64);
                out.push(u.iter().map(|z| z * r).collect());
            }
        }
    }
    out
}

/// Scans the coefficient grid; `eval(λ, precise)` returns the norm of the
/// shifted operator, `precise` requesting the more expensive re-check.
fn scan<F>(p: usize, base: f64, cfg: &OracleConfig, mut eval: F) -> Result<GridVerdict>
where
    F: FnMut(&[Complex64], bool) -> Result<f64>,
{
    cfg.validate()?;
    let mut best_value = base;
    let mut best_lambda = vec![Complex64::new(0.0, 0.0); p];
    let mut evaluations = 0;
    for lambda in grid_points(p, cfg) {
        let mut v = eval(&lambda, false)?;
        evaluations += 1;
        if v < base - DECREASE_TOL {
            v = eval(&lambda, true)?;
            evaluations += 1;
        }
        if v < best_value {
            best_value = v;
            best_lambda = lambda;
        }
    }
    Ok(GridVerdict {
        orthogonal: best_value >= base - DECREASE_TOL,
        best_lambda: ComplexCoefficients::new(best_lambda)?,
        best_value,
        base_value: base,
        evaluations,
    })
}

fn jnr_eval(t: &MatTuple, cfg: &OracleConfig, precise: bool) -> Result<f64> {
    let solver = if precise {
        cfg.solver().with_restarts(4 * cfg.restarts)
    } else {
        cfg.solver()
    };
    Ok(joint_numerical_radius(t, &solver)?.value)
}

fn opnorm(m: &CMatrix) -> Result<f64> {
    Ok(svd(m)?.singular_values[0])
}

/// Grid test of `ω(A + λB) ≥ ω(A)` over `λ ∈ ℂ^d`.
pub fn ortho_by_grid(a: &MatTuple, b: &MatTuple, cfg: &OracleConfig) -> Result<GridVerdict> {
    a.same_shape(b)?;
    let base = jnr_eval(a, cfg, true)?;
    scan(a.d(), base, cfg, |l, precise| {
        let c = ComplexCoefficients::new(l.to_vec())?;
        jnr_eval(&a.shifted_by(&c, b)?, cfg, precise)
    })
}

/// Grid test of `ω(A + λB) ≥ ω(A)` over scalar `λ ∈ ℂ`.
pub fn ortho_by_grid_single(a: &MatTuple, b: &MatTuple, cfg: &OracleConfig) -> Result<GridVerdict> {
    a.same_shape(b)?;
    let base = jnr_eval(a, cfg, true)?;
    scan(1, base, cfg, |l, precise| jnr_eval(&a.shifted(l[0], b)?, cfg, precise))
}

/// Grid test of `||A + λB|| ≥ ||A||` in the joint operator norm.
pub fn ortho_by_grid_opnorm(a: &MatTuple, b: &MatTuple, cfg: &OracleConfig) -> Result<GridVerdict> {
    a.same_shape(b)?;
    let base = opnorm(&a.stacked())?;
    scan(a.d(), base, cfg, |l, _| {
        let c = ComplexCoefficients::new(l.to_vec())?;
        opnorm(&a.shifted_by(&c, b)?.stacked())
    })
}

/// Grid test of `||A + Σ_j λ_j W_j|| ≥ ||A||` in the operator norm.
pub fn ortho_by_grid_subspace(a: &CMatrix, basis: &[CMatrix], cfg: &OracleConfig) -> Result<GridVerdict> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    let base = opnorm(a)?;
    scan(basis.len(), base, cfg, |l, _| {
        let mut m = a.clone();
        for (w, c) in basis.iter().zip(l) {
            m = m.add(&w.scaled(*c))?;
        }
        opnorm(&m)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMinimum {
    pub lambda: ComplexCoefficients,
    pub value: f64,
    pub evaluations: usize,
}

/// `ω(A + λB)` and a subgradient in real coordinates, from the first
/// maximizer `x`: the embedding of `(⟨x|A'_k x⟩ conj(⟨x|B_k x⟩) / ω)_k`,
/// summed over `k` when `single`.
fn value_and_subgradient(
    a: &MatTuple,
    b: &MatTuple,
    real: &[f64],
    single: bool,
    cfg: &OracleConfig,
) -> Result<(f64, Vec<f64>)> {
    let l: Vec<Complex64> = real.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let shifted = if single {
        a.shifted(l[0], b)?
    } else {
        a.shifted_by(&ComplexCoefficients::new(l)?, b)?
    };
    let set = joint_numerical_radius(&shifted, &cfg.solver())?;
    let Some(m) = set.maximizers.first() else {
        return Ok((0.0, vec![0.0; real.len()]));
    };
    let x = m.x.as_slice();
    let parts: Vec<Complex64> = shifted
        .matrices()
        .iter()
        .zip(b.matrices())
        .map(|(ak, bk)| quad(ak, x) * quad(bk, x).conj() / set.value)
        .collect();
    let grad = if single {
        let s: Complex64 = parts.iter().sum();
        vec![s.re, s.im]
    } else {
        parts.iter().flat_map(|z| [z.re, z.im]).collect()
    };
    Ok((set.value, grad))
}

const BOX: f64 = 2.0;
const ELLIPSOID_ITERATIONS: usize = 4000;

/// `min_λ ω(A + λB)` over the box `||λ||_∞ ≤ 2` (real coordinates): a
/// coarse grid (step 0.2 for two real coordinates, 1.0 for four), then the
/// central-cut ellipsoid method on the box, which converges for any convex
/// objective. `single` selects a scalar `λ`.
pub fn best_approx_by_grid(a: &MatTuple, b: &MatTuple, single: bool, cfg: &OracleConfig) -> Result<GridMinimum> {
    cfg.validate()?;
    a.same_shape(b)?;
    let p = if single { 1 } else { a.d() };
    let dims = 2 * p;
    if dims > 4 {
        return Err(Error::InvalidConfig("grid minimization supports at most d = 2".into()));
    }
    let mut evaluations = 0;
    let mut best = (f64::INFINITY, vec![0.0; dims]);

    let axis = grid_axis(BOX, if dims == 2 { 0.2 } else { 1.0 });
    let mut idx = vec![0usize; dims];
    loop {
        let real: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        let (v, _) = value_and_subgradient(a, b, &real, single, cfg)?;
        evaluations += 1;
        if v < best.0 {
            best = (v, real);
        }
        let mut k = 0;
        while k < dims {
            idx[k] += 1;
            if idx[k] < axis.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == dims {
            break;
        }
    }

    // E = {y : (y - c)ᵀ P⁻¹ (y - c) ≤ 1}, initially the ball around the box
    let nd = dims as f64;
    let mut c: Vec<f64> = vec![0.0; dims];
    let mut pm = vec![vec![0.0; dims]; dims];
    for (i, row) in pm.iter_mut().enumerate() {
        row[i] = BOX * BOX * nd;
    }
    for _ in 0..ELLIPSOID_ITERATIONS {
        let outside = (0..dims).find(|&i| c[i].abs() > BOX);
        let g = match outside {
            Some(i) => {
                let mut g = vec![0.0; dims];
                g[i] = c[i].signum();
                g
            }
            None => {
                let (v, g) = value_and_subgradient(a, b, &c, single, cfg)?;
                evaluations += 1;
                if v < best.0 {
                    best = (v, c.clone());
                }
                g
            }
        };
        let pg: Vec<f64> = pm.iter().map(|row| row.iter().zip(&g).map(|(x, y)| x * y).sum()).collect();
        let width = g.iter().zip(&pg).map(|(x, y)| x * y).sum::<f64>().sqrt();
        if width <= 1e-10 {
            if outside.is_none() {
                break;
            }
            continue;
        }
        let step: Vec<f64> = pg.iter().map(|v| v / width).collect();
        for i in 0..dims {
            c[i] -= step[i] / (nd + 1.0);
        }
        let factor = nd * nd / (nd * nd - 1.0);
        for i in 0..dims {
            for j in 0..dims {
                pm[i][j] = factor * (pm[i][j] - 2.0 / (nd + 1.0) * step[i] * step[j]);
            }
        }
        for i in 0..dims {
            for j in 0..i {
                let avg = 0.5 * (pm[i][j] + pm[j][i]);
                pm[i][j] = avg;
                pm[j][i] = avg;
            }
        }
    }
    let lambda = ComplexCoefficients::new(best.1.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect())?;
    Ok(GridMinimum {
        lambda,
        value: best.0,
        evaluations,
    })
}

/// Minimum norm over the convex hull by enumerating every subset of at most
/// `m + 1` points and solving its affine minimization exactly.
pub fn min_norm_by_enumeration(points: &[Vec<f64>]) -> Result<f64> {
    let m = points.first().ok_or(Error::EmptyPointSet)?.len();
    if points.iter().any(|p| p.len() != m) {
        return Err(Error::PointDimension {
            expected: m,
            found: points.iter().map(Vec::len).find(|&l| l != m).unwrap_or(m),
        });
    }
    let n = points.len();
    let mut best = f64::INFINITY;
    for mask in 1u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if subset.len() > m + 1 {
            continue;
        }
        if let Some(alpha) = kkt_solve(points, &subset) {
            if alpha.iter().all(|&t| t >= -1e-12) {
                let mut y = vec![0.0; m];
                for (&i, &t) in subset.iter().zip(&alpha) {
                    for c in 0..m {
                        y[c] += t * points[i][c];
                    }
                }
                best = best.min(y.iter().map(|v| v * v).sum::<f64>().sqrt());
            }
        }
    }
    Ok(best)
}

/// Solves `[G 1; 1ᵀ 0] [α; μ] = [0; 1]` with `G` the Gram matrix of the
/// subset, by Gaussian elimination with partial pivoting.
fn kkt_solve(points: &[Vec<f64>], subset: &[usize]) -> Option<Vec<f64>> {
    let k = subset.len();
    let size = k + 1;
    let mut mat = vec![vec![0.0; size + 1]; size];
    let mut scale: f64 = 0.0;
    for (r, &i) in subset.iter().enumerate() {
        for (c, &j) in subset.iter().enumerate() {
            let g: f64 = points[i].iter().zip(&points[j]).map(|(x, y)| x * y).sum();
            mat[r][c] = g;
            scale = scale.max(g.abs());
        }
        mat[r][k] = 1.0;
        mat[k][r] = 1.0;
    }
    mat[k][size] = 1.0;
    let pivot_tol = 1e-12 * scale.max(1.0);
    for col in 0..size {
        let piv = (col..size).max_by(|&x, &y| mat[x][col].abs().total_cmp(&mat[y][col].abs()))?;
        if mat[piv][col].abs() <= pivot_tol {
            return None;
        }
        mat.swap(col, piv);
        for r in 0..size {
            if r != col {
                let f = mat[r][col] / mat[col][col];
                if f != 0.0 {
                    for c in col..=size {
                        mat[r][c] -= f * mat[col][c];
                    }
                }
            }
        }
    }
    Some((0..k).map(|r| mat[r][size] / mat[r][r]).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuGridVerdict {
    /// Some grid or refined `μ` reaches `ω(A) + ω(B) - PARALLEL_SLACK`.
    pub parallel: bool,
    #[serde(serialize_with = "crate::complex_serde::serialize_scalar")]
    pub best_mu: Complex64,
    /// `ω(A) + ω(B) - max_μ ω(A + μB)` over the probed `μ`.
    pub gap: f64,
}

/// Definition-level parallelism check: scans `μ = e^{iθ}` on 360 angles and
/// refines the best by golden section within one grid step.
pub fn parallel_by_mu_grid(a: &MatTuple, b: &MatTuple, cfg: &OracleConfig) -> Result<MuGridVerdict> {
    cfg.validate()?;
    a.same_shape(b)?;
    let target = jnr_eval(a, cfg, true)? + jnr_eval(b, cfg, true)?;
    let at = |theta: f64| -> Result<f64> { jnr_eval(&a.shifted(Complex64::from_polar(1.0, theta), b)?, cfg, false) };
    let step = TAU / 360.0;
    let mut best = (0.0, f64::NEG_INFINITY);
    for j in 0..360 {
        let theta = step * j as f64;
        let v = at(theta)?;
        if v > best.1 {
            best = (theta, v);
        }
    }
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = at(x1)?;
    let mut f2 = at(x2)?;
    while hi - lo > 1e-9 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = at(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = at(x2)?;
        }
    }
    for (t, f) in [(x1, f1), (x2, f2)] {
        if f > best.1 {
            best = (t, f);
        }
    }
    let theta = best.0;
    let refined = jnr_eval(&a.shifted(Complex64::from_polar(1.0, theta), b)?, cfg, true)?.max(best.1);
    let gap = target - refined;
    Ok(MuGridVerdict {
        parallel: gap <= PARALLEL_SLACK,
        best_mu: Complex64::from_polar(1.0, theta.rem_euclid(TAU)),
        gap,
    })
}
