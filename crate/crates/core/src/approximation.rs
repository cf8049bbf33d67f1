//! Best approximation `min_λ ω(A + λB)` and the norm-parallelism test.
//!
//! The objective is convex in the real coordinates of `λ`. At `λ` with a
//! maximizer `x` of `A' = A + λB`, a subgradient is the real embedding of
//! `(c_k conj(b_k) / ω(A'))_k` where `c_k = ⟨x|A'_k x⟩`, `b_k = ⟨x|B_k x⟩`.
//!
//! The solver runs a normalized subgradient method with step `s_0/√j`, then
//! gradient sampling (steps along the negated minimum-norm element of a
//! sampled subgradient hull, with shrinking sampling radius), then a
//! coordinate-wise golden-section pass, and finally re-evaluates the best
//! point with more restarts.

use std::cell::RefCell;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, CMatrix, CVector};
use crate::orthogonality::{
    certify_jnr_scaling, certify_jnr_single, min_norm_point, Certificate, HullProblem, OrthoConfig,
    DEFAULT_TOL,
};
use crate::radius::{
    joint_numerical_radius, joint_numerical_radius_seeded, starting_points, ComplexCoefficients,
    MatTuple, Maximizer, SolverConfig,
};

/// Relative slack under which two objective values count as equal.
pub const TIE_TOL: f64 = 1e-12;
/// Relative slack in the parallelism test.
pub const PARALLEL_TOL: f64 = 1e-6;

const INV_GOLDEN: f64 = 0.618_033_988_749_894_8;
const WARM_STARTS: usize = 4;

/// A coefficient vector that lowers a norm, found by [`probe_descent`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentProbe {
    pub lambda: ComplexCoefficients,
    pub value: f64,
}

const PROBE_HALVINGS: usize = 40;

/// Tries `λ = t · direction/|direction|` for `t = reach, reach/2, ...` and
/// returns the lowest value of `eval` below `base`, stopping once the values
/// start climbing back.
pub fn probe_descent<F>(
    base: f64,
    direction: &ComplexCoefficients,
    reach: f64,
    mut eval: F,
) -> Result<Option<DescentProbe>>
where
    F: FnMut(&ComplexCoefficients) -> Result<f64>,
{
    let norm = direction.norm();
    if norm == 0.0 || !reach.is_finite() || reach <= 0.0 {
        return Ok(None);
    }
    let floor = base - TIE_TOL * base.max(1.0);
    let mut best: Option<DescentProbe> = None;
    let mut t = reach;
    for _ in 0..PROBE_HALVINGS {
        let scale = Complex64::new(t / norm, 0.0);
        let lambda = ComplexCoefficients::new(direction.as_slice().iter().map(|z| z * scale).collect())?;
        let value = eval(&lambda)?;
        match &best {
            Some(b) if value >= b.value => break,
            _ if value < floor => best = Some(DescentProbe { lambda, value }),
            _ => {}
        }
        t *= 0.5;
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxConfig {
    /// Solver used for every objective evaluation during the descent.
    pub solver: SolverConfig,
    /// Restarts for the final evaluation of the returned point.
    pub final_restarts: usize,
    /// Subgradient iterations.
    pub iterations: usize,
    /// Objective evaluations allowed for gradient sampling.
    pub sampling_budget: usize,
    /// Tolerance of the final certificate attempt.
    pub tol: f64,
    pub certify: bool,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default().with_restarts(8),
            final_restarts: 32,
            iterations: 500,
            sampling_budget: 1500,
            tol: DEFAULT_TOL,
            certify: true,
        }
    }
}

impl ApproxConfig {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if self.final_restarts == 0 {
            return Err(Error::InvalidConfig("final_restarts must be >= 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        Ok(())
    }

    fn final_solver(&self) -> SolverConfig {
        self.solver.with_restarts(self.final_restarts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxResult {
    pub lambda_star: ComplexCoefficients,
    /// `ω(A + λ* B)`.
    pub value: f64,
    /// Orthogonality certificate of `A + λ* B` against `B`, if one was found.
    pub certificate: Option<Certificate>,
    /// Subgradient iterations performed.
    pub iterations: usize,
    /// Best value after each subgradient iteration, starting with `ω(A)`.
    #[serde(skip)]
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Candidate {
    value: f64,
    lambda: Vec<f64>,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn lexicographic(x: &[f64], y: &[f64]) -> std::cmp::Ordering {
    x.iter()
        .zip(y)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

impl Candidate {
    /// Lower value wins; near-ties go to the smaller, then lexicographically
    /// smaller, coefficient vector.
    fn beats(&self, other: &Candidate) -> bool {
        let slack = TIE_TOL * self.value.abs().max(other.value.abs()).max(1.0);
        if self.value < other.value - slack {
            return true;
        }
        if self.value > other.value + slack {
            return false;
        }
        let (a, b) = (norm2(&self.lambda), norm2(&other.lambda));
        if a != b {
            return a < b;
        }
        lexicographic(&self.lambda, &other.lambda).is_lt()
    }

    fn offer(&mut self, value: f64, lambda: &[f64]) {
        let cand = Candidate {
            value,
            lambda: lambda.to_vec(),
        };
        if cand.beats(self) {
            *self = cand;
        }
    }
}

/// `λ ↦ ω(A + λB)` in real coordinates with warm-started evaluations.
struct Objective<'a> {
    a: &'a MatTuple,
    b: &'a MatTuple,
    single: bool,
    cfg: SolverConfig,
    seeds: RefCell<Vec<CVector>>,
    evaluations: std::cell::Cell<usize>,
}

impl<'a> Objective<'a> {
    fn dim(&self) -> usize {
        if self.single {
            2
        } else {
            2 * self.a.d()
        }
    }

    fn coefficients(&self, lambda: &[f64]) -> Result<ComplexCoefficients> {
        let c = ComplexCoefficients::from_real(lambda);
        if self.single {
            ComplexCoefficients::new(vec![c.as_slice()[0]; self.a.d()])
        } else {
            Ok(c)
        }
    }

    fn shifted(&self, lambda: &[f64]) -> Result<MatTuple> {
        self.a.shifted_by(&self.coefficients(lambda)?, self.b)
    }

    fn solve(&self, lambda: &[f64], cfg: &SolverConfig) -> Result<(MatTuple, crate::radius::MaximizerSet)> {
        self.evaluations.set(self.evaluations.get() + 1);
        let shifted = self.shifted(lambda)?;
        let set = joint_numerical_radius_seeded(&shifted, &self.seeds.borrow(), cfg)?;
        if !set.is_empty() {
            *self.seeds.borrow_mut() = set.maximizers.iter().take(WARM_STARTS).map(|m| m.x.clone()).collect();
        }
        Ok((shifted, set))
    }

    fn value(&self, lambda: &[f64]) -> Result<f64> {
        Ok(self.solve(lambda, &self.cfg)?.1.value)
    }

    /// Value and a subgradient; the subgradient is zero at a zero tuple.
    fn value_and_gradient(&self, lambda: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (_, set) = self.solve(lambda, &self.cfg)?;
        let Some(m) = set.maximizers.first() else {
            return Ok((0.0, vec![0.0; self.dim()]));
        };
        Ok((set.value, self.gradient(m, set.value)))
    }

    fn gradient(&self, m: &Maximizer, omega: f64) -> Vec<f64> {
        let v: Vec<Complex64> = m
            .witnesses
            .iter()
            .zip(self.b.witnesses(&m.x))
            .map(|(c, w)| c * w.conj() / omega)
            .collect();
        if self.single {
            let s: Complex64 = v.iter().sum();
            vec![s.re, s.im]
        } else {
            v.iter().flat_map(|z| [z.re, z.im]).collect()
        }
    }
}

fn axpy(x: &[f64], alpha: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + alpha * b).collect()
}

/// Normalized subgradient steps `λ_{j} = λ_{j-1} - (s_0/√j) g/|g|`.
fn subgradient_phase(obj: &Objective<'_>, s0: f64, iterations: usize, best: &mut Candidate, trace: &mut Vec<f64>) -> Result<usize> {
    let mut lambda = best.lambda.clone();
    let (mut f, mut g) = obj.value_and_gradient(&lambda)?;
    best.offer(f, &lambda);
    let mut done = 0;
    for j in 1..=iterations {
        let gn = norm2(&g);
        if f <= 0.0 || gn == 0.0 {
            break;
        }
        lambda = axpy(&lambda, -s0 / (j as f64).sqrt() / gn, &g);
        (f, g) = obj.value_and_gradient(&lambda)?;
        best.offer(f, &lambda);
        trace.push(best.value);
        done = j;
    }
    Ok(done)
}

fn ball_sample(dim: usize, radius: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let n = norm2(&v).max(f64::MIN_POSITIVE);
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    v.iter().map(|x| x * r / n).collect()
}

/// Gradient sampling with radius shrinking from `0.1 s_0` to `1e-10 s_0`.
fn sampling_phase(obj: &Objective<'_>, s0: f64, budget: usize, best: &mut Candidate, seed: u64) -> Result<()> {
    let dim = obj.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a09_e667_f3bc_c908);
    let mut lambda = best.lambda.clone();
    let mut f = obj.value(&lambda)?;
    let mut eps = 0.1 * s0;
    let eps_min = 1e-10 * s0;
    let start = obj.evaluations.get();
    while eps > eps_min && obj.evaluations.get() - start < budget && f > 0.0 {
        let mut grads = vec![obj.value_and_gradient(&lambda)?.1];
        for _ in 0..dim + 1 {
            let probe = axpy(&lambda, 1.0, &ball_sample(dim, eps, &mut rng));
            grads.push(obj.value_and_gradient(&probe)?.1);
        }
        let hull = min_norm_point(&HullProblem::unlabeled(grads)?)?;
        let pn = hull.min_norm;
        if pn <= 1e-12 {
            eps *= 0.1;
            continue;
        }
        let dir: Vec<f64> = hull.point.iter().map(|v| -v / pn).collect();
        let mut t = 4.0 * eps;
        let mut moved = false;
        while t >= 0.01 * eps {
            let trial = axpy(&lambda, t, &dir);
            let ft = obj.value(&trial)?;
            if ft < f - 1e-6 * t * pn {
                lambda = trial;
                f = ft;
                best.offer(f, &lambda);
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            eps *= 0.1;
        }
    }
    Ok(())
}

/// One golden-section pass per real coordinate on `[λ_i - h, λ_i + h]`.
fn coordinate_phase(obj: &Objective<'_>, h: f64, best: &mut Candidate) -> Result<()> {
    let tol = 1e-6 * h;
    for i in 0..obj.dim() {
        let base = best.lambda.clone();
        let at = |t: f64| -> Result<f64> {
            let mut l = base.clone();
            l[i] += t;
            obj.value(&l)
        };
        let (mut lo, mut hi) = (-h, h);
        let mut x1 = hi - INV_GOLDEN * (hi - lo);
        let mut x2 = lo + INV_GOLDEN * (hi - lo);
        let mut f1 = at(x1)?;
        let mut f2 = at(x2)?;
        while hi - lo > tol {
            if f1 <= f2 {
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
            let mut l = base.clone();
            l[i] += t;
            best.offer(f, &l);
        }
    }
    Ok(())
}

fn approximate(a: &MatTuple, b: &MatTuple, cfg: &ApproxConfig, single: bool) -> Result<ApproxResult> {
    cfg.validate()?;
    a.same_shape(b)?;
    let final_cfg = cfg.final_solver();
    let obj = Objective {
        a,
        b,
        single,
        cfg: cfg.solver.clone(),
        seeds: RefCell::new(Vec::new()),
        evaluations: std::cell::Cell::new(0),
    };
    let dim = obj.dim();
    let zero = vec![0.0; dim];
    let omega_a = joint_numerical_radius(a, &final_cfg)?.value;
    let mut trace = vec![omega_a];
    let mut best = Candidate {
        value: omega_a,
        lambda: zero.clone(),
    };
    let mut iterations = 0;

    if !a.is_zero() && !b.is_zero() {
        let omega_b = joint_numerical_radius(b, &cfg.solver)?.value;
        let s0 = omega_a / omega_b.max(1.0);
        iterations = subgradient_phase(&obj, s0, cfg.iterations, &mut best, &mut trace)?;
        if best.value > 0.0 {
            sampling_phase(&obj, s0, cfg.sampling_budget, &mut best, cfg.solver.seed)?;
        }
        if best.value > 0.0 {
            coordinate_phase(&obj, 1e-4 * s0, &mut best)?;
        }
        let (_, set) = obj.solve(&best.lambda, &final_cfg)?;
        let mut last = Candidate {
            value: omega_a,
            lambda: zero,
        };
        last.offer(set.value, &best.lambda);
        best = last;
    }

    let lambda_star = obj.coefficients(&best.lambda)?;
    let lambda_star = if single {
        ComplexCoefficients::new(vec![lambda_star.as_slice()[0]])?
    } else {
        lambda_star
    };
    let shifted = obj.shifted(&best.lambda)?;
    let certificate = if cfg.certify && !shifted.is_zero() {
        let ortho = OrthoConfig {
            solver: final_cfg,
            tol: cfg.tol,
            subspace_samples: None,
            probe: false,
        };
        let outcome = if single {
            certify_jnr_single(&shifted, b, &ortho)?
        } else {
            certify_jnr_scaling(&shifted, b, &ortho)?
        };
        outcome.certificate().cloned()
    } else {
        None
    };
    Ok(ApproxResult {
        lambda_star,
        value: best.value,
        certificate,
        iterations,
        trace,
    })
}

/// `min_{λ ∈ ℂ^d} ω(A + λB)` with `λB = (λ_1 B_1, ..., λ_d B_d)`.
pub fn best_approx_jnr(a: &MatTuple, b: &MatTuple, cfg: &ApproxConfig) -> Result<ApproxResult> {
    approximate(a, b, cfg, false)
}

/// `min_{λ ∈ ℂ} ω(A + λB)`; `lambda_star` has a single entry.
pub fn best_approx_jnr_single(a: &MatTuple, b: &MatTuple, cfg: &ApproxConfig) -> Result<ApproxResult> {
    approximate(a, b, cfg, true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParallelismResult {
    pub is_parallel: bool,
    pub witness_x: Option<CVector>,
    /// `max_x |Σ_k conj(⟨x|B_k x⟩) ⟨x|A_k x⟩|` as found.
    pub achieved: f64,
    /// `ω(A) ω(B)`.
    pub bound: f64,
}

fn pair_objective(a: &MatTuple, b: &MatTuple, x: &CVector) -> (f64, Complex64) {
    let s: Complex64 = a
        .witnesses(x)
        .iter()
        .zip(b.witnesses(x))
        .map(|(c, w)| c * w.conj())
        .sum();
    (s.norm(), s)
}

/// Hermitian matrix whose quadratic form at `x` is `2 Re(μ F(x))`, with
/// `F(x) = Σ_k conj(⟨x|B_k x⟩) ⟨x|A_k x⟩` and `μ` aligning the phase of `F`.
fn pair_matrix(a: &MatTuple, b: &MatTuple, x: &CVector, mu: Complex64) -> CMatrix {
    let n = a.n();
    let mut m = CMatrix::zeros(n, n);
    for ((ak, bk), (c, w)) in a
        .matrices()
        .iter()
        .zip(b.matrices())
        .zip(a.witnesses(x).into_iter().zip(b.witnesses(x)))
    {
        m = m
            .add(&ak.scaled(w.conj()))
            .and_then(|m| m.add(&bk.adjoint().scaled(c)))
            .expect("same shape");
    }
    let rotated = m.scaled(mu);
    rotated
        .add(&rotated.adjoint())
        .expect("square")
        .scaled(Complex64::new(0.5, 0.0))
}

/// Fixed-point ascent on the top eigenvector of the phase-aligned Hessian
/// form, accepting only improving steps (falling back to the midpoint).
fn pair_ascent(a: &MatTuple, b: &MatTuple, start: &CVector, cfg: &SolverConfig) -> (f64, CVector) {
    let mut x = start.clone();
    let (mut value, mut s) = pair_objective(a, b, &x);
    for _ in 0..cfg.max_iterations {
        let mu = if value > 0.0 { s.conj() / value } else { Complex64::new(1.0, 0.0) };
        let h = pair_matrix(a, b, &x, mu);
        let Ok(eig) = herm_eig(&h) else { break };
        let y = eig.eigenvectors[0].clone();
        let overlap = crate::linalg::inner(&y, &x).expect("same length");
        let y = if overlap.norm() > 0.0 {
            y.scaled(overlap / overlap.norm())
        } else {
            y
        };
        let mut improved = false;
        for cand in [y.clone(), x.axpy(Complex64::new(1.0, 0.0), &y)] {
            let Some(cand) = cand.normalized() else { continue };
            let (v, sv) = pair_objective(a, b, &cand);
            if v > value + cfg.improvement_tol * value.max(1.0) {
                x = cand;
                value = v;
                s = sv;
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    (value, x)
}

/// Tests whether `ω(A + μB) = ω(A) + ω(B)` for some unimodular `μ`, via the
/// equivalent condition `max_x |Σ_k conj(⟨x|B_k x⟩) ⟨x|A_k x⟩| = ω(A) ω(B)`.
///
/// Starts include the maximizers of `ω(A)` and `ω(B)`, since an equality
/// witness must maximize both.
pub fn parallel_jnr(a: &MatTuple, b: &MatTuple, cfg: &SolverConfig) -> Result<ParallelismResult> {
    cfg.validate()?;
    a.same_shape(b)?;
    let set_a = joint_numerical_radius(a, cfg)?;
    let set_b = joint_numerical_radius(b, cfg)?;
    let bound = set_a.value * set_b.value;
    if bound == 0.0 {
        return Ok(ParallelismResult {
            is_parallel: true,
            witness_x: Some(CVector::basis(a.n(), 0)),
            achieved: 0.0,
            bound: 0.0,
        });
    }
    let starts: Vec<CVector> = set_a
        .maximizers
        .iter()
        .chain(&set_b.maximizers)
        .map(|m| m.x.clone())
        .chain(starting_points(a.n(), cfg))
        .collect();
    let runs = crate::radius::parallel_map(&starts, cfg.threads, |s| pair_ascent(a, b, s, cfg));
    let (achieved, x) = runs
        .into_iter()
        .fold(None::<(f64, CVector)>, |acc, r| match acc {
            Some(best) if best.0 >= r.0 => Some(best),
            _ => Some(r),
        })
        .expect("at least one start");
    let is_parallel = achieved >= (1.0 - PARALLEL_TOL) * bound;
    Ok(ParallelismResult {
        is_parallel,
        witness_x: Some(x.canonical_phase()),
        achieved,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn sign() -> MatTuple {
        MatTuple::single(CMatrix::from_real_diag(&[1.0, -1.0])).unwrap()
    }

    fn id2() -> MatTuple {
        MatTuple::single(CMatrix::identity(2)).unwrap()
    }

    #[test]
    fn identity_cancels() {
        for r in [
            best_approx_jnr(&id2(), &id2(), &ApproxConfig::default()).unwrap(),
            best_approx_jnr_single(&id2(), &id2(), &ApproxConfig::default()).unwrap(),
        ] {
            assert!(r.value.abs() <= 1e-6, "value {}", r.value);
            assert!((r.lambda_star.as_slice()[0] - c64(-1.0, 0.0)).norm() <= 1e-6);
            assert!(r.certificate.is_none());
        }
    }

    #[test]
    fn symmetric_instance_stays_at_zero() {
        let r = best_approx_jnr(&sign(), &id2(), &ApproxConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-9);
        assert_eq!(r.lambda_star.as_slice(), &[c64(0.0, 0.0)]);
        let cert = r.certificate.expect("certificate at the optimum");
        assert_eq!(cert.support(), 2);
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn zero_direction_keeps_lambda_zero() {
        let r = best_approx_jnr(&sign(), &MatTuple::zeros(2, 1), &ApproxConfig::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert!((r.value - 1.0).abs() <= 1e-12);
        assert!(r.certificate.is_some());
    }

    #[test]
    fn probe_finds_cancellation() {
        let dir = ComplexCoefficients::new(vec![c64(-3.0, 0.0)]).unwrap();
        let p = probe_descent(1.0, &dir, 2.0, |l| Ok((1.0 + l.as_slice()[0]).norm())).unwrap().unwrap();
        assert!(p.value <= 1e-12);
        let none = probe_descent(1.0, &dir, 2.0, |l| Ok(1.0 + l.as_slice()[0].norm())).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn parallel_examples() {
        let cfg = SolverConfig::default();
        let r = parallel_jnr(&sign(), &sign(), &cfg).unwrap();
        assert!(r.is_parallel);
        assert!((r.achieved - 1.0).abs() < 1e-12);
        let w = r.witness_x.unwrap();
        assert!((w[0] - c64(1.0, 0.0)).norm() < 1e-12 && w[1].norm() < 1e-12);

        let a = MatTuple::single(CMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let b = MatTuple::single(CMatrix::from_real_diag(&[0.0, 1.0])).unwrap();
        let r = parallel_jnr(&a, &b, &cfg).unwrap();
        assert!(!r.is_parallel);
        assert!(r.achieved <= 0.25 + 1e-12);
        assert!((r.achieved - 0.25).abs() < 1e-6);

        let r = parallel_jnr(&a, &MatTuple::zeros(2, 1), &cfg).unwrap();
        assert!(r.is_parallel);
        assert_eq!(r.bound, 0.0);
    }
}
