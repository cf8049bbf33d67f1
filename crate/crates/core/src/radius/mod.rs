//! Joint numerical radius, numerical radius and joint operator norm.
//!
//! The joint numerical radius is computed through its bilinear form
//! `ω(A) = max_{|x|=1} max_{|λ|=1} |Σ λ_k ⟨x|A_k x⟩|` by alternating between
//! the two blocks: for fixed `λ` the inner problem is the numerical radius of
//! `Σ λ_k A_k`, solved globally by an angle sweep; for fixed `x` the optimal
//! `λ` is `conj(c)/|c|` by Cauchy-Schwarz.

mod polish;
mod sweep;
mod tuple;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, svd, CMatrix, CVector, LinalgError};

pub(crate) use sweep::Sweep;
pub use tuple::{scale_tuple, ComplexCoefficients, MatTuple};

/// Relative slack for admitting a candidate into a [`MaximizerSet`].
pub const TOL_MAX: f64 = 1e-8;
/// Minimum Frobenius distance between projectors `x x*` of distinct maximizers.
pub const DEDUP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// ω, the joint numerical radius.
    Jnr,
    /// The joint operator norm `max_{|x|=1} (Σ ||A_k x||^2)^{1/2}`.
    Opnorm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Random unit starting vectors, in addition to the `n` basis vectors.
    pub restarts: usize,
    pub seed: u64,
    /// Worker threads for independent starts; results do not depend on it.
    pub threads: usize,
    pub theta_samples: usize,
    pub theta_tol: f64,
    pub max_iterations: usize,
    pub improvement_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 42,
            threads: 1,
            theta_samples: 720,
            theta_tol: 1e-12,
            max_iterations: 200,
            improvement_tol: 1e-12,
        }
    }
}

impl SolverConfig {
    pub fn with_restarts(&self, restarts: usize) -> Self {
        Self {
            restarts,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be >= 1".into()));
        }
        if self.theta_samples < 3 {
            return Err(Error::InvalidConfig("theta_samples must be >= 3".into()));
        }
        if self.threads == 0 {
            return Err(Error::InvalidConfig("threads must be >= 1".into()));
        }
        Ok(())
    }
}

/// A unit vector together with its witnesses `c_k = ⟨x|A_k x⟩` and the value
/// it attains for the norm it was computed for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    pub x: CVector,
    #[serde(with = "crate::complex_serde")]
    pub witnesses: Vec<Complex64>,
    pub value: f64,
}

impl Maximizer {
    /// Evaluates `(Σ |⟨x|A_k x⟩|^2)^{1/2}` at the normalized, phase-fixed `x`.
    pub fn jnr(a: &MatTuple, x: &CVector) -> Self {
        let x = unit_canonical(x);
        let witnesses = a.witnesses(&x);
        let value = witness_norm(&witnesses);
        Self {
            x,
            witnesses,
            value,
        }
    }

    /// Evaluates `(Σ ||A_k x||^2)^{1/2}`; witnesses still hold `⟨x|A_k x⟩`.
    pub fn opnorm(a: &MatTuple, x: &CVector) -> Self {
        let x = unit_canonical(x);
        let witnesses = a.witnesses(&x);
        let value = a.stacked_norm_at(&x);
        Self {
            x,
            witnesses,
            value,
        }
    }

    pub fn evaluate(a: &MatTuple, x: &CVector, kind: NormKind) -> Self {
        match kind {
            NormKind::Jnr => Self::jnr(a, x),
            NormKind::Opnorm => Self::opnorm(a, x),
        }
    }

    /// Largest deviation from the maximizer invariants, recomputed from `a`.
    pub fn invariant_violation(&self, a: &MatTuple, kind: NormKind) -> Result<f64> {
        if self.x.len() != a.n() {
            return Err(LinalgError::DimensionMismatch {
                expected: a.n(),
                found: self.x.len(),
            }
            .into());
        }
        if self.witnesses.len() != a.d() {
            return Err(Error::CoefficientCount {
                expected: a.d(),
                found: self.witnesses.len(),
            });
        }
        let mut worst = (self.x.norm() - 1.0).abs();
        for (k, m) in a.matrices().iter().enumerate() {
            let c = m.quadratic_form(&self.x)?;
            worst = worst.max((c - self.witnesses[k]).norm());
        }
        let value = match kind {
            NormKind::Jnr => witness_norm(&a.witnesses(&self.x)),
            NormKind::Opnorm => a.stacked_norm_at(&self.x),
        };
        Ok(worst.max((value - self.value).abs()))
    }
}

/// Deduplicated (near-)maximizers and the value they attain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizerSet {
    pub kind: NormKind,
    pub value: f64,
    pub maximizers: Vec<Maximizer>,
}

impl MaximizerSet {
    pub fn is_empty(&self) -> bool {
        self.maximizers.is_empty()
    }

    pub fn len(&self) -> usize {
        self.maximizers.len()
    }

    /// Largest deviation from the member and set invariants.
    pub fn invariant_violation(&self, a: &MatTuple) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for m in &self.maximizers {
            worst = worst.max(m.invariant_violation(a, self.kind)?);
            let shortfall = (1.0 - TOL_MAX) * self.value - m.value;
            worst = worst.max(shortfall.max(0.0));
        }
        Ok(worst)
    }
}

pub(crate) fn witness_norm(c: &[Complex64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn unit_canonical(x: &CVector) -> CVector {
    x.normalized()
        .expect("maximizer candidates are nonzero")
        .canonical_phase()
}

/// `||x x* - y y*||_F` for unit vectors.
pub fn projector_distance(x: &CVector, y: &CVector) -> f64 {
    let overlap = inner(x, y).map(|z| z.norm_sqr()).unwrap_or(0.0);
    (2.0 - 2.0 * overlap).max(0.0).sqrt()
}

pub(crate) fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> CVector {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        if let Some(u) = CVector::from_vec_unchecked(v).normalized() {
            return u;
        }
    }
}

/// Basis vectors followed by `restarts` seeded complex-Gaussian unit vectors.
pub(crate) fn starting_points(n: usize, cfg: &SolverConfig) -> Vec<CVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..n)
        .map(|i| CVector::basis(n, i))
        .chain((0..cfg.restarts).map(|_| random_unit(n, &mut rng)))
        .collect()
}

/// Runs `job` over `items`, preserving order, on up to `threads` workers.
pub(crate) fn parallel_map<T, R, F>(items: &[T], threads: usize, job: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(&job).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&job).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// One alternating ascent run from `start`.
fn ascend(a: &MatTuple, start: &CVector, cfg: &SolverConfig) -> CVector {
    let d = a.d();
    let mut x = start.clone();
    let mut value = witness_norm(&a.witnesses(&x));
    let mut global_next = false;

    for _ in 0..cfg.max_iterations {
        let c = a.witnesses(&x);
        let norm = witness_norm(&c);
        let lambda: Vec<Complex64> = if norm > 0.0 {
            c.iter().map(|z| z.conj() / norm).collect()
        } else {
            vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d]
        };
        let sweep = Sweep::new(&a.combination(&lambda));
        // λ is phase-aligned with x, so ⟨x|Mx⟩ is real and positive and the
        // top eigenvector of the Hermitian part at θ = 0 is an ascent step.
        // The full sweep runs only when that step stalls, and replaces x
        // only on a strict improvement, so tied local maxima are kept.
        let point = if global_next {
            sweep.global(cfg.theta_samples, cfg.theta_tol)
        } else {
            sweep.at(0.0)
        };
        let candidate = witness_norm(&a.witnesses(&point.x));
        let threshold = cfg.improvement_tol * value.max(1.0);
        if candidate > value + threshold {
            x = point.x;
            value = candidate;
            global_next = false;
        } else if global_next {
            break;
        } else {
            if candidate > value {
                x = point.x;
                value = candidate;
            }
            global_next = true;
        }
    }
    polish::polish(a, &x)
}

fn lexicographic(x: &CVector, y: &CVector) -> std::cmp::Ordering {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Keeps candidates within [`TOL_MAX`] of the best value, ordered by value
/// and then lexicographically, with projector-distance deduplication.
pub(crate) fn collect_maximizers(kind: NormKind, mut candidates: Vec<Maximizer>) -> MaximizerSet {
    let best = candidates.iter().map(|m| m.value).fold(0.0, f64::max);
    candidates.retain(|m| m.value >= (1.0 - TOL_MAX) * best);
    candidates.sort_by(|p, q| q.value.total_cmp(&p.value).then_with(|| lexicographic(&p.x, &q.x)));
    let mut kept: Vec<Maximizer> = Vec::new();
    for cand in candidates {
        if kept.iter().all(|k| projector_distance(&k.x, &cand.x) > DEDUP_TOL) {
            kept.push(cand);
        }
    }
    MaximizerSet {
        kind,
        value: best,
        maximizers: kept,
    }
}

/// Joint numerical radius `ω(A)` with all distinct near-maximizers found.
///
/// The returned value is attained by the reported vectors, so it is always a
/// lower bound on the true radius. The zero tuple yields value 0 and no
/// maximizers.
pub fn joint_numerical_radius(a: &MatTuple, cfg: &SolverConfig) -> Result<MaximizerSet> {
    cfg.validate()?;
    Ok(jnr_from_starts(a, &starting_points(a.n(), cfg), cfg))
}

/// Like [`joint_numerical_radius`] but with extra caller-supplied starts.
pub fn joint_numerical_radius_seeded(
    a: &MatTuple,
    extra_starts: &[CVector],
    cfg: &SolverConfig,
) -> Result<MaximizerSet> {
    cfg.validate()?;
    let mut starts = starting_points(a.n(), cfg);
    for s in extra_starts {
        if s.len() != a.n() {
            return Err(LinalgError::DimensionMismatch {
                expected: a.n(),
                found: s.len(),
            }
            .into());
        }
        if let Some(u) = s.normalized() {
            starts.push(u);
        }
    }
    Ok(jnr_from_starts(a, &starts, cfg))
}

fn jnr_from_starts(a: &MatTuple, starts: &[CVector], cfg: &SolverConfig) -> MaximizerSet {
    if a.is_zero() {
        return MaximizerSet {
            kind: NormKind::Jnr,
            value: 0.0,
            maximizers: Vec::new(),
        };
    }
    let candidates = parallel_map(starts, cfg.threads, |s| Maximizer::jnr(a, &ascend(a, s, cfg)));
    collect_maximizers(NormKind::Jnr, candidates)
}

/// Classical numerical radius `w(M) = max_{|x|=1} |⟨x|Mx⟩|`.
pub fn numerical_radius(m: &CMatrix, cfg: &SolverConfig) -> Result<MaximizerSet> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    joint_numerical_radius(&MatTuple::single(m.clone())?, cfg)
}

/// Top singular value of `a` and an orthonormal basis of its right singular
/// subspace (singular values within [`TOL_MAX`] of the top one).
pub fn top_right_singular_subspace(a: &CMatrix) -> Result<(f64, Vec<CVector>)> {
    let r = svd(a)?;
    let s1 = r.singular_values[0];
    if s1 == 0.0 {
        return Ok((0.0, Vec::new()));
    }
    let basis = r
        .singular_values
        .iter()
        .zip(r.right)
        .take_while(|(s, _)| **s >= (1.0 - TOL_MAX) * s1)
        .map(|(_, v)| v)
        .collect();
    Ok((s1, basis))
}

/// Joint operator norm: the top singular value of the stacked `dn x n` matrix,
/// with an orthonormal basis of the top right singular subspace as maximizers.
pub fn joint_operator_norm(a: &MatTuple) -> Result<MaximizerSet> {
    let (s1, basis) = top_right_singular_subspace(&a.stacked())?;
    let maximizers = basis.iter().map(|v| Maximizer::opnorm(a, v)).collect();
    Ok(MaximizerSet {
        kind: NormKind::Opnorm,
        value: s1,
        maximizers,
    })
}
