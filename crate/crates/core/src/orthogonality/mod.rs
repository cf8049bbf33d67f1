//! Birkhoff-James orthogonality certificates.
//!
//! `A` is orthogonal to the directions `B` when no coefficient vector `λ`
//! decreases the norm of `A + λB`. For each norm this reduces to deciding
//! whether the origin lies in the convex hull of finitely many points built
//! from the norm's maximizers; the hull weights are the certificate.
//!
//! | kind              | point for a maximizer `x`                    | dimension   |
//! |-------------------|----------------------------------------------|-------------|
//! | `jnr-scaling`     | `(⟨x|A_k x⟩ conj(⟨x|B_k x⟩))_k`               | `2d`        |
//! | `jnr-single`      | `Σ_k ⟨x|A_k x⟩ conj(⟨x|B_k x⟩)`               | `2`         |
//! | `opnorm-scaling`  | `(⟨A_k x|B_k x⟩)_k`                          | `2d`        |
//! | `opnorm-subspace` | `(⟨A x|W_j x⟩)_j` over a basis of the subspace | `2 dim W`   |
//!
//! Maximizer sets with a continuum of elements are sampled, so a certificate
//! is a proof while a refutation only says that no certificate was found over
//! the sampled set. Refutations carry a probed decreasing `λ` when one exists.

mod hull;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use hull::{min_norm_point, HullProblem, HullResult, GAP_TOL};

use crate::approximation::probe_descent;
use crate::error::{Error, Result};
use crate::linalg::{inner, svd, CMatrix, CVector};
use crate::radius::{
    joint_numerical_radius, random_unit, top_right_singular_subspace, ComplexCoefficients,
    MatTuple, NormKind, SolverConfig, TOL_MAX,
};

/// Default relative tolerance for "the origin is in the hull".
pub const DEFAULT_TOL: f64 = 1e-7;
/// Allowed deviation of `Σ t_i` from 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

const ZERO_MESSAGE: &str = "orthogonality needs a nonzero tuple A";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    JnrScaling,
    JnrSingle,
    OpnormScaling,
    OpnormSubspace,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::JnrScaling => "jnr-scaling",
            Self::JnrSingle => "jnr-single",
            Self::OpnormScaling => "opnorm-scaling",
            Self::OpnormSubspace => "opnorm-subspace",
        }
    }

    pub fn norm(self) -> NormKind {
        match self {
            Self::JnrScaling | Self::JnrSingle => NormKind::Jnr,
            Self::OpnormScaling | Self::OpnormSubspace => NormKind::Opnorm,
        }
    }

    /// Carathéodory bound `m + 1` on the support, where `directions` is `d`
    /// or `dim W`.
    pub fn support_bound(self, directions: usize) -> usize {
        match self {
            Self::JnrSingle => 3,
            _ => 2 * directions + 1,
        }
    }
}

impl std::fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub x: CVector,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub entries: Vec<CertificateEntry>,
    /// `Σ t_i v(x_i)` in real coordinates.
    pub residual: Vec<f64>,
}

impl Certificate {
    pub fn support(&self) -> usize {
        self.entries.len()
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refutation {
    pub kind: CertificateKind,
    /// Distance from the origin to the hull of the sampled points.
    pub min_norm: f64,
    pub threshold: f64,
    /// Norm of `A` itself.
    pub base_value: f64,
    /// Coefficients with `norm(A + λB) < norm(A)`, when the probe found one.
    pub witness_lambda: Option<ComplexCoefficients>,
    pub witness_value: Option<f64>,
}

impl Refutation {
    pub const NOTE: &'static str = "no certificate found over the sampled maximizer set";
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "outcome")]
pub enum OrthoOutcome {
    Certified(Certificate),
    Refuted(Refutation),
}

impl OrthoOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::Certified(_))
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Self::Certified(c) => Some(c),
            Self::Refuted(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Self::Refuted(r) => Some(r),
            Self::Certified(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthoConfig {
    pub solver: SolverConfig,
    /// Zero-in-hull threshold is `tol · norm(A) · max(norm(B), 1)`.
    pub tol: f64,
    /// Sampled unit vectors per degenerate top singular subspace of
    /// dimension `r`; `None` means `8 r²`.
    pub subspace_samples: Option<usize>,
    /// Search for a decreasing `λ` when refuting.
    pub probe: bool,
}

impl Default for OrthoConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            tol: DEFAULT_TOL,
            subspace_samples: None,
            probe: true,
        }
    }
}

impl OrthoConfig {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        Ok(())
    }
}

/// The data a certificate refers to.
#[derive(Debug, Clone, Copy)]
pub enum OrthoTarget<'a> {
    Tuples { a: &'a MatTuple, b: &'a MatTuple },
    Subspace { a: &'a CMatrix, basis: &'a [CMatrix] },
}

fn embed(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|v| [v.re, v.im]).collect()
}

fn unembed(p: &[f64]) -> Vec<Complex64> {
    p.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

fn require_nonzero(a: &MatTuple) -> Result<()> {
    if a.is_zero() {
        Err(Error::ZeroTuple(ZERO_MESSAGE))
    } else {
        Ok(())
    }
}

/// `max(s, 1)` guarded so a zero direction still yields a positive scale.
fn unit_floor(s: f64) -> f64 {
    s.max(1.0)
}

/// Opnorm of a matrix or stacked tuple.
fn spectral_norm(m: &CMatrix) -> Result<f64> {
    Ok(svd(m)?.singular_values[0])
}

fn jnr_value(t: &MatTuple, cfg: &SolverConfig) -> Result<f64> {
    Ok(joint_numerical_radius(t, cfg)?.value)
}

struct Search<'a> {
    kind: CertificateKind,
    vectors: Vec<CVector>,
    points: Vec<Vec<f64>>,
    threshold: f64,
    base_value: f64,
    direction_norm: f64,
    cfg: &'a OrthoConfig,
}

impl Search<'_> {
    /// Certifies when the hull reaches the origin; otherwise probes along the
    /// direction `to_lambda(p*)` for a decrease of `eval`.
    fn decide<F>(self, to_lambda: impl Fn(&[f64]) -> Vec<Complex64>, eval: F) -> Result<OrthoOutcome>
    where
        F: FnMut(&ComplexCoefficients) -> Result<f64>,
    {
        let problem = HullProblem::unlabeled(self.points)?;
        let hull = min_norm_point(&problem)?;
        if hull.min_norm <= self.threshold {
            let entries = hull
                .weights
                .iter()
                .map(|&(i, t)| CertificateEntry {
                    x: self.vectors[i].clone(),
                    t,
                })
                .collect();
            return Ok(OrthoOutcome::Certified(Certificate {
                kind: self.kind,
                entries,
                residual: hull.point,
            }));
        }
        let direction = ComplexCoefficients::new(to_lambda(&hull.point))?;
        let probe = if self.cfg.probe {
            let reach = 2.0 * self.base_value / self.direction_norm.max(f64::MIN_POSITIVE);
            probe_descent(self.base_value, &direction, reach, eval)?
        } else {
            None
        };
        Ok(OrthoOutcome::Refuted(Refutation {
            kind: self.kind,
            min_norm: hull.min_norm,
            threshold: self.threshold,
            base_value: self.base_value,
            witness_value: probe.as_ref().map(|p| p.value),
            witness_lambda: probe.map(|p| p.lambda),
        }))
    }
}

/// `(⟨x|A_k x⟩ conj(⟨x|B_k x⟩))_k`.
fn jnr_products(witnesses: &[Complex64], b: &MatTuple, x: &CVector) -> Vec<Complex64> {
    witnesses
        .iter()
        .zip(b.witnesses(x))
        .map(|(c, w)| c * w.conj())
        .collect()
}

fn certify_jnr(a: &MatTuple, b: &MatTuple, cfg: &OrthoConfig, single: bool) -> Result<OrthoOutcome> {
    cfg.validate()?;
    a.same_shape(b)?;
    require_nonzero(a)?;
    let set = joint_numerical_radius(a, &cfg.solver)?;
    let omega_b = jnr_value(b, &cfg.solver)?;
    let mut vectors = Vec::with_capacity(set.len());
    let mut points = Vec::with_capacity(set.len());
    for m in &set.maximizers {
        let products = jnr_products(&m.witnesses, b, &m.x);
        points.push(if single {
            embed(&[products.iter().sum()])
        } else {
            embed(&products)
        });
        vectors.push(m.x.clone());
    }
    let search = Search {
        kind: if single {
            CertificateKind::JnrSingle
        } else {
            CertificateKind::JnrScaling
        },
        vectors,
        points,
        threshold: cfg.tol * set.value * unit_floor(omega_b),
        base_value: set.value,
        direction_norm: omega_b,
        cfg,
    };
    let d = a.d();
    search.decide(
        |p| unembed(p).into_iter().map(|z| -z).collect(),
        |lambda| {
            let shifted = if single {
                a.shifted(lambda.as_slice()[0], b)?
            } else {
                a.shifted_by(lambda, b)?
            };
            debug_assert_eq!(shifted.d(), d);
            jnr_value(&shifted, &cfg.solver)
        },
    )
}

/// Decides `ω(A + λB) ≥ ω(A)` for all `λ ∈ ℂ^d`, the components of `λB`
/// being `λ_k B_k`.
pub fn certify_jnr_scaling(a: &MatTuple, b: &MatTuple, cfg: &OrthoConfig) -> Result<OrthoOutcome> {
    certify_jnr(a, b, cfg, false)
}

/// Decides `ω(A + λB) ≥ ω(A)` for all scalars `λ ∈ ℂ`.
pub fn certify_jnr_single(a: &MatTuple, b: &MatTuple, cfg: &OrthoConfig) -> Result<OrthoOutcome> {
    certify_jnr(a, b, cfg, true)
}

/// Orthonormal basis of a top singular subspace, plus (when its dimension
/// `r` exceeds one) balanced pairwise combinations and seeded random unit
/// vectors from it.
fn subspace_candidates(basis: &[CVector], cfg: &OrthoConfig) -> Vec<CVector> {
    let r = basis.len();
    let mut out = basis.to_vec();
    if r <= 1 {
        return out;
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..r {
        for j in (i + 1)..r {
            for phase in [
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
                Complex64::new(0.0, h),
                Complex64::new(0.0, -h),
            ] {
                out.push(basis[i].scaled(Complex64::new(h, 0.0)).axpy(phase, &basis[j]));
            }
        }
    }
    let samples = cfg.subspace_samples.unwrap_or(8 * r * r);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.solver.seed);
    for _ in 0..samples {
        let coef = random_unit(r, &mut rng);
        let mut v = CVector::zeros(basis[0].len());
        for (c, b) in coef.iter().zip(basis) {
            v = v.axpy(*c, b);
        }
        out.push(v.normalized().expect("orthonormal combination").canonical_phase());
    }
    out
}

/// `μ` with `A_k = μ_k B_k` for every `k`, if one exists.
fn proportionality(a: &MatTuple, b: &MatTuple) -> Option<Vec<Complex64>> {
    let scale = a.frobenius_norm().max(b.frobenius_norm());
    let tol = 1e-12 * scale;
    let mut mu = Vec::with_capacity(a.d());
    for (ak, bk) in a.matrices().iter().zip(b.matrices()) {
        let bb = bk.frobenius_norm().powi(2);
        let coef = if bb > 0.0 {
            bk.frobenius_inner(ak).ok()? / bb
        } else {
            Complex64::new(0.0, 0.0)
        };
        if ak.sub(&bk.scaled(coef)).ok()?.frobenius_norm() > tol {
            return None;
        }
        mu.push(coef);
    }
    Some(mu)
}

/// Decides `||A + λB|| ≥ ||A||` for all `λ ∈ ℂ^d` in the joint operator norm.
pub fn certify_opnorm_scaling(a: &MatTuple, b: &MatTuple, cfg: &OrthoConfig) -> Result<OrthoOutcome> {
    cfg.validate()?;
    a.same_shape(b)?;
    require_nonzero(a)?;
    let (s1, basis) = top_right_singular_subspace(&a.stacked())?;
    let norm_b = spectral_norm(&b.stacked())?;
    let vectors = subspace_candidates(&basis, cfg);
    let points = vectors
        .iter()
        .map(|x| {
            let w: Vec<Complex64> = a
                .matrices()
                .iter()
                .zip(b.matrices())
                .map(|(ak, bk)| inner(&ak.matvec(x)?, &bk.matvec(x)?))
                .collect::<std::result::Result<_, _>>()?;
            Ok(embed(&w))
        })
        .collect::<Result<Vec<_>>>()?;
    let search = Search {
        kind: CertificateKind::OpnormScaling,
        vectors,
        points,
        threshold: cfg.tol * s1 * unit_floor(norm_b),
        base_value: s1,
        direction_norm: norm_b,
        cfg,
    };
    let eval = |lambda: &ComplexCoefficients| spectral_norm(&a.shifted_by(lambda, b)?.stacked());
    if let Some(mu) = proportionality(a, b) {
        // A = μB: the shift λ = -μ cancels A exactly
        let lambda = ComplexCoefficients::new(mu.iter().map(|z| -z).collect())?;
        let value = eval(&lambda)?;
        let no_probe = OrthoConfig {
            probe: false,
            ..cfg.clone()
        };
        let outcome = Search { cfg: &no_probe, ..search }.decide(|p| unembed(p), eval)?;
        return Ok(match outcome {
            OrthoOutcome::Refuted(r) => OrthoOutcome::Refuted(Refutation {
                witness_lambda: Some(lambda),
                witness_value: Some(value),
                ..r
            }),
            certified => certified,
        });
    }
    search.decide(|p| unembed(p).into_iter().map(|z| -z.conj()).collect(), eval)
}

fn check_basis(a: &CMatrix, basis: &[CMatrix]) -> Result<()> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    for (index, w) in basis.iter().enumerate() {
        if w.rows() != a.rows() || w.cols() != a.cols() {
            return Err(Error::BasisShape {
                index,
                rows: w.rows(),
                cols: w.cols(),
                expected_rows: a.rows(),
                expected_cols: a.cols(),
            });
        }
    }
    Ok(())
}

fn subspace_shift(a: &CMatrix, basis: &[CMatrix], lambda: &[Complex64]) -> CMatrix {
    basis
        .iter()
        .zip(lambda)
        .fold(a.clone(), |acc, (w, l)| acc.add(&w.scaled(*l)).expect("checked shapes"))
}

/// Decides `||A + W|| ≥ ||A||` for every `W` in the span of `basis`, in the
/// operator norm. `A` and the basis may be rectangular.
pub fn certify_opnorm_subspace(a: &CMatrix, basis: &[CMatrix], cfg: &OrthoConfig) -> Result<OrthoOutcome> {
    cfg.validate()?;
    check_basis(a, basis)?;
    if a.is_zero() {
        return Err(Error::ZeroTuple(ZERO_MESSAGE));
    }
    let (s1, right) = top_right_singular_subspace(a)?;
    let norm_w = basis
        .iter()
        .map(spectral_norm)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let vectors = subspace_candidates(&right, cfg);
    let points = vectors
        .iter()
        .map(|x| {
            let ax = a.matvec(x)?;
            let w: Vec<Complex64> = basis
                .iter()
                .map(|wj| inner(&ax, &wj.matvec(x)?))
                .collect::<std::result::Result<_, _>>()?;
            Ok(embed(&w))
        })
        .collect::<Result<Vec<_>>>()?;
    let search = Search {
        kind: CertificateKind::OpnormSubspace,
        vectors,
        points,
        threshold: cfg.tol * s1 * unit_floor(norm_w),
        base_value: s1,
        direction_norm: norm_w,
        cfg,
    };
    search.decide(
        |p| unembed(p).into_iter().map(|z| -z.conj()).collect(),
        |lambda| spectral_norm(&subspace_shift(a, basis, lambda.as_slice())),
    )
}

/// Outcome of re-checking a certificate from scratch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub kind: CertificateKind,
    /// Recomputed `Σ t_i v(x_i)`.
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    pub threshold: f64,
    /// `|Σ t_i - 1|`, or infinity if some weight is not positive.
    pub weight_error: f64,
    /// Largest relative shortfall `(norm(A) - value(x_i)) / norm(A)`,
    /// including deviation of `||x_i||` from 1.
    pub maximizer_violation: f64,
    pub support: usize,
    pub support_bound: usize,
    pub accepted: bool,
}

impl VerificationReport {
    /// The largest violation among the checked conditions, each measured
    /// against its own tolerance (values ≤ 1 pass).
    pub fn max_violation(&self) -> f64 {
        let support = if self.support <= self.support_bound { 0.0 } else { f64::INFINITY };
        (self.residual_norm / self.threshold.max(f64::MIN_POSITIVE))
            .max(self.weight_error / WEIGHT_SUM_TOL)
            .max(self.maximizer_violation / TOL_MAX)
            .max(support)
    }
}

struct Evaluated {
    reference: f64,
    values: Vec<f64>,
    points: Vec<Vec<Complex64>>,
    threshold: f64,
    directions: usize,
}

fn evaluate_tuples(
    kind: CertificateKind,
    a: &MatTuple,
    b: &MatTuple,
    xs: &[CVector],
    cfg: &OrthoConfig,
) -> Result<Evaluated> {
    a.same_shape(b)?;
    let mut values = Vec::with_capacity(xs.len());
    let mut points = Vec::with_capacity(xs.len());
    for x in xs {
        if x.len() != a.n() {
            return Err(crate::linalg::LinalgError::DimensionMismatch {
                expected: a.n(),
                found: x.len(),
            }
            .into());
        }
        let mut value_sq = 0.0;
        let mut point = Vec::with_capacity(a.d());
        for (ak, bk) in a.matrices().iter().zip(b.matrices()) {
            let ax = ak.matvec(x)?;
            let bx = bk.matvec(x)?;
            match kind.norm() {
                NormKind::Jnr => {
                    let c = inner(x, &ax)?;
                    value_sq += c.norm_sqr();
                    point.push(c * inner(x, &bx)?.conj());
                }
                NormKind::Opnorm => {
                    value_sq += ax.norm_sqr();
                    point.push(inner(&ax, &bx)?);
                }
            }
        }
        if kind == CertificateKind::JnrSingle {
            point = vec![point.iter().sum()];
        }
        values.push(value_sq.sqrt());
        points.push(point);
    }
    let (reference, norm_b) = match kind.norm() {
        NormKind::Jnr => (jnr_value(a, &cfg.solver)?, jnr_value(b, &cfg.solver)?),
        NormKind::Opnorm => (spectral_norm(&a.stacked())?, spectral_norm(&b.stacked())?),
    };
    let reference = values.iter().copied().fold(reference, f64::max);
    Ok(Evaluated {
        reference,
        values,
        points,
        threshold: cfg.tol * reference * unit_floor(norm_b),
        directions: a.d(),
    })
}

fn evaluate_subspace(a: &CMatrix, basis: &[CMatrix], xs: &[CVector], cfg: &OrthoConfig) -> Result<Evaluated> {
    check_basis(a, basis)?;
    let mut values = Vec::with_capacity(xs.len());
    let mut points = Vec::with_capacity(xs.len());
    for x in xs {
        let ax = a.matvec(x)?;
        values.push(ax.norm());
        points.push(
            basis
                .iter()
                .map(|w| inner(&ax, &w.matvec(x)?))
                .collect::<std::result::Result<Vec<_>, _>>()?,
        );
    }
    let reference = values.iter().copied().fold(spectral_norm(a)?, f64::max);
    let norm_w = basis
        .iter()
        .map(spectral_norm)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(Evaluated {
        reference,
        values,
        points,
        threshold: cfg.tol * reference * unit_floor(norm_w),
        directions: basis.len(),
    })
}

/// Recomputes the maximizer conditions, weights and residual of `cert`
/// directly from the matrices.
pub fn verify_certificate(cert: &Certificate, target: OrthoTarget<'_>, cfg: &OrthoConfig) -> Result<VerificationReport> {
    let xs: Vec<CVector> = cert.entries.iter().map(|e| e.x.clone()).collect();
    let eval = match (cert.kind, target) {
        (CertificateKind::OpnormSubspace, OrthoTarget::Subspace { a, basis }) => {
            evaluate_subspace(a, basis, &xs, cfg)?
        }
        (CertificateKind::OpnormSubspace, _) | (_, OrthoTarget::Subspace { .. }) => {
            return Err(Error::InvalidConfig(
                "certificate kind does not match the verification target".into(),
            ))
        }
        (kind, OrthoTarget::Tuples { a, b }) => evaluate_tuples(kind, a, b, &xs, cfg)?,
    };

    let width = eval.points.first().map_or(0, Vec::len);
    let mut residual = vec![Complex64::new(0.0, 0.0); width];
    for (entry, point) in cert.entries.iter().zip(&eval.points) {
        for (r, p) in residual.iter_mut().zip(point) {
            *r += entry.t * p;
        }
    }
    let residual = embed(&residual);
    let residual_norm = residual.iter().map(|v| v * v).sum::<f64>().sqrt();

    let weights_positive = cert.entries.iter().all(|e| e.t > 0.0 && e.t.is_finite());
    let weight_error = if weights_positive && !cert.entries.is_empty() {
        (cert.entries.iter().map(|e| e.t).sum::<f64>() - 1.0).abs()
    } else {
        f64::INFINITY
    };
    let maximizer_violation = cert
        .entries
        .iter()
        .zip(&eval.values)
        .map(|(e, v)| {
            let shortfall = if eval.reference > 0.0 {
                (eval.reference - v) / eval.reference
            } else {
                0.0
            };
            shortfall.max((e.x.norm() - 1.0).abs())
        })
        .fold(0.0, f64::max);
    let support = cert.entries.len();
    let support_bound = cert.kind.support_bound(eval.directions);
    let accepted = weight_error <= WEIGHT_SUM_TOL
        && maximizer_violation <= TOL_MAX
        && residual_norm <= eval.threshold
        && support <= support_bound;
    Ok(VerificationReport {
        kind: cert.kind,
        residual,
        residual_norm,
        threshold: eval.threshold,
        weight_error,
        maximizer_violation,
        support,
        support_bound,
        accepted,
    })
}
