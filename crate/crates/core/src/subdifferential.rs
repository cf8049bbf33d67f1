//! Subdifferential of the joint numerical radius at a nonzero tuple.
//!
//! Every maximizer `x` of `ω(A)` contributes the extreme point
//! `(1/ω(A)) (c_1 x x*, ..., c_d x x*)` with `c_k = ⟨x|A_k x⟩`, and `∂ω(A)` is
//! the convex hull of these atoms. The pairing is the real trace form
//! `Re Σ_k tr(C_k* D_k)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{rank_one, CMatrix};
use crate::radius::{joint_numerical_radius, Maximizer, MaximizerSet, MatTuple, NormKind, SolverConfig};

/// Values of `ω(A)` at or below this are treated as the zero tuple.
pub const ZERO_RADIUS: f64 = 1e-12;
/// Slack allowed in the sampled subgradient inequality.
pub const SUBGRADIENT_SLACK: f64 = 1e-6;

const ZERO_MESSAGE: &str = "subdifferential at the zero tuple is not available";

/// One extreme point of `∂ω(A)` and the maximizer it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubgradientAtom {
    #[serde(serialize_with = "serialize_tuple")]
    pub tuple: MatTuple,
    pub source: Maximizer,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionalDerivative {
    pub value: f64,
    pub argmax_maximizer: Maximizer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubgradientCheck {
    pub holds: bool,
    /// `max_B [ω(A) + pairing(G, B - A) - ω(B)]` over the probes.
    pub worst_violation: f64,
    pub violating: Option<MatTuple>,
    pub probes: usize,
}

fn serialize_tuple<S: serde::Serializer>(t: &MatTuple, s: S) -> std::result::Result<S::Ok, S::Error> {
    t.matrices().serialize(s)
}

/// `Re Σ_k tr(C_k* D_k)`.
pub fn pairing(c: &MatTuple, d: &MatTuple) -> Result<f64> {
    c.same_shape(d)?;
    let mut acc = 0.0;
    for (ck, dk) in c.matrices().iter().zip(d.matrices()) {
        acc += ck.frobenius_inner(dk)?.re;
    }
    Ok(acc)
}

fn require_nonzero(maxset: &MaximizerSet) -> Result<f64> {
    if maxset.value <= ZERO_RADIUS || maxset.maximizers.is_empty() {
        return Err(Error::ZeroTuple(ZERO_MESSAGE));
    }
    if maxset.kind != NormKind::Jnr {
        return Err(Error::InvalidConfig(
            "maximizer set must come from the joint numerical radius".into(),
        ));
    }
    Ok(maxset.value)
}

fn check_maximizer_shape(a: &MatTuple, m: &Maximizer) -> Result<()> {
    if m.x.len() != a.n() || m.witnesses.len() != a.d() {
        return Err(Error::TupleMismatch {
            left_d: a.d(),
            left_n: a.n(),
            right_d: m.witnesses.len(),
            right_n: m.x.len(),
        });
    }
    Ok(())
}

/// The atom `(1/ω) (c_1 x x*, ..., c_d x x*)` for a maximizer `x`.
pub fn atom_for(omega: f64, m: &Maximizer) -> MatTuple {
    let projector = rank_one(&m.x);
    let matrices = m
        .witnesses
        .iter()
        .map(|&c| projector.scaled(c / omega))
        .collect();
    MatTuple::new(matrices).expect("witnesses are non-empty")
}

/// One atom per maximizer; their convex hull is (an inner approximation
/// of) `∂ω(A)`.
pub fn subgradient_atoms(a: &MatTuple, maxset: &MaximizerSet) -> Result<Vec<SubgradientAtom>> {
    if a.is_zero() {
        return Err(Error::ZeroTuple(ZERO_MESSAGE));
    }
    let omega = require_nonzero(maxset)?;
    maxset
        .maximizers
        .iter()
        .map(|m| {
            check_maximizer_shape(a, m)?;
            Ok(SubgradientAtom {
                tuple: atom_for(omega, m),
                source: m.clone(),
            })
        })
        .collect()
}

/// One-sided derivative `lim_{t→0+} (ω(A + tB) - ω(A))/t`, evaluated as the
/// maximum over the supplied maximizers of `(1/ω) Re Σ_k c_k conj(⟨x|B_k x⟩)`.
pub fn directional_derivative(
    a: &MatTuple,
    b: &MatTuple,
    maxset: &MaximizerSet,
) -> Result<DirectionalDerivative> {
    a.same_shape(b)?;
    if a.is_zero() {
        return Err(Error::ZeroTuple(ZERO_MESSAGE));
    }
    let omega = require_nonzero(maxset)?;
    let mut best: Option<(f64, &Maximizer)> = None;
    for m in &maxset.maximizers {
        check_maximizer_shape(a, m)?;
        let bw = b.witnesses(&m.x);
        let s: f64 = m
            .witnesses
            .iter()
            .zip(&bw)
            .map(|(c, w)| (c * w.conj()).re)
            .sum::<f64>()
            / omega;
        if best.is_none_or(|(v, _)| s > v) {
            best = Some((s, m));
        }
    }
    let (value, m) = best.expect("non-empty maximizer set");
    Ok(DirectionalDerivative {
        value,
        argmax_maximizer: m.clone(),
    })
}

fn random_tuple(n: usize, d: usize, rng: &mut ChaCha8Rng) -> MatTuple {
    let matrices = (0..d)
        .map(|_| {
            let data = (0..n * n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            CMatrix::new(n, n, data).expect("finite samples")
        })
        .collect();
    MatTuple::new(matrices).expect("consistent shapes")
}

/// Sampled test of `ω(B) ≥ ω(A) + pairing(G, B - A)`.
///
/// Probes `B = 0`, `B = 2A`, then `samples` random tuples: alternately
/// perturbations of `A` and unrelated tuples, at log-uniform scales. A
/// `true` result is evidence, not proof.
pub fn is_subgradient(
    a: &MatTuple,
    g: &MatTuple,
    samples: usize,
    cfg: &SolverConfig,
) -> Result<SubgradientCheck> {
    a.same_shape(g)?;
    let omega_a = joint_numerical_radius(a, cfg)?.value;
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5u64.rotate_left(60));

    let mut probes = vec![MatTuple::zeros(a.n(), a.d()), a.scaled(Complex64::new(2.0, 0.0))];
    for i in 0..samples {
        let r = random_tuple(a.n(), a.d(), &mut rng);
        let size = 10f64.powf(rng.random_range(-2.0..1.0)) * scale / r.frobenius_norm();
        let r = r.scaled(Complex64::new(size, 0.0));
        probes.push(if i % 2 == 0 { a.add(&r)? } else { r });
    }

    let mut worst = f64::NEG_INFINITY;
    let mut violating = None;
    for b in &probes {
        let omega_b = joint_numerical_radius(b, cfg)?.value;
        let violation = omega_a + pairing(g, &b.sub(a)?)? - omega_b;
        if violation > worst {
            worst = violation;
            if violation > SUBGRADIENT_SLACK {
                violating = Some(b.clone());
            }
        }
    }
    Ok(SubgradientCheck {
        holds: worst <= SUBGRADIENT_SLACK,
        worst_violation: worst,
        violating,
        probes: probes.len(),
    })
}
