mod common;

use common::*;
use jnr::approximation::{best_approx_jnr, parallel_jnr, ApproxConfig};
use jnr::linalg::{herm_eig, inner, rank_one, svd, CMatrix, Complex64};
use jnr::oracle::{omega_by_sampling, OracleConfig};
use jnr::orthogonality::{
    certify_jnr_scaling, certify_jnr_single, certify_opnorm_scaling, min_norm_point, HullProblem, OrthoConfig,
};
use jnr::radius::{
    joint_numerical_radius, joint_operator_norm, numerical_radius, MatTuple, Maximizer, SolverConfig,
};
use jnr::subdifferential::{atom_for, directional_derivative, pairing};
use proptest::prelude::*;
use rand::Rng;

fn omega(a: &MatTuple) -> f64 {
    joint_numerical_radius(a, &SolverConfig::default()).unwrap().value
}

/// A tuple drawn from `seed`, with `n ∈ 1..=4` and `d ∈ 1..=3`.
fn arb_tuple() -> impl Strategy<Value = MatTuple> {
    (1usize..=4, 1usize..=3, any::<u64>()).prop_map(|(n, d, seed)| random_tuple(n, d, &mut rng(seed)))
}

fn arb_pair() -> impl Strategy<Value = (MatTuple, MatTuple)> {
    (1usize..=4, 1usize..=3, any::<u64>()).prop_map(|(n, d, seed)| {
        let mut r = rng(seed);
        (random_tuple(n, d, &mut r), random_tuple(n, d, &mut r))
    })
}

fn arb_scalar() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| c(re, im))
}

/// Eigenvectors of a random Hermitian matrix, as the columns of a unitary.
fn random_unitary(n: usize, seed: u64) -> CMatrix {
    let m = random_matrix(n, n, &mut rng(seed));
    let h = m.add(&m.adjoint()).unwrap();
    let eig = herm_eig(&h).unwrap();
    let mut data = vec![c(0.0, 0.0); n * n];
    for (j, v) in eig.eigenvectors.iter().enumerate() {
        for i in 0..n {
            data[i * n + j] = v[i];
        }
    }
    CMatrix::new(n, n, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn homogeneity(a in arb_tuple(), s in arb_scalar()) {
        let base = omega(&a);
        prop_assert!((omega(&a.scaled(s)) - s.norm() * base).abs() <= 1e-6 * (s.norm() * base).max(1e-12));
    }

    #[test]
    fn triangle_inequality((a, b) in arb_pair()) {
        prop_assert!(omega(&a.add(&b).unwrap()) <= omega(&a) + omega(&b) + 1e-6);
    }

    #[test]
    fn sandwich_and_operator_norm_bounds(a in arb_tuple()) {
        let cfg = SolverConfig::default();
        let w: Vec<f64> = a.matrices().iter().map(|m| numerical_radius(m, &cfg).unwrap().value).collect();
        let value = omega(&a);
        let upper = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(w.iter().cloned().fold(0.0, f64::max) <= value + 1e-6);
        prop_assert!(value <= upper + 1e-6);
        prop_assert!(value <= joint_operator_norm(&a).unwrap().value + 1e-6);
    }

    #[test]
    fn unitary_similarity_invariance(a in arb_tuple(), seed in any::<u64>()) {
        let u = random_unitary(a.n(), seed);
        let conjugated = a.conjugated(&u).unwrap();
        prop_assert!((omega(&conjugated) - omega(&a)).abs() <= 1e-8 * omega(&a).max(1.0));
    }

    #[test]
    fn maximizers_satisfy_their_invariants(a in arb_tuple()) {
        let set = joint_numerical_radius(&a, &SolverConfig::default()).unwrap();
        prop_assert!(!set.is_empty());
        prop_assert!(set.invariant_violation(&a).unwrap() <= 1e-9);
        let op = joint_operator_norm(&a).unwrap();
        prop_assert!(op.invariant_violation(&a).unwrap() <= 1e-9);
    }

    #[test]
    fn derivative_along_itself_is_the_radius(a in arb_tuple()) {
        let set = joint_numerical_radius(&a, &SolverConfig::default()).unwrap();
        let dd = directional_derivative(&a, &a, &set).unwrap().value;
        prop_assert!((dd - set.value).abs() <= 1e-8 * set.value.max(1.0));
        let unit = a.scaled(Complex64::new(1.0 / set.value, 0.0));
        let unit_set = joint_numerical_radius(&unit, &SolverConfig::default()).unwrap();
        let dd_unit = directional_derivative(&unit, &unit, &unit_set).unwrap().value;
        prop_assert!((dd_unit - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn derivative_below_secant((a, b) in arb_pair()) {
        let set = joint_numerical_radius(&a, &SolverConfig::default()).unwrap();
        let dd = directional_derivative(&a, &b, &set).unwrap().value;
        prop_assert!(dd <= omega(&a.add(&b).unwrap()) - set.value + 1e-6);
    }

    #[test]
    fn atoms_are_phase_invariant_and_normalized(a in arb_tuple(), phi in 0.0f64..std::f64::consts::TAU) {
        let set = joint_numerical_radius(&a, &SolverConfig::default()).unwrap();
        for m in &set.maximizers {
            let rotated = Maximizer {
                x: m.x.scaled(Complex64::from_polar(1.0, phi)),
                ..m.clone()
            };
            let g = atom_for(set.value, m);
            let h = atom_for(set.value, &rotated);
            for (x, y) in g.matrices().iter().zip(h.matrices()) {
                for (p, q) in x.as_slice().iter().zip(y.as_slice()) {
                    prop_assert!((p - q).norm() <= 1e-12);
                }
            }
            prop_assert!((pairing(&g, &a).unwrap() - set.value).abs() <= 1e-8);
        }
    }

    #[test]
    fn min_norm_point_is_optimal(seed in any::<u64>(), dim in 1usize..=5, count in 1usize..=12) {
        let mut r = rng(seed);
        let shift: Vec<f64> = (0..dim).map(|_| r.random_range(-1.5..1.5)).collect();
        let points: Vec<Vec<f64>> = (0..count)
            .map(|_| shift.iter().map(|s| s + r.random_range(-1.0..1.0)).collect())
            .collect();
        let hull = min_norm_point(&HullProblem::unlabeled(points.clone()).unwrap()).unwrap();
        let sq = hull.point.iter().map(|v| v * v).sum::<f64>();
        prop_assert!((sq.sqrt() - hull.min_norm).abs() <= 1e-12);
        let total: f64 = hull.weights.iter().map(|&(_, t)| t).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        prop_assert!(hull.weights.len() <= dim + 1);
        let mut combined = vec![0.0; dim];
        for &(i, t) in &hull.weights {
            prop_assert!(t > 0.0);
            for k in 0..dim {
                combined[k] += t * points[i][k];
            }
        }
        for k in 0..dim {
            prop_assert!((combined[k] - hull.point[k]).abs() <= 1e-12);
        }
        for p in &points {
            let dot: f64 = p.iter().zip(&hull.point).map(|(x, y)| x * y).sum();
            prop_assert!(dot >= sq - 1e-9);
        }
    }

    #[test]
    fn kernel_identities(seed in any::<u64>(), n in 1usize..=5, phi in 0.0f64..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let m = random_matrix(n, n, &mut r);
        let h = m.add(&m.adjoint()).unwrap();
        let eig = herm_eig(&h).unwrap();
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - h.trace().re).abs() <= 1e-9 * h.frobenius_norm().max(1.0));

        let s1 = svd(&m).unwrap().singular_values[0];
        for _ in 0..200 {
            let x = random_matrix(n, 1, &mut r).column(0);
            let x = x.normalized().unwrap();
            prop_assert!(m.matvec(&x).unwrap().norm() <= s1 + 1e-9);
        }

        let x = random_matrix(n, 1, &mut r).column(0);
        let y = random_matrix(n, 1, &mut r).column(0);
        let rotated = x.scaled(Complex64::from_polar(1.0, phi));
        let (p, q) = (rank_one(&x), rank_one(&rotated));
        for (u, v) in p.as_slice().iter().zip(q.as_slice()) {
            prop_assert!((u - v).norm() <= 1e-12 * x.norm_sqr().max(1.0));
        }
        let xy = inner(&x, &y).unwrap();
        let yx = inner(&y, &x).unwrap();
        prop_assert!((xy - yx.conj()).norm() <= 1e-14 * x.norm() * y.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certificate_decisions_are_scale_invariant(
        case in 0usize..5,
        s in arb_scalar(),
        t in arb_scalar(),
        seed in any::<u64>(),
    ) {
        prop_assume!(s.norm() > 0.1 && t.norm() > 0.1);
        let (a, b) = match case {
            0 => (single(sign2()), single(identity(2))),
            1 => (single(identity(2)), single(identity(2))),
            2 => (single(cube_roots()), single(identity(3))),
            3 => (single(real_diag(&[1.0, 0.0])), single(real_diag(&[0.0, 1.0]))),
            _ => {
                let mut r = rng(seed);
                (random_tuple(2, 2, &mut r), random_tuple(2, 2, &mut r))
            }
        };
        let cfg = OrthoConfig { probe: false, ..OrthoConfig::default() };
        let (sa, tb) = (a.scaled(s), b.scaled(t));
        type Certify = fn(&MatTuple, &MatTuple, &OrthoConfig) -> jnr::Result<jnr::orthogonality::OrthoOutcome>;
        let kinds: [Certify; 3] = [certify_jnr_scaling, certify_jnr_single, certify_opnorm_scaling];
        for certify in kinds {
            let plain = certify(&a, &b, &cfg).unwrap().is_certified();
            let scaled = certify(&sa, &tb, &cfg).unwrap().is_certified();
            prop_assert_eq!(plain, scaled);
        }
    }

    #[test]
    fn sampling_is_monotone_under_doubling(a in arb_tuple(), base in 64usize..512) {
        let cfg = |samples| OracleConfig { sphere_samples: samples, ..OracleConfig::default() };
        let small = omega_by_sampling(&a, &cfg(base)).unwrap();
        let large = omega_by_sampling(&a, &cfg(2 * base)).unwrap();
        prop_assert!(large >= small);
        prop_assert!(large <= omega(&a) + 1e-9);
    }

    #[test]
    fn anything_is_parallel_to_zero(a in arb_tuple()) {
        let zero = MatTuple::zeros(a.n(), a.d());
        let r = parallel_jnr(&a, &zero, &SolverConfig::default()).unwrap();
        prop_assert!(r.is_parallel);
        prop_assert_eq!(r.bound, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn best_approximation_never_exceeds_the_start(seed in any::<u64>(), n in 2usize..=3, d in 1usize..=2) {
        let mut r = rng(seed);
        let (a, b) = (random_tuple(n, d, &mut r), random_tuple(n, d, &mut r));
        let result = best_approx_jnr(&a, &b, &ApproxConfig::default()).unwrap();
        prop_assert!(result.value <= omega(&a) + 1e-9);
        prop_assert!(result.trace.windows(2).all(|w| w[1] <= w[0]));
        let at = a.shifted_by(&result.lambda_star, &b).unwrap();
        prop_assert!((omega(&at) - result.value).abs() <= 1e-8);
    }
}
