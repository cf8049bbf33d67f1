//! Acceptance criteria, one test per criterion. Each test prints a single
//! `criterion N: PASS|FAIL` line with the measured figures before asserting.

mod common;

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use common::*;
use jnr::approximation::{best_approx_jnr, best_approx_jnr_single, parallel_jnr, ApproxConfig};
use jnr::linalg::{herm_eig, CMatrix, Complex64};
use jnr::oracle::{
    best_approx_by_grid, dd_by_finite_difference, min_norm_by_enumeration, omega_by_sampling, ortho_by_grid,
    ortho_by_grid_opnorm, ortho_by_grid_single, ortho_by_grid_subspace, parallel_by_mu_grid, OracleConfig,
};
use jnr::orthogonality::{
    certify_jnr_scaling, certify_jnr_single, certify_opnorm_scaling, certify_opnorm_subspace, min_norm_point,
    verify_certificate, CertificateKind, HullProblem, OrthoConfig, OrthoOutcome, OrthoTarget,
};
use jnr::radius::{joint_numerical_radius, joint_operator_norm, ComplexCoefficients, MatTuple, SolverConfig};
use jnr::subdifferential::{directional_derivative, is_subgradient, pairing, subgradient_atoms};
use rand::Rng;

fn report(criterion: u32, passed: bool, detail: String) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} ({detail})");
    assert!(passed, "criterion {criterion} failed: {detail}");
}

fn solver() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn criterion_01_directional_derivative_matches_finite_difference() {
    let start = Instant::now();
    let mut rng = rng(101);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = 2 + i % 3;
        let d = 1 + (i / 3) % 3;
        let a = random_tuple(n, d, &mut rng);
        let b = random_tuple(n, d, &mut rng);
        let set = joint_numerical_radius(&a, &solver()).unwrap();
        let analytic = directional_derivative(&a, &b, &set).unwrap().value;
        let fd = dd_by_finite_difference(&a, &b, 1e-5, &OracleConfig::default()).unwrap();
        worst = worst.max((analytic - fd).abs());
    }
    let elapsed = start.elapsed();
    report(
        1,
        worst <= 5e-4 && elapsed < Duration::from_secs(120),
        format!("50 instances, max |analytic - fd| = {worst:.3e}, {:.1} s", elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_02_atoms_are_subgradients() {
    let mut rng = rng(202);
    let mut instances: Vec<MatTuple> = vec![
        single(sign2()),
        single(identity(2)),
        tuple(vec![sign2(), sign2().scaled(c(0.0, 1.0))]),
        single(cube_roots()),
    ];
    while instances.len() < 20 {
        let i = instances.len();
        instances.push(random_tuple(2 + i % 3, 1 + i % 3, &mut rng));
    }
    let mut atoms_checked = 0;
    let mut worst_violation: f64 = f64::NEG_INFINITY;
    let mut worst_pairing: f64 = 0.0;
    let mut all_hold = true;
    for a in &instances {
        let set = joint_numerical_radius(a, &solver()).unwrap();
        for atom in subgradient_atoms(a, &set).unwrap() {
            let check = is_subgradient(a, &atom.tuple, 100, &solver()).unwrap();
            all_hold &= check.holds && check.worst_violation <= 1e-6;
            worst_violation = worst_violation.max(check.worst_violation);
            worst_pairing = worst_pairing.max((pairing(&atom.tuple, a).unwrap() - set.value).abs());
            atoms_checked += 1;
        }
    }
    report(
        2,
        all_hold && worst_pairing <= 1e-8,
        format!(
            "20 instances, {atoms_checked} atoms, worst violation {worst_violation:.3e}, worst |pairing - omega| {worst_pairing:.3e}"
        ),
    );
}

#[test]
fn criterion_03_radius_values_and_sampling_oracle() {
    let exact = [
        (single(identity(2)), 1.0),
        (single(sign2()), 1.0),
        (single(nilpotent2()), 0.5),
    ];
    let mut worst_exact: f64 = 0.0;
    for (a, expected) in &exact {
        let v = joint_numerical_radius(a, &solver()).unwrap().value;
        worst_exact = worst_exact.max((v - expected).abs());
    }
    let mut rng = rng(303);
    let mut below: f64 = f64::NEG_INFINITY;
    let mut worst_rel: f64 = 0.0;
    for i in 0..20 {
        let n = 2 + i % 2;
        let d = 1 + (i / 2) % 3;
        let a = random_tuple(n, d, &mut rng);
        let solved = joint_numerical_radius(&a, &solver()).unwrap().value;
        let sampled = omega_by_sampling(&a, &OracleConfig::for_shape(n, d)).unwrap();
        below = below.max(sampled - solved);
        worst_rel = worst_rel.max((solved - sampled).abs() / solved);
    }
    report(
        3,
        worst_exact <= 1e-8 && below <= 1e-9 && worst_rel <= 1e-3,
        format!(
            "exact error {worst_exact:.3e}, max(sampler - solver) {below:.3e}, max relative gap {worst_rel:.3e}"
        ),
    );
}

enum Target {
    Tuples(MatTuple, MatTuple),
    Subspace(CMatrix, Vec<CMatrix>),
}

struct Case {
    name: &'static str,
    kind: CertificateKind,
    target: Target,
}

struct Decided {
    name: &'static str,
    kind: CertificateKind,
    outcome: OrthoOutcome,
    verified: Option<bool>,
    grid_orthogonal: bool,
    directions: usize,
}

fn corpus() -> Vec<Case> {
    use CertificateKind::*;
    let tuples = |name, kind, a, b| Case {
        name,
        kind,
        target: Target::Tuples(a, b),
    };
    let mut rng = rng(404);
    let i2 = || single(identity(2));
    let mut cases = vec![
        tuples("sign vs I", JnrScaling, single(sign2()), i2()),
        tuples("I vs I", JnrScaling, i2(), i2()),
        tuples("nilpotent vs I", JnrScaling, single(nilpotent2()), i2()),
        tuples("E11 vs E22", JnrScaling, single(real_diag(&[1.0, 0.0])), single(real_diag(&[0.0, 1.0]))),
        tuples("diag(2,-1) vs I", JnrScaling, single(real_diag(&[2.0, -1.0])), i2()),
        tuples(
            "paired signs vs (I, I)",
            JnrScaling,
            tuple(vec![sign2(), sign2().scaled(c(0.0, 1.0))]),
            tuple(vec![identity(2), identity(2)]),
        ),
        tuples("diag(1,-1,0) vs I3", JnrScaling, single(real_diag(&[1.0, -1.0, 0.0])), single(identity(3))),
        tuples("cube roots vs I3", JnrScaling, single(cube_roots()), single(identity(3))),
        tuples("sign vs I", JnrSingle, single(sign2()), i2()),
        tuples("sign vs sign", JnrSingle, single(sign2()), single(sign2())),
        tuples("cube roots vs I3", JnrSingle, single(cube_roots()), single(identity(3))),
        tuples(
            "paired signs vs (I, I)",
            JnrSingle,
            tuple(vec![sign2(), sign2().scaled(c(0.0, 1.0))]),
            tuple(vec![identity(2), identity(2)]),
        ),
        tuples("sign vs I", OpnormScaling, single(sign2()), i2()),
        tuples("I vs I", OpnormScaling, i2(), i2()),
        tuples("E11 vs E22", OpnormScaling, single(real_diag(&[1.0, 0.0])), single(real_diag(&[0.0, 1.0]))),
        tuples(
            "(E11, 0) vs (E22, E22)",
            OpnormScaling,
            tuple(vec![real_diag(&[1.0, 0.0]), real_diag(&[0.0, 0.0])]),
            tuple(vec![real_diag(&[0.0, 1.0]), real_diag(&[0.0, 1.0])]),
        ),
        Case {
            name: "sign vs span{I}",
            kind: OpnormSubspace,
            target: Target::Subspace(sign2(), vec![identity(2)]),
        },
        Case {
            name: "I vs span{I}",
            kind: OpnormSubspace,
            target: Target::Subspace(identity(2), vec![identity(2)]),
        },
        Case {
            name: "E11 vs span{E12, E21}",
            kind: OpnormSubspace,
            target: Target::Subspace(unit(2, 2, 0, 0), vec![unit(2, 2, 0, 1), unit(2, 2, 1, 0)]),
        },
        Case {
            name: "row e1 vs span{row e2}",
            kind: OpnormSubspace,
            target: Target::Subspace(unit(1, 2, 0, 0), vec![unit(1, 2, 0, 1)]),
        },
        Case {
            name: "row e1 vs span{row e1}",
            kind: OpnormSubspace,
            target: Target::Subspace(unit(1, 2, 0, 0), vec![unit(1, 2, 0, 0)]),
        },
    ];
    for (name, kind, n, d) in [
        ("random n=2 d=1", JnrScaling, 2, 1),
        ("random n=3 d=1", JnrScaling, 3, 1),
        ("random n=2 d=2", JnrScaling, 2, 2),
        ("random n=2 d=2", JnrSingle, 2, 2),
        ("random n=3 d=1", OpnormScaling, 3, 1),
        ("random n=2 d=2", OpnormScaling, 2, 2),
    ] {
        let a = random_tuple(n, d, &mut rng);
        let b = random_tuple(n, d, &mut rng);
        cases.push(tuples(name, kind, a, b));
    }
    let a = random_matrix(2, 3, &mut rng);
    let w = vec![random_matrix(2, 3, &mut rng)];
    cases.push(Case {
        name: "random 2x3 vs span{W}",
        kind: OpnormSubspace,
        target: Target::Subspace(a, w),
    });
    cases
}

fn decide(case: Case) -> Decided {
    let cfg = OrthoConfig::default();
    let (outcome, directions, grid_orthogonal, verified) = match &case.target {
        Target::Tuples(a, b) => {
            let oracle = OracleConfig::for_shape(a.n(), a.d());
            let (outcome, grid) = match case.kind {
                CertificateKind::JnrScaling => (certify_jnr_scaling(a, b, &cfg), ortho_by_grid(a, b, &oracle)),
                CertificateKind::JnrSingle => (certify_jnr_single(a, b, &cfg), ortho_by_grid_single(a, b, &oracle)),
                CertificateKind::OpnormScaling => {
                    (certify_opnorm_scaling(a, b, &cfg), ortho_by_grid_opnorm(a, b, &oracle))
                }
                CertificateKind::OpnormSubspace => unreachable!("subspace cases use a basis"),
            };
            let outcome = outcome.unwrap();
            let verified = outcome
                .certificate()
                .map(|cert| verify_certificate(cert, OrthoTarget::Tuples { a, b }, &cfg).unwrap().accepted);
            (outcome, a.d(), grid.unwrap().orthogonal, verified)
        }
        Target::Subspace(a, basis) => {
            let oracle = OracleConfig::for_shape(a.cols(), basis.len());
            let outcome = certify_opnorm_subspace(a, basis, &cfg).unwrap();
            let verified = outcome
                .certificate()
                .map(|cert| verify_certificate(cert, OrthoTarget::Subspace { a, basis }, &cfg).unwrap().accepted);
            let grid = ortho_by_grid_subspace(a, basis, &oracle).unwrap();
            (outcome, basis.len(), grid.orthogonal, verified)
        }
    };
    Decided {
        name: case.name,
        kind: case.kind,
        outcome,
        verified,
        grid_orthogonal,
        directions,
    }
}

fn decided_corpus() -> &'static [Decided] {
    static DECIDED: OnceLock<Vec<Decided>> = OnceLock::new();
    DECIDED.get_or_init(|| corpus().into_iter().map(decide).collect())
}

#[test]
fn criterion_04_orthogonality_certificates() {
    let a = single(sign2());
    let b = single(identity(2));
    let outcome = certify_jnr_scaling(&a, &b, &OrthoConfig::default()).unwrap();
    let example_ok = match outcome.certificate() {
        Some(cert) => {
            cert.entries.len() == 2
                && cert.entries.iter().all(|e| (e.t - 0.5).abs() <= 1e-10)
                && cert.residual_norm() <= 1e-10
        }
        None => false,
    };

    let decided = decided_corpus();
    let mut failures = Vec::new();
    let mut certified = 0;
    let mut refuted = 0;
    for case in decided {
        let ok = match &case.outcome {
            OrthoOutcome::Certified(_) => {
                certified += 1;
                case.verified == Some(true) && case.grid_orthogonal
            }
            OrthoOutcome::Refuted(_) => {
                refuted += 1;
                !case.grid_orthogonal
            }
        };
        if !ok {
            failures.push(format!("{} [{}]", case.name, case.kind));
        }
    }
    report(
        4,
        example_ok && failures.is_empty(),
        format!(
            "sign/I example {}, corpus {} cases: {certified} certified, {refuted} refuted, disagreements {:?}",
            if example_ok { "ok" } else { "wrong" },
            decided.len(),
            failures
        ),
    );
}

#[test]
fn criterion_05_caratheodory_support_bounds() {
    let mut certificates = Vec::new();
    for case in decided_corpus() {
        if let Some(cert) = case.outcome.certificate() {
            certificates.push((cert.kind, cert.support(), case.directions));
        }
    }
    // Orthogonal constructions with many maximizers: diagonal A with
    // unimodular entries against the identity.
    for n in 3..=6 {
        let diag: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        let a = single(CMatrix::from_diag(&diag));
        let b = single(identity(n));
        for outcome in [
            certify_jnr_scaling(&a, &b, &OrthoConfig::default()).unwrap(),
            certify_jnr_single(&a, &b, &OrthoConfig::default()).unwrap(),
        ] {
            let cert = outcome.certificate().expect("roots of unity against I are orthogonal");
            certificates.push((cert.kind, cert.support(), 1));
        }
    }
    let violations: Vec<_> = certificates
        .iter()
        .filter(|(kind, support, dirs)| *support > kind.support_bound(*dirs))
        .collect();
    report(
        5,
        violations.is_empty() && !certificates.is_empty(),
        format!("{} certificates, {} over the bound", certificates.len(), violations.len()),
    );
}

/// `s_1` of the stacked matrix via the top eigenvalue of `Σ A_k* A_k`.
fn gram_s1(a: &MatTuple) -> f64 {
    let mut gram = CMatrix::zeros(a.n(), a.n());
    for m in a.matrices() {
        gram = gram.add(&m.adjoint().matmul(m).unwrap()).unwrap();
    }
    let eig = herm_eig(&gram).unwrap();
    eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(0.0).sqrt()
}

#[test]
fn criterion_06_joint_operator_norm() {
    let mut rng = rng(606);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let a = random_tuple(2 + i % 3, 1 + (i / 3) % 3, &mut rng);
        let v = joint_operator_norm(&a).unwrap().value;
        worst = worst.max((v - gram_s1(&a)).abs());
    }
    let ii = tuple(vec![identity(2), identity(2)]);
    let sqrt2 = (joint_operator_norm(&ii).unwrap().value - std::f64::consts::SQRT_2).abs();
    report(
        6,
        worst <= 1e-10 && sqrt2 <= 1e-12,
        format!("50 instances, max |opnorm - s1| = {worst:.3e}; (I, I) error {sqrt2:.3e}"),
    );
}

fn shifted(a: &MatTuple, b: &MatTuple, lambda: &[Complex64], single: bool) -> MatTuple {
    if single {
        a.shifted(lambda[0], b).unwrap()
    } else {
        a.shifted_by(&ComplexCoefficients::new(lambda.to_vec()).unwrap(), b).unwrap()
    }
}

#[test]
fn criterion_07_best_approximation() {
    let cfg = ApproxConfig::default();
    let i2 = single(identity(2));
    let r = best_approx_jnr(&i2, &i2, &cfg).unwrap();
    let identity_ok = (r.lambda_star.as_slice()[0] - c(-1.0, 0.0)).norm() <= 1e-6 && r.value.abs() <= 1e-6;

    let mut rng = rng(707);
    let mut worst_gap: f64 = 0.0;
    let mut worst_convexity: f64 = f64::NEG_INFINITY;
    let mut certificates = 0;
    let mut certificate_failures = 0;
    let omega = |t: &MatTuple| joint_numerical_radius(t, &solver()).unwrap().value;
    for i in 0..20 {
        let n = 2 + i % 2;
        let d = 1 + (i / 2) % 2;
        let single_mode = i % 4 == 3;
        let a = random_tuple(n, d, &mut rng);
        let b = random_tuple(n, d, &mut rng);
        let r = if single_mode {
            best_approx_jnr_single(&a, &b, &cfg).unwrap()
        } else {
            best_approx_jnr(&a, &b, &cfg).unwrap()
        };
        let grid = best_approx_by_grid(&a, &b, single_mode, &OracleConfig::default()).unwrap();
        worst_gap = worst_gap.max((r.value - grid.value).abs());
        if let Some(cert) = &r.certificate {
            certificates += 1;
            let at = shifted(&a, &b, r.lambda_star.as_slice(), single_mode);
            let accepted = verify_certificate(cert, OrthoTarget::Tuples { a: &at, b: &b }, &OrthoConfig::default())
                .unwrap()
                .accepted;
            if !accepted || cert.support() > cert.kind.support_bound(d) {
                certificate_failures += 1;
            }
        }
        let dim = if single_mode { 1 } else { d };
        let l1: Vec<Complex64> = (0..dim).map(|_| random_scalar(&mut rng).scale(2.0)).collect();
        let l2: Vec<Complex64> = (0..dim).map(|_| random_scalar(&mut rng).scale(2.0)).collect();
        let mid: Vec<Complex64> = l1.iter().zip(&l2).map(|(x, y)| (x + y) / 2.0).collect();
        let lhs = omega(&shifted(&a, &b, &mid, single_mode));
        let rhs = (omega(&shifted(&a, &b, &l1, single_mode)) + omega(&shifted(&a, &b, &l2, single_mode))) / 2.0;
        worst_convexity = worst_convexity.max(lhs - rhs);
    }
    report(
        7,
        identity_ok && worst_gap <= 1e-3 && worst_convexity <= 1e-6 && certificate_failures == 0,
        format!(
            "I/I {}, 20 instances max |descent - oracle| {worst_gap:.3e}, worst midpoint excess {worst_convexity:.3e}, {certificates} certificates ({certificate_failures} rejected)",
            if identity_ok { "ok" } else { "wrong" }
        ),
    );
}

#[test]
fn criterion_08_parallelism() {
    let s = single(sign2());
    let r = parallel_jnr(&s, &s, &solver()).unwrap();
    let sign_ok = r.is_parallel && (r.achieved - 1.0).abs() <= 1e-9;

    let mut rng = rng(808);
    let mut pairs: Vec<(MatTuple, MatTuple)> = Vec::new();
    for i in 0..4 {
        let a = random_tuple(2 + i % 2, 1 + i % 2, &mut rng);
        let b = a.scaled(random_scalar(&mut rng));
        pairs.push((a, b));
    }
    pairs.push((single(real_diag(&[1.0, 0.0])), single(real_diag(&[1.0, 0.5]))));
    pairs.push((single(sign2()), single(identity(2))));
    for d in 1..=2 {
        // A shared dominant direction e1 with aligned witnesses, plus a small
        // unrelated block.
        let alpha: Vec<Complex64> = (0..d).map(|_| random_scalar(&mut rng) + c(2.0, 0.0)).collect();
        let beta = random_scalar(&mut rng) + c(0.0, 1.5);
        let block = |scale: Complex64, rng: &mut rand_chacha::ChaCha8Rng| {
            let small = random_matrix(2, 2, rng).scaled(c(0.1, 0.0));
            let mut m = CMatrix::zeros(3, 3);
            let mut data = m.as_slice().to_vec();
            data[0] = scale;
            for i in 0..2 {
                for j in 0..2 {
                    data[(i + 1) * 3 + j + 1] = small.row(i)[j];
                }
            }
            m = CMatrix::new(3, 3, data).unwrap();
            m
        };
        let a = tuple(alpha.iter().map(|&al| block(al, &mut rng)).collect());
        let b = tuple(alpha.iter().map(|&al| block(al * beta, &mut rng)).collect());
        pairs.push((a, b));
    }
    while pairs.len() < 20 {
        let i = pairs.len();
        let n = 2 + i % 2;
        let d = 1 + i % 2;
        pairs.push((random_tuple(n, d, &mut rng), random_tuple(n, d, &mut rng)));
    }
    let mut disagreements = Vec::new();
    let mut parallel_count = 0;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let ours = parallel_jnr(a, b, &solver()).unwrap();
        let oracle = parallel_by_mu_grid(a, b, &OracleConfig::default()).unwrap();
        if ours.is_parallel {
            parallel_count += 1;
        }
        if ours.is_parallel != oracle.parallel {
            disagreements.push(i);
        }
    }
    report(
        8,
        sign_ok && disagreements.is_empty(),
        format!(
            "sign/sign achieved {:.12}, 20 pairs ({parallel_count} parallel), disagreements {disagreements:?}",
            r.achieved
        ),
    );
}

#[test]
fn criterion_09_min_norm_point_matches_enumeration() {
    let mut rng = rng(909);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let dim = if i % 2 == 0 { 2 } else { 4 };
        let count = 1 + rng.random_range(0..8);
        let offset: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0) * (i % 3) as f64).collect();
        let points: Vec<Vec<f64>> = (0..count)
            .map(|_| (0..dim).map(|k| offset[k] + rng.random_range(-1.0..1.0)).collect())
            .collect();
        let ours = min_norm_point(&HullProblem::unlabeled(points.clone()).unwrap()).unwrap();
        let brute = min_norm_by_enumeration(&points).unwrap();
        worst = worst.max((ours.min_norm - brute).abs());
    }
    report(9, worst <= 1e-9, format!("100 sets, max |wolfe - enumeration| = {worst:.3e}"));
}

fn jnr_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jnr"))
}

#[test]
fn criterion_10_cli_examples_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("A.json");
    let b = dir.path().join("B.json");
    std::fs::write(&a, r#"{"n":2,"d":1,"matrices":[[[[1,0],[0,0]],[[0,0],[-1,0]]]]}"#).unwrap();
    std::fs::write(&b, tuple_json(&single(identity(2)))).unwrap();

    let radius = jnr_bin().arg("radius").arg(&a).output().unwrap();
    let radius_text = String::from_utf8_lossy(&radius.stdout).to_string();
    let radius_ok = radius.status.code() == Some(0)
        && radius_text.contains("omega = 1.000000")
        && radius_text.contains("maximizers: 2");

    let ortho = jnr_bin()
        .args(["ortho", a.to_str().unwrap(), b.to_str().unwrap(), "--norm", "jnr", "--mode", "scaling"])
        .output()
        .unwrap();
    let ortho_text = String::from_utf8_lossy(&ortho.stdout).to_string();
    let ortho_ok = ortho.status.code() == Some(0) && ortho_text.contains("certificate (jnr-scaling)");

    let refuted = jnr_bin()
        .args(["ortho", a.to_str().unwrap(), a.to_str().unwrap(), "--norm", "jnr", "--mode", "single"])
        .output()
        .unwrap();
    let refuted_ok =
        refuted.status.code() == Some(2) && String::from_utf8_lossy(&refuted.stdout).contains("refuted");

    let mut identical = true;
    for args in [
        vec!["radius", a.to_str().unwrap()],
        vec!["ortho", a.to_str().unwrap(), b.to_str().unwrap()],
        vec!["approx", a.to_str().unwrap(), b.to_str().unwrap()],
    ] {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("out{run}.json"));
            let run = jnr_bin().args(&args).args(["--seed", "7", "--json"]).arg(&path).output().unwrap();
            assert!(run.status.code().is_some());
            outputs.push(std::fs::read(&path).unwrap());
        }
        identical &= !outputs[0].is_empty() && outputs[0] == outputs[1];
    }
    report(
        10,
        radius_ok && ortho_ok && refuted_ok && identical,
        format!(
            "radius {}, ortho scaling exit {:?}, ortho single exit {:?}, byte-identical JSON {identical}",
            if radius_ok { "ok" } else { "wrong" },
            ortho.status.code(),
            refuted.status.code()
        ),
    );
}
