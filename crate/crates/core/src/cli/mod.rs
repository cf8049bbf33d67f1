//! Command-line front end. Reads matrix tuples from JSON files of `[re, im]`
//! pairs, runs one library operation and reports the result as text on
//! stdout and, with `--json`, as a structured document.

mod input;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::approximation::{best_approx_jnr, best_approx_jnr_single, parallel_jnr, ApproxConfig, PARALLEL_TOL};
use crate::linalg::{svd, CMatrix, CVector};
use crate::orthogonality::{
    certify_jnr_scaling, certify_jnr_single, certify_opnorm_scaling, certify_opnorm_subspace, verify_certificate,
    Certificate, CertificateKind, OrthoConfig, OrthoOutcome, OrthoTarget, Refutation,
};
use crate::radius::{
    joint_numerical_radius, joint_operator_norm, ComplexCoefficients, MatTuple, Maximizer, MaximizerSet, NormKind,
    SolverConfig,
};
use crate::subdifferential::{atom_for, directional_derivative, pairing, subgradient_atoms};

pub use input::{parse_basis_file, parse_tuple, parse_tuple_file, BasisFile, TupleFile};
pub use output::{sig, Report, SIGNIFICANT_DIGITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Scale-relative tolerance of the recomputations done by `verify`.
const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: file not found", .0.display())]
    Missing(PathBuf),
    #[error("{}: cannot read file: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: malformed JSON: {message}", path.display())]
    Malformed { path: PathBuf, message: String },
    #[error("{}: shape mismatch: {message}", path.display())]
    Shape { path: PathBuf, message: String },
    #[error("{}: {label} {matrix}, row {row}, col {col}: {message}", path.display())]
    Entry {
        path: PathBuf,
        label: String,
        matrix: usize,
        row: usize,
        col: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Library(#[from] crate::Error),
}

impl From<crate::linalg::LinalgError> for CliError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        Self::Library(e.into())
    }
}

#[derive(Debug, Parser)]
#[command(name = "jnr", version, about = "Joint numerical radius, joint operator norm and Birkhoff-James orthogonality of matrix tuples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// Random restarts of the radius solver (approx uses twice as many for its final evaluation).
    #[arg(long, global = true, default_value_t = 16)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Certificate tolerance, relative to the norm of A.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Write the full structured result to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Norm for ortho (jnr by default, opnorm in subspace mode).
    #[arg(long, global = true, value_enum)]
    norm: Option<Norm>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Scaling)]
    mode: Mode,
    /// Basis file for subspace mode: {"n", "m_rows", "basis": [matrices]}.
    #[arg(long, global = true, value_name = "FILE")]
    subspace: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Norm {
    Jnr,
    Opnorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Scaling,
    Single,
    Subspace,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Joint numerical radius and its maximizers.
    Radius { a: PathBuf },
    /// Joint operator norm and its maximizers.
    Opnorm { a: PathBuf },
    /// One-sided directional derivative of the joint numerical radius at A along B.
    Dderiv { a: PathBuf, b: PathBuf },
    /// Subgradient atoms of the joint numerical radius at A.
    Subdiff { a: PathBuf },
    /// Decide whether A is orthogonal to B (or to the --subspace basis).
    Ortho { a: PathBuf, b: Option<PathBuf> },
    /// Best approximation of A by multiples of B in the joint numerical radius.
    Approx { a: PathBuf, b: PathBuf },
    /// Decide whether A and B are parallel in the joint numerical radius.
    Parallel { a: PathBuf, b: PathBuf },
    /// Re-check a --json result against its input files.
    Verify { result: PathBuf, a: PathBuf, b: Option<PathBuf> },
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            let _ = writeln!(err, "error: {message}\n\nFor more information, try '--help'.");
            EXIT_USAGE
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

struct Context<'a> {
    flags: &'a Flags,
}

impl Context<'_> {
    fn solver(&self) -> SolverConfig {
        SolverConfig {
            restarts: self.flags.restarts,
            seed: self.flags.seed,
            threads: self.flags.threads,
            ..SolverConfig::default()
        }
    }

    fn ortho(&self) -> OrthoConfig {
        OrthoConfig {
            solver: self.solver(),
            tol: self.flags.tol,
            ..OrthoConfig::default()
        }
    }

    fn approx(&self) -> ApproxConfig {
        let defaults = ApproxConfig::default();
        ApproxConfig {
            solver: SolverConfig {
                seed: self.flags.seed,
                threads: self.flags.threads,
                ..defaults.solver.clone()
            },
            final_restarts: 2 * self.flags.restarts,
            tol: self.flags.tol,
            ..defaults
        }
    }

    fn kind(&self) -> Result<CertificateKind, CliError> {
        let mode = self.flags.mode;
        let norm = self.flags.norm.unwrap_or(if mode == Mode::Subspace { Norm::Opnorm } else { Norm::Jnr });
        match (norm, mode) {
            (Norm::Jnr, Mode::Scaling) => Ok(CertificateKind::JnrScaling),
            (Norm::Jnr, Mode::Single) => Ok(CertificateKind::JnrSingle),
            (Norm::Opnorm, Mode::Scaling) => Ok(CertificateKind::OpnormScaling),
            (Norm::Opnorm, Mode::Subspace) => Ok(CertificateKind::OpnormSubspace),
            (Norm::Jnr, Mode::Subspace) => Err(CliError::Usage("--mode subspace requires --norm opnorm".into())),
            (Norm::Opnorm, Mode::Single) => Err(CliError::Usage("--mode single requires --norm jnr".into())),
        }
    }

    fn approx_single(&self) -> Result<bool, CliError> {
        if self.flags.norm == Some(Norm::Opnorm) {
            return Err(CliError::Usage("best approximation is available for --norm jnr only".into()));
        }
        match self.flags.mode {
            Mode::Scaling => Ok(false),
            Mode::Single => Ok(true),
            Mode::Subspace => Err(CliError::Usage("best approximation supports --mode scaling or single".into())),
        }
    }
}

/// Inputs of a two-argument command after validation; `digest` covers the
/// files in command-line order.
enum Inputs {
    Tuples { a: MatTuple, b: MatTuple, digest: String },
    Subspace { a: CMatrix, basis: Vec<CMatrix>, digest: String },
}

impl Inputs {
    fn digest(&self) -> &str {
        match self {
            Self::Tuples { digest, .. } | Self::Subspace { digest, .. } => digest,
        }
    }

    fn target(&self) -> OrthoTarget<'_> {
        match self {
            Self::Tuples { a, b, .. } => OrthoTarget::Tuples { a, b },
            Self::Subspace { a, basis, .. } => OrthoTarget::Subspace { a, basis },
        }
    }
}

fn load_one(path: &Path) -> Result<(MatTuple, String), CliError> {
    let file = parse_tuple_file(path)?;
    let digest = input::digest(&[&file.bytes]);
    Ok((file.into_tuple(path)?, digest))
}

fn load_pair(a_path: &Path, b_path: &Path) -> Result<(MatTuple, MatTuple, String), CliError> {
    let a = parse_tuple_file(a_path)?;
    let b = parse_tuple_file(b_path)?;
    let digest = input::digest(&[&a.bytes, &b.bytes]);
    let a = a.into_tuple(a_path)?;
    let b = b.into_tuple(b_path)?;
    a.same_shape(&b)?;
    Ok((a, b, digest))
}

fn load_inputs(ctx: &Context<'_>, subspace: bool, a_path: &Path, b_path: Option<&Path>) -> Result<Inputs, CliError> {
    if subspace {
        if b_path.is_some() {
            return Err(CliError::Usage("subspace mode takes one tuple file and --subspace FILE".into()));
        }
        let basis_path = ctx
            .flags
            .subspace
            .as_deref()
            .ok_or_else(|| CliError::Usage("subspace mode requires --subspace FILE".into()))?;
        let a = parse_tuple_file(a_path)?;
        let basis = parse_basis_file(basis_path)?;
        let digest = input::digest(&[&a.bytes, &basis.bytes]);
        if a.matrices.len() != 1 {
            return Err(CliError::Shape {
                path: a_path.to_path_buf(),
                message: format!("subspace mode needs d = 1, found d = {}", a.matrices.len()),
            });
        }
        if (a.rows, a.n) != (basis.rows, basis.n) {
            return Err(CliError::Shape {
                path: basis_path.to_path_buf(),
                message: format!(
                    "basis matrices are {}x{}, A is {}x{}",
                    basis.rows, basis.n, a.rows, a.n
                ),
            });
        }
        let a = a.matrices.into_iter().next().expect("d = 1");
        Ok(Inputs::Subspace {
            a,
            basis: basis.basis,
            digest,
        })
    } else {
        if ctx.flags.subspace.is_some() {
            return Err(CliError::Usage("--subspace is only used with --mode subspace".into()));
        }
        let b_path = b_path.ok_or_else(|| CliError::Usage("this mode needs two tuple files A and B".into()))?;
        let (a, b, digest) = load_pair(a_path, b_path)?;
        Ok(Inputs::Tuples { a, b, digest })
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = Context { flags: &cli.flags };
    if cli.flags.restarts == 0 || cli.flags.threads == 0 {
        return Err(CliError::Usage("--restarts and --threads must be >= 1".into()));
    }
    if !(cli.flags.tol > 0.0 && cli.flags.tol.is_finite()) {
        return Err(CliError::Usage("--tol must be a positive number".into()));
    }
    let mut text = String::new();
    let (report, code) = match &cli.command {
        Command::Radius { a } => radius(&ctx, a, NormKind::Jnr, &mut text)?,
        Command::Opnorm { a } => radius(&ctx, a, NormKind::Opnorm, &mut text)?,
        Command::Dderiv { a, b } => dderiv(&ctx, a, b, &mut text)?,
        Command::Subdiff { a } => subdiff(&ctx, a, &mut text)?,
        Command::Ortho { a, b } => ortho(&ctx, a, b.as_deref(), &mut text)?,
        Command::Approx { a, b } => approx(&ctx, a, b, &mut text)?,
        Command::Parallel { a, b } => parallel(&ctx, a, b, &mut text)?,
        Command::Verify { result, a, b } => verify(&ctx, result, a, b.as_deref(), &mut text)?,
    };
    if let Some(path) = &cli.flags.json {
        let mut body = serde_json::to_string_pretty(&report).expect("reports serialize");
        body.push('\n');
        std::fs::write(path, body).map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        })?;
    }
    out.write_all(text.as_bytes()).map_err(|source| CliError::Output {
        path: PathBuf::from("<stdout>"),
        source,
    })?;
    Ok(code)
}

fn push_maximizers(text: &mut String, set: &MaximizerSet) {
    text.push_str(&format!("maximizers: {}\n", set.len()));
    for (i, m) in set.maximizers.iter().enumerate() {
        text.push_str(&format!(
            "  [{}] x = {}\n      witnesses = {}\n",
            i + 1,
            output::cvector(&m.x),
            output::vector(&m.witnesses)
        ));
    }
}

fn norm_set(a: &MatTuple, kind: NormKind, cfg: &SolverConfig) -> Result<MaximizerSet, CliError> {
    Ok(match kind {
        NormKind::Jnr => joint_numerical_radius(a, cfg)?,
        NormKind::Opnorm => joint_operator_norm(a)?,
    })
}

fn radius(ctx: &Context<'_>, a: &Path, kind: NormKind, text: &mut String) -> Result<(Report, i32), CliError> {
    let (a, digest) = load_one(a)?;
    let set = norm_set(&a, kind, &ctx.solver())?;
    let (command, label) = match kind {
        NormKind::Jnr => ("radius", "omega"),
        NormKind::Opnorm => ("opnorm", "opnorm"),
    };
    text.push_str(&format!("{label} = {}\n", sig(set.value)));
    push_maximizers(text, &set);
    let mut report = Report::new(command, digest);
    report.value = Some(set.value);
    report.maximizers = Some(set.maximizers);
    Ok((report, EXIT_OK))
}

fn dderiv(ctx: &Context<'_>, a: &Path, b: &Path, text: &mut String) -> Result<(Report, i32), CliError> {
    let (a, b, digest) = load_pair(a, b)?;
    let set = joint_numerical_radius(&a, &ctx.solver())?;
    let dd = directional_derivative(&a, &b, &set)?;
    text.push_str(&format!("omega = {}\n", sig(set.value)));
    text.push_str(&format!("dderiv = {}\n", sig(dd.value)));
    text.push_str(&format!("attained at x = {}\n", output::cvector(&dd.argmax_maximizer.x)));
    push_maximizers(text, &set);
    let mut report = Report::new("dderiv", digest);
    report.value = Some(dd.value);
    report.omega = Some(set.value);
    report.argmax = Some(dd.argmax_maximizer);
    report.maximizers = Some(set.maximizers);
    Ok((report, EXIT_OK))
}

fn subdiff(ctx: &Context<'_>, a: &Path, text: &mut String) -> Result<(Report, i32), CliError> {
    let (a, digest) = load_one(a)?;
    let set = joint_numerical_radius(&a, &ctx.solver())?;
    let atoms = subgradient_atoms(&a, &set)?;
    text.push_str(&format!("omega = {}\n", sig(set.value)));
    text.push_str(&format!("atoms: {}\n", atoms.len()));
    for (i, atom) in atoms.iter().enumerate() {
        let p = pairing(&atom.tuple, &a)?;
        text.push_str(&format!(
            "  [{}] from x = {}\n      pairing with A = {}\n",
            i + 1,
            output::cvector(&atom.source.x),
            sig(p)
        ));
    }
    let mut report = Report::new("subdiff", digest);
    report.value = Some(set.value);
    report.omega = Some(set.value);
    report.maximizers = Some(set.maximizers);
    report.atoms = Some(atoms);
    Ok((report, EXIT_OK))
}

fn certify(kind: CertificateKind, inputs: &Inputs, cfg: &OrthoConfig) -> Result<OrthoOutcome, CliError> {
    Ok(match (kind, inputs) {
        (CertificateKind::JnrScaling, Inputs::Tuples { a, b, .. }) => certify_jnr_scaling(a, b, cfg)?,
        (CertificateKind::JnrSingle, Inputs::Tuples { a, b, .. }) => certify_jnr_single(a, b, cfg)?,
        (CertificateKind::OpnormScaling, Inputs::Tuples { a, b, .. }) => certify_opnorm_scaling(a, b, cfg)?,
        (CertificateKind::OpnormSubspace, Inputs::Subspace { a, basis, .. }) => certify_opnorm_subspace(a, basis, cfg)?,
        _ => return Err(CliError::Usage("inputs do not match the requested mode".into())),
    })
}

fn norm_name(kind: CertificateKind) -> &'static str {
    match kind.norm() {
        NormKind::Jnr => "jnr",
        NormKind::Opnorm => "opnorm",
    }
}

fn mode_name(kind: CertificateKind) -> &'static str {
    match kind {
        CertificateKind::JnrScaling | CertificateKind::OpnormScaling => "scaling",
        CertificateKind::JnrSingle => "single",
        CertificateKind::OpnormSubspace => "subspace",
    }
}

fn ortho(ctx: &Context<'_>, a: &Path, b: Option<&Path>, text: &mut String) -> Result<(Report, i32), CliError> {
    let kind = ctx.kind()?;
    let inputs = load_inputs(ctx, kind == CertificateKind::OpnormSubspace, a, b)?;
    let outcome = certify(kind, &inputs, &ctx.ortho())?;
    let mut report = Report::new("ortho", inputs.digest().to_string());
    report.norm = Some(norm_name(kind));
    report.mode = Some(mode_name(kind));
    let code = match outcome {
        OrthoOutcome::Certified(cert) => {
            text.push_str("orthogonal\n");
            text.push_str(&output::certificate_table(&cert));
            report.value = Some(cert.residual_norm());
            report.certificate = Some(cert);
            EXIT_OK
        }
        OrthoOutcome::Refuted(refutation) => {
            text.push_str(&format!("refuted ({})\n", Refutation::NOTE));
            text.push_str(&format!(
                "  min_norm = {}  threshold = {}\n",
                sig(refutation.min_norm),
                sig(refutation.threshold)
            ));
            if let (Some(lambda), Some(value)) = (&refutation.witness_lambda, refutation.witness_value) {
                text.push_str(&format!(
                    "  decrease: norm {} -> {} at lambda = {}\n",
                    sig(refutation.base_value),
                    sig(value),
                    output::vector(lambda.as_slice())
                ));
            }
            report.value = Some(refutation.min_norm);
            report.refutation = Some(refutation);
            EXIT_REFUTED
        }
    };
    Ok((report, code))
}

fn approx(ctx: &Context<'_>, a: &Path, b: &Path, text: &mut String) -> Result<(Report, i32), CliError> {
    let single = ctx.approx_single()?;
    let (a, b, digest) = load_pair(a, b)?;
    let cfg = ctx.approx();
    let result = if single {
        best_approx_jnr_single(&a, &b, &cfg)?
    } else {
        best_approx_jnr(&a, &b, &cfg)?
    };
    text.push_str(&format!("value = {}\n", sig(result.value)));
    text.push_str(&format!("lambda* = {}\n", output::vector(result.lambda_star.as_slice())));
    match &result.certificate {
        Some(cert) => text.push_str(&output::certificate_table(cert)),
        None => text.push_str("no optimality certificate found\n"),
    }
    let mut report = Report::new("approx", digest);
    report.norm = Some("jnr");
    report.mode = Some(if single { "single" } else { "scaling" });
    report.value = Some(result.value);
    report.lambda_star = Some(result.lambda_star);
    report.certificate = result.certificate;
    Ok((report, EXIT_OK))
}

fn parallel(ctx: &Context<'_>, a: &Path, b: &Path, text: &mut String) -> Result<(Report, i32), CliError> {
    let (a, b, digest) = load_pair(a, b)?;
    let result = parallel_jnr(&a, &b, &ctx.solver())?;
    text.push_str(if result.is_parallel { "parallel\n" } else { "not parallel\n" });
    text.push_str(&format!("achieved = {}\nbound = {}\n", sig(result.achieved), sig(result.bound)));
    if let Some(x) = &result.witness_x {
        text.push_str(&format!("witness x = {}\n", output::cvector(x)));
    }
    let mut report = Report::new("parallel", digest);
    report.value = Some(result.achieved);
    report.parallel = Some(result);
    Ok((report, EXIT_OK))
}

/// Fields of a `--json` result that `verify` reads back.
#[derive(Deserialize)]
struct StoredReport {
    command: String,
    input_digest: String,
    value: Option<f64>,
    maximizers: Option<Vec<Maximizer>>,
    certificate: Option<Certificate>,
    refutation: Option<StoredRefutation>,
    norm: Option<String>,
    mode: Option<String>,
    omega: Option<f64>,
    atoms: Option<Vec<StoredAtom>>,
    lambda_star: Option<ComplexCoefficients>,
    parallel: Option<StoredParallel>,
}

#[derive(Deserialize)]
struct StoredRefutation {
    kind: CertificateKind,
    base_value: f64,
    witness_lambda: Option<ComplexCoefficients>,
    witness_value: Option<f64>,
}

#[derive(Deserialize)]
struct StoredAtom {
    tuple: Vec<CMatrix>,
    source: Maximizer,
}

#[derive(Deserialize)]
struct StoredParallel {
    is_parallel: bool,
    witness_x: Option<CVector>,
    achieved: f64,
    bound: f64,
}

struct Checks(Vec<output::Check>);

impl Checks {
    fn close(&mut self, name: &str, found: f64, expected: f64) {
        let scale = expected.abs().max(1.0);
        let passed = (found - expected).abs() <= VERIFY_TOL * scale;
        self.push(name, passed, format!("{} vs {}", sig(found), sig(expected)));
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.0.push(output::Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn required<T>(field: Option<T>, name: &str) -> Result<T, CliError> {
    field.ok_or_else(|| CliError::Usage(format!("result file has no `{name}` field")))
}

fn kind_from_names(norm: Option<&str>, mode: Option<&str>) -> Result<CertificateKind, CliError> {
    match (norm, mode) {
        (Some("jnr"), Some("scaling")) => Ok(CertificateKind::JnrScaling),
        (Some("jnr"), Some("single")) => Ok(CertificateKind::JnrSingle),
        (Some("opnorm"), Some("scaling")) => Ok(CertificateKind::OpnormScaling),
        (Some("opnorm"), Some("subspace")) => Ok(CertificateKind::OpnormSubspace),
        _ => Err(CliError::Usage("result file has no valid `norm`/`mode` pair".into())),
    }
}

/// `norm(A + λ·B)` for the shift convention of `kind`.
fn shifted_norm(kind: CertificateKind, inputs: &Inputs, lambda: &ComplexCoefficients, cfg: &SolverConfig) -> Result<f64, CliError> {
    match inputs {
        Inputs::Tuples { a, b, .. } => {
            let shifted = if kind == CertificateKind::JnrSingle {
                if lambda.len() != 1 {
                    return Err(crate::Error::CoefficientCount {
                        expected: 1,
                        found: lambda.len(),
                    }
                    .into());
                }
                a.shifted(lambda.as_slice()[0], b)?
            } else {
                a.shifted_by(lambda, b)?
            };
            Ok(norm_set(&shifted, kind.norm(), cfg)?.value)
        }
        Inputs::Subspace { a, basis, .. } => {
            if lambda.len() != basis.len() {
                return Err(crate::Error::CoefficientCount {
                    expected: basis.len(),
                    found: lambda.len(),
                }
                .into());
            }
            let mut m = a.clone();
            for (l, w) in lambda.as_slice().iter().zip(basis) {
                m = m.add(&w.scaled(*l))?;
            }
            Ok(svd(&m)?.singular_values[0])
        }
    }
}

fn base_norm(inputs: &Inputs, kind: NormKind, cfg: &SolverConfig) -> Result<f64, CliError> {
    match inputs {
        Inputs::Tuples { a, .. } => Ok(norm_set(a, kind, cfg)?.value),
        Inputs::Subspace { a, .. } => Ok(svd(a)?.singular_values[0]),
    }
}

fn verify(ctx: &Context<'_>, result: &Path, a: &Path, b: Option<&Path>, text: &mut String) -> Result<(Report, i32), CliError> {
    let bytes = std::fs::read(result).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::Missing(result.to_path_buf())
        } else {
            CliError::Io {
                path: result.to_path_buf(),
                source,
            }
        }
    })?;
    let stored: StoredReport = serde_json::from_slice(&bytes).map_err(|e| CliError::Malformed {
        path: result.to_path_buf(),
        message: e.to_string(),
    })?;
    let cfg = ctx.solver();
    let mut checks = Checks(Vec::new());
    let mut certificate_report = None;

    let subspace = stored.mode.as_deref() == Some("subspace");
    let inputs = match stored.command.as_str() {
        "radius" | "opnorm" | "subdiff" => {
            if b.is_some() {
                return Err(CliError::Usage(format!("verifying `{}` takes one tuple file", stored.command)));
            }
            let (a, digest) = load_one(a)?;
            let b = MatTuple::zeros(a.n(), a.d());
            Inputs::Tuples { a, b, digest }
        }
        "dderiv" | "ortho" | "approx" | "parallel" => load_inputs(ctx, subspace, a, b)?,
        "verify" => return Err(CliError::Usage("cannot verify a verification report".into())),
        other => return Err(CliError::Usage(format!("unknown command `{other}` in result file"))),
    };
    checks.push(
        "input digest",
        inputs.digest() == stored.input_digest,
        format!("{} vs {}", inputs.digest(), stored.input_digest),
    );

    match stored.command.as_str() {
        "radius" | "opnorm" | "dderiv" | "subdiff" => {
            let Inputs::Tuples { a, b, .. } = &inputs else {
                unreachable!("tuple commands load tuples")
            };
            let kind = if stored.command == "opnorm" { NormKind::Opnorm } else { NormKind::Jnr };
            let value = match stored.command.as_str() {
                "radius" | "opnorm" => required(stored.value, "value")?,
                _ => required(stored.omega, "omega")?,
            };
            let set = MaximizerSet {
                kind,
                value,
                maximizers: required(stored.maximizers, "maximizers")?,
            };
            checks.push("maximizers present", !set.is_empty(), format!("{} maximizers", set.len()));
            let violation = set.invariant_violation(a)?;
            checks.push(
                "maximizer invariants",
                violation <= VERIFY_TOL * value.max(1.0),
                format!("largest violation {}", sig(violation)),
            );
            checks.close("norm value", value, norm_set(a, kind, &cfg)?.value);
            if stored.command == "dderiv" {
                let dd = directional_derivative(a, b, &set)?;
                checks.close("directional derivative", required(stored.value, "value")?, dd.value);
            }
            if stored.command == "subdiff" {
                let atoms = required(stored.atoms, "atoms")?;
                checks.push("one atom per maximizer", atoms.len() == set.len(), format!("{} atoms", atoms.len()));
                let mut worst: f64 = 0.0;
                for atom in &atoms {
                    let tuple = MatTuple::new(atom.tuple.clone())?;
                    let rebuilt = atom_for(value, &atom.source);
                    worst = worst.max(tuple.sub(&rebuilt)?.frobenius_norm());
                    worst = worst.max((pairing(&tuple, a)? - value).abs());
                }
                checks.push(
                    "atoms rebuilt and paired with A",
                    worst <= VERIFY_TOL * value.max(1.0),
                    format!("largest deviation {}", sig(worst)),
                );
            }
        }
        "ortho" => {
            let kind = kind_from_names(stored.norm.as_deref(), stored.mode.as_deref())?;
            match (stored.certificate, stored.refutation) {
                (Some(cert), None) => {
                    checks.push("certificate kind", cert.kind == kind, cert.kind.to_string());
                    let report = verify_certificate(&cert, inputs.target(), &ctx.ortho())?;
                    checks.push(
                        "certificate",
                        report.accepted,
                        format!("residual {} threshold {}", sig(report.residual_norm), sig(report.threshold)),
                    );
                    certificate_report = Some(report);
                }
                (None, Some(refutation)) => {
                    checks.push("refutation kind", refutation.kind == kind, refutation.kind.to_string());
                    let base = base_norm(&inputs, kind.norm(), &cfg)?;
                    checks.close("base norm", refutation.base_value, base);
                    match (&refutation.witness_lambda, refutation.witness_value) {
                        (Some(lambda), Some(value)) => {
                            let found = shifted_norm(kind, &inputs, lambda, &cfg)?;
                            checks.close("witness value", value, found);
                            checks.push(
                                "witness decreases the norm",
                                found < base,
                                format!("{} < {}", sig(found), sig(base)),
                            );
                        }
                        _ => {
                            let again = certify(kind, &inputs, &ctx.ortho())?;
                            checks.push(
                                "refutation reproduced",
                                !again.is_certified(),
                                "no decreasing lambda recorded".into(),
                            );
                        }
                    }
                }
                _ => return Err(CliError::Usage("ortho result needs exactly one of certificate or refutation".into())),
            }
        }
        "approx" => {
            let Inputs::Tuples { a, b, .. } = &inputs else {
                return Err(CliError::Usage("approx results refer to two tuple files".into()));
            };
            let kind = kind_from_names(stored.norm.as_deref(), stored.mode.as_deref())?;
            let lambda = required(stored.lambda_star, "lambda_star")?;
            let value = required(stored.value, "value")?;
            checks.close("value at lambda*", value, shifted_norm(kind, &inputs, &lambda, &cfg)?);
            checks.push(
                "no worse than lambda = 0",
                value <= norm_set(a, NormKind::Jnr, &cfg)?.value * (1.0 + VERIFY_TOL),
                String::new(),
            );
            if let Some(cert) = stored.certificate {
                let shifted = if kind == CertificateKind::JnrSingle {
                    a.shifted(lambda.as_slice()[0], b)?
                } else {
                    a.shifted_by(&lambda, b)?
                };
                let report = verify_certificate(&cert, OrthoTarget::Tuples { a: &shifted, b }, &ctx.ortho())?;
                checks.push(
                    "optimality certificate",
                    report.accepted,
                    format!("residual {} threshold {}", sig(report.residual_norm), sig(report.threshold)),
                );
                certificate_report = Some(report);
            }
        }
        "parallel" => {
            let Inputs::Tuples { a, b, .. } = &inputs else {
                return Err(CliError::Usage("parallel results refer to two tuple files".into()));
            };
            let stored = required(stored.parallel, "parallel")?;
            let bound = joint_numerical_radius(a, &cfg)?.value * joint_numerical_radius(b, &cfg)?.value;
            checks.close("bound", stored.bound, bound);
            if let Some(x) = &stored.witness_x {
                let s: Complex64 = a.witnesses(x).iter().zip(b.witnesses(x)).map(|(c, w)| c * w.conj()).sum();
                let x_unit = (x.norm() - 1.0).abs() <= VERIFY_TOL;
                checks.push("witness is a unit vector", x_unit, sig(x.norm()));
                checks.close("achieved at witness", stored.achieved, s.norm());
            }
            let verdict = stored.bound == 0.0 || stored.achieved >= (1.0 - PARALLEL_TOL) * stored.bound;
            checks.push("verdict consistent", verdict == stored.is_parallel, String::new());
        }
        _ => unreachable!("commands were matched above"),
    }

    let accepted = checks.0.iter().all(|c| c.passed);
    text.push_str(if accepted { "verified\n" } else { "rejected\n" });
    for c in &checks.0 {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        if c.detail.is_empty() {
            text.push_str(&format!("  {mark} {}\n", c.name));
        } else {
            text.push_str(&format!("  {mark} {}: {}\n", c.name, c.detail));
        }
    }
    let mut report = Report::new("verify", inputs.digest().to_string());
    report.verification = Some(output::Verification {
        verified_command: stored.command,
        accepted,
        checks: checks.0,
        certificate: certificate_report,
    });
    Ok((report, if accepted { EXIT_OK } else { EXIT_ERROR }))
}
