use num_complex::Complex64;
use serde::Serialize;

use crate::approximation::ParallelismResult;
use crate::linalg::CVector;
use crate::orthogonality::{Certificate, Refutation, VerificationReport};
use crate::radius::{ComplexCoefficients, Maximizer};
use crate::subdifferential::SubgradientAtom;

/// Significant digits of every number printed as text.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Formats `v` with [`SIGNIFICANT_DIGITS`] significant digits, switching to
/// exponent notation outside `[1e-4, 1e9)`.
pub fn sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = SIGNIFICANT_DIGITS - 1;
    if v == 0.0 {
        return format!("{:.*}", digits, 0.0);
    }
    let scientific = format!("{:.*e}", digits, v);
    let exponent: i32 = scientific
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("exponent of a formatted float");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exponent) {
        let decimals = (digits as i32 - exponent).max(0) as usize;
        format!("{:.*}", decimals, v)
    } else {
        scientific
    }
}

pub fn complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{}{}i", sig(z.re), sign, sig(z.im.abs()))
}

pub fn vector(v: &[Complex64]) -> String {
    let parts: Vec<String> = v.iter().map(|&z| complex(z)).collect();
    format!("({})", parts.join(", "))
}

pub fn cvector(v: &CVector) -> String {
    vector(v.as_slice())
}

/// The structured result written by `--json`. The first six fields are
/// always present, `null` when they do not apply to the command.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub input_digest: String,
    pub value: Option<f64>,
    pub maximizers: Option<Vec<Maximizer>>,
    pub certificate: Option<Certificate>,
    pub refutation: Option<Refutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Maximizer>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<SubgradientAtom>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_star: Option<ComplexCoefficients>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallel: Option<ParallelismResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

impl Report {
    pub fn new(command: &'static str, input_digest: String) -> Self {
        Self {
            command,
            input_digest,
            value: None,
            maximizers: None,
            certificate: None,
            refutation: None,
            norm: None,
            mode: None,
            omega: None,
            argmax: None,
            atoms: None,
            lambda_star: None,
            parallel: None,
            verification: None,
        }
    }
}

/// What `verify` checked and whether every check passed.
#[derive(Debug, Serialize)]
pub struct Verification {
    pub verified_command: String,
    pub accepted: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<VerificationReport>,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn certificate_table(cert: &Certificate) -> String {
    let mut out = format!(
        "certificate ({}), support {}, residual {}\n",
        cert.kind,
        cert.support(),
        sig(cert.residual_norm())
    );
    out.push_str(&format!("  {:>3}  {:<16}  x\n", "i", "t"));
    for (i, e) in cert.entries.iter().enumerate() {
        out.push_str(&format!("  {:>3}  {:<16}  {}\n", i + 1, sig(e.t), cvector(&e.x)));
    }
    out
}
