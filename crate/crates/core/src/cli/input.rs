use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::linalg::CMatrix;
use crate::radius::MatTuple;

use super::CliError;

/// A JSON number, or one of the bare tokens `NaN`, `Infinity`, `-Infinity`
/// after they have been quoted by [`quote_non_finite`].
#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Number(f64),
    Token(String),
}

const NON_FINITE_TOKENS: [&str; 3] = ["-Infinity", "Infinity", "NaN"];

type RawMatrix = Vec<Vec<Vec<RawNumber>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTuple {
    n: usize,
    d: usize,
    #[serde(default)]
    m_rows: Option<usize>,
    matrices: Vec<RawMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    n: usize,
    m_rows: usize,
    basis: Vec<RawMatrix>,
}

/// Matrices read from a tuple file, each `rows x n`.
#[derive(Debug, Clone)]
pub struct TupleFile {
    pub n: usize,
    pub rows: usize,
    pub matrices: Vec<CMatrix>,
    pub bytes: Vec<u8>,
}

impl TupleFile {
    pub fn into_tuple(self, path: &Path) -> Result<MatTuple, CliError> {
        if self.rows != self.n {
            return Err(shape(path, format!("m_rows = {} differs from n = {}; square matrices are required", self.rows, self.n)));
        }
        Ok(MatTuple::new(self.matrices)?)
    }
}

/// A subspace basis file, each matrix `m_rows x n`.
#[derive(Debug, Clone)]
pub struct BasisFile {
    pub n: usize,
    pub rows: usize,
    pub basis: Vec<CMatrix>,
    pub bytes: Vec<u8>,
}

fn shape(path: &Path, message: String) -> CliError {
    CliError::Shape {
        path: path.to_path_buf(),
        message,
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::Missing(path.to_path_buf())
        } else {
            CliError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, bytes: &[u8]) -> Result<T, CliError> {
    let malformed = |message: String| CliError::Malformed {
        path: path.to_path_buf(),
        message,
    };
    let text = std::str::from_utf8(bytes).map_err(|e| malformed(e.to_string()))?;
    serde_json::from_str(&quote_non_finite(text)).map_err(|e| malformed(e.to_string()))
}

/// Wraps the bare tokens `NaN`, `Infinity` and `-Infinity` outside string
/// literals in quotes so that they reach validation instead of failing to parse.
pub(crate) fn quote_non_finite(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_string = false;
    let mut escaped = false;
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
        } else if c == '"' {
            in_string = true;
        } else if let Some(token) = NON_FINITE_TOKENS.iter().find(|t| rest.starts_with(**t)) {
            out.push('"');
            out.push_str(token);
            out.push('"');
            rest = &rest[token.len()..];
            continue;
        }
        out.push(c);
        rest = &rest[c.len_utf8()..];
    }
    out
}

/// Validates `raw` as `rows x cols`; `label` names the matrix in messages
/// and indices in messages are 1-based.
fn build_matrix(path: &Path, label: &str, index: usize, raw: RawMatrix, rows: usize, cols: usize) -> Result<CMatrix, CliError> {
    let number = index + 1;
    if raw.len() != rows {
        return Err(shape(path, format!("{label} {number} has {} rows, expected {rows}", raw.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in raw.into_iter().enumerate() {
        if row.len() != cols {
            return Err(shape(
                path,
                format!("{label} {number}, row {} has {} entries, expected {cols}", i + 1, row.len()),
            ));
        }
        for (j, entry) in row.into_iter().enumerate() {
            let at = |message: String| CliError::Entry {
                path: path.to_path_buf(),
                label: label.to_string(),
                matrix: number,
                row: i + 1,
                col: j + 1,
                message,
            };
            if entry.len() != 2 {
                return Err(at(format!("expected an [re, im] pair, found {} numbers", entry.len())));
            }
            let mut parts = [0.0; 2];
            for (slot, (part, value)) in parts.iter_mut().zip(["real", "imaginary"].iter().zip(entry)) {
                *slot = match value {
                    RawNumber::Number(v) if v.is_finite() => v,
                    RawNumber::Number(v) => return Err(at(format!("{part} part {v} is not finite"))),
                    RawNumber::Token(t) if NON_FINITE_TOKENS.contains(&t.as_str()) => {
                        return Err(at(format!("{part} part {t} is not finite")))
                    }
                    RawNumber::Token(t) => return Err(at(format!("{part} part {t:?} is not a number"))),
                };
            }
            data.push(Complex64::new(parts[0], parts[1]));
        }
    }
    Ok(CMatrix::new(rows, cols, data)?)
}

/// Reads a tuple file `{"n", "d", "matrices", "m_rows"?}`.
pub fn parse_tuple_file(path: &Path) -> Result<TupleFile, CliError> {
    let bytes = read(path)?;
    let raw: RawTuple = parse_json(path, &bytes)?;
    if raw.d == 0 {
        return Err(CliError::Library(crate::Error::EmptyTuple));
    }
    if raw.n == 0 {
        return Err(shape(path, "n must be >= 1".into()));
    }
    let rows = raw.m_rows.unwrap_or(raw.n);
    if rows == 0 {
        return Err(shape(path, "m_rows must be >= 1".into()));
    }
    if raw.matrices.len() != raw.d {
        return Err(shape(path, format!("d = {} but {} matrices were given", raw.d, raw.matrices.len())));
    }
    let matrices = raw
        .matrices
        .into_iter()
        .enumerate()
        .map(|(k, m)| build_matrix(path, "matrix", k, m, rows, raw.n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TupleFile {
        n: raw.n,
        rows,
        matrices,
        bytes,
    })
}

/// Reads a square tuple file into a [`MatTuple`].
pub fn parse_tuple(path: &Path) -> Result<MatTuple, CliError> {
    parse_tuple_file(path)?.into_tuple(path)
}

/// Reads a subspace basis file `{"n", "m_rows", "basis"}`.
pub fn parse_basis_file(path: &Path) -> Result<BasisFile, CliError> {
    let bytes = read(path)?;
    let raw: RawBasis = parse_json(path, &bytes)?;
    if raw.n == 0 || raw.m_rows == 0 {
        return Err(shape(path, "n and m_rows must be >= 1".into()));
    }
    if raw.basis.is_empty() {
        return Err(CliError::Library(crate::Error::EmptyBasis));
    }
    let basis = raw
        .basis
        .into_iter()
        .enumerate()
        .map(|(k, m)| build_matrix(path, "basis matrix", k, m, raw.m_rows, raw.n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BasisFile {
        n: raw.n,
        rows: raw.m_rows,
        basis,
        bytes,
    })
}

/// SHA-256 over the input files in order, each prefixed by its byte length.
pub fn digest(files: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for bytes in files {
        hasher.update((bytes.len() as u64).to_le_bytes());
        hasher.update(bytes);
    }
    hex::encode(hasher.finalize())
}
