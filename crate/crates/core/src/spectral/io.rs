//! Plain-text matrix files.
//!
//! ```text
//! 2 3 complex
//! 1+0i 0.5-2i 3
//! -1i 0 2.25e-3+1i
//! ```
//!
//! The header is `m n field`; each of the `m` following lines holds `n`
//! whitespace-separated entries. Complex entries are written `a+bi`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::spectral::matrix::{AnyMatrix, Matrix};

fn parse_real(tok: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad real entry '{tok}'")))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (with optional exponents).
pub fn parse_complex(tok: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad complex entry '{tok}'"));
    let Some(body) = tok.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(tok)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [m, n, field] = parts.as_slice() else {
        return Err(Error::Parse(format!("header should read 'm n field', got '{header}'")));
    };
    let m: usize = m
        .parse()
        .map_err(|_| Error::Parse(format!("bad row count '{m}'")))?;
    let n: usize = n
        .parse()
        .map_err(|_| Error::Parse(format!("bad column count '{n}'")))?;
    let field = match *field {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(Error::Parse(format!("unknown field '{other}'"))),
    };
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split_whitespace().collect()).collect();
    if rows.len() != m {
        return Err(Error::Parse(format!("expected {m} rows, found {}", rows.len())));
    }
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", r.len())));
    }
    let tokens = rows.iter().flatten();
    let matrix = match field {
        Field::Real => AnyMatrix::Real(Matrix::from_row_major(
            m,
            n,
            tokens.map(|t| parse_real(t)).collect::<Result<_>>()?,
        )?),
        Field::Complex => AnyMatrix::Complex(Matrix::from_row_major(
            m,
            n,
            tokens.map(|t| parse_complex(t)).collect::<Result<_>>()?,
        )?),
    };
    match &matrix {
        AnyMatrix::Real(a) => a.check_finite()?,
        AnyMatrix::Complex(a) => a.check_finite()?,
    }
    Ok(matrix)
}

pub fn format_matrix(a: &AnyMatrix) -> String {
    let (m, n) = a.shape();
    let mut out = format!("{m} {n} {}\n", a.field());
    for i in 0..m {
        let row: Vec<String> = match a {
            AnyMatrix::Real(x) => x.row(i).iter().map(|v| v.to_string()).collect(),
            AnyMatrix::Complex(x) => x.row(i).iter().map(|&z| format_complex(z)).collect(),
        };
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn read_matrix(path: impl AsRef<std::path::Path>) -> Result<AnyMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<std::path::Path>, a: &AnyMatrix) -> Result<()> {
    std::fs::write(path, format_matrix(a))?;
    Ok(())
}
