//! Matrix Market array-format reader and writer.
//!
//! Dense matrices are stored in the `array` format (column-major entry
//! order, which is also the in-memory layout); vectors are m x 1 arrays.
//! Doubles are written with 17 significant digits, so a write/read round
//! trip reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use spi_solve::{DenseMatrix, DenseVector, Field, Scalar};

use crate::error::CliError;

/// A matrix file is real or complex; the choice lives in the file header.
#[derive(Debug, Clone)]
pub enum MatrixFile {
    Real(DenseMatrix<f64>),
    Complex(DenseMatrix<Complex64>),
}

impl MatrixFile {
    pub fn field(&self) -> Field {
        match self {
            MatrixFile::Real(_) => Field::Real,
            MatrixFile::Complex(_) => Field::Complex,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            MatrixFile::Real(a) => a.rows(),
            MatrixFile::Complex(a) => a.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            MatrixFile::Real(a) => a.cols(),
            MatrixFile::Complex(a) => a.cols(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum VectorFile {
    Real(DenseVector<f64>),
    Complex(DenseVector<Complex64>),
}

impl VectorFile {
    pub fn len(&self) -> usize {
        match self {
            VectorFile::Real(v) => v.len(),
            VectorFile::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Promotes to complex (exact embedding).
    pub fn into_complex(self) -> DenseVector<Complex64> {
        match self {
            VectorFile::Complex(v) => v,
            VectorFile::Real(v) => {
                DenseVector::from_fn(v.len(), |i| Complex64::new(v[i], 0.0))
            }
        }
    }
}

fn fmt_entry<T: Scalar>(out: &mut String, x: T) {
    match T::FIELD {
        Field::Real => {
            let _ = writeln!(out, "{:.16e}", x.re());
        }
        Field::Complex => {
            let _ = writeln!(out, "{:.16e} {:.16e}", x.re(), x.im());
        }
    }
}

fn render<T: Scalar>(
    rows: usize,
    cols: usize,
    data: &[T],
    comments: &[&str],
    path: &Path,
) -> Result<String, CliError> {
    let mut out = String::with_capacity(data.len() * 26 + 128);
    let _ = writeln!(
        out,
        "%%MatrixMarket matrix array {} general",
        T::FIELD.as_str()
    );
    for c in comments {
        let _ = writeln!(out, "%{c}");
    }
    let _ = writeln!(out, "{rows} {cols}");
    for &x in data {
        if !x.is_finite_scalar() {
            return Err(CliError::format(
                path,
                0,
                format!("cannot write non-finite value {x} to Matrix Market"),
            ));
        }
        fmt_entry(&mut out, x);
    }
    Ok(out)
}

pub fn write_matrix<T: Scalar>(
    path: &Path,
    a: &DenseMatrix<T>,
    comments: &[&str],
) -> Result<(), CliError> {
    let text = render(a.rows(), a.cols(), a.data(), comments, path)?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Vectors are written as m x 1 arrays.
pub fn write_vector<T: Scalar>(
    path: &Path,
    v: &DenseVector<T>,
    comments: &[&str],
) -> Result<(), CliError> {
    let text = render(v.len(), 1, v.as_slice(), comments, path)?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

struct Parser<'a> {
    path: &'a Path,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Parser<'a> {
    /// Next content line (1-based number, text), skipping comments and
    /// blanks.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (idx, line) in self.lines.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            return Some((idx + 1, t));
        }
        None
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> CliError {
        CliError::format(self.path, line, msg)
    }
}

fn parse_header(path: &Path, text: &str) -> Result<Field, CliError> {
    let first = text
        .lines()
        .next()
        .ok_or_else(|| CliError::format(path, 1, "empty file"))?;
    let toks: Vec<&str> = first.split_whitespace().collect();
    if toks.first() != Some(&"%%MatrixMarket") {
        return Err(CliError::format(
            path,
            1,
            "header must start with %%MatrixMarket",
        ));
    }
    if toks.get(1) != Some(&"matrix") || toks.get(2) != Some(&"array") {
        return Err(CliError::format(
            path,
            1,
            format!(
                "unsupported Matrix Market header '{}': only 'matrix array' (dense) files are supported",
                first.trim()
            ),
        ));
    }
    let field = match toks.get(3) {
        Some(&"real") => Field::Real,
        Some(&"complex") => Field::Complex,
        other => {
            return Err(CliError::format(
                path,
                1,
                format!("unsupported field {other:?}: expected 'real' or 'complex'"),
            ))
        }
    };
    if toks.get(4) != Some(&"general") {
        return Err(CliError::format(
            path,
            1,
            "only 'general' symmetry is supported",
        ));
    }
    Ok(field)
}

fn parse_body<T: Scalar>(
    path: &Path,
    text: &str,
) -> Result<DenseMatrix<T>, CliError> {
    let mut p = Parser {
        path,
        lines: text.lines().enumerate(),
    };
    // line 1 is the banner; consume it as a comment would not match, so
    // skip it explicitly
    p.lines.next();

    let (sz_line, sz) = p
        .next_content()
        .ok_or_else(|| CliError::format(path, 1, "missing size line"))?;
    let mut it = sz.split_whitespace();
    let rows: usize = it
        .next()
        .ok_or_else(|| p.err(sz_line, "missing row count"))?
        .parse()
        .map_err(|_| p.err(sz_line, "cannot parse row count"))?;
    let cols: usize = it
        .next()
        .ok_or_else(|| p.err(sz_line, "missing column count"))?
        .parse()
        .map_err(|_| p.err(sz_line, "cannot parse column count"))?;
    if it.next().is_some() {
        return Err(p.err(sz_line, "array size line must be 'rows cols'"));
    }
    if rows == 0 || cols == 0 {
        return Err(p.err(sz_line, "dimensions must be positive"));
    }

    let mut data = Vec::with_capacity(rows * cols);
    while data.len() < rows * cols {
        let (ln, entry) = p.next_content().ok_or_else(|| {
            CliError::format(
                path,
                0,
                format!("file ended after {} of {} entries", data.len(), rows * cols),
            )
        })?;
        let mut it = entry.split_whitespace();
        let re: f64 = it
            .next()
            .ok_or_else(|| p.err(ln, "missing value"))?
            .parse()
            .map_err(|_| p.err(ln, format!("cannot parse value '{entry}'")))?;
        let value = match T::FIELD {
            Field::Real => {
                if it.next().is_some() {
                    return Err(p.err(ln, "real entry must be a single number"));
                }
                T::from_re_im(re, 0.0)
            }
            Field::Complex => {
                let im: f64 = it
                    .next()
                    .ok_or_else(|| p.err(ln, "complex entry needs two numbers"))?
                    .parse()
                    .map_err(|_| p.err(ln, format!("cannot parse value '{entry}'")))?;
                if it.next().is_some() {
                    return Err(p.err(ln, "complex entry must be two numbers"));
                }
                T::from_re_im(re, im)
            }
        };
        data.push(value);
    }
    if let Some((ln, _)) = p.next_content() {
        return Err(p.err(ln, "trailing data after final entry"));
    }
    DenseMatrix::new(rows, cols, data).map_err(CliError::Core)
}

pub fn read_matrix(path: &Path) -> Result<MatrixFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    match parse_header(path, &text)? {
        Field::Real => Ok(MatrixFile::Real(parse_body(path, &text)?)),
        Field::Complex => Ok(MatrixFile::Complex(parse_body(path, &text)?)),
    }
}

/// Reads an m x 1 array file as a vector.
pub fn read_vector(path: &Path) -> Result<VectorFile, CliError> {
    let m = read_matrix(path)?;
    if m.cols() != 1 {
        return Err(CliError::format(
            path,
            0,
            format!("expected a column vector (m x 1 array), got {}x{}", m.rows(), m.cols()),
        ));
    }
    Ok(match m {
        MatrixFile::Real(a) => VectorFile::Real(DenseVector::new(a.data().to_vec())),
        MatrixFile::Complex(a) => VectorFile::Complex(DenseVector::new(a.data().to_vec())),
    })
}
