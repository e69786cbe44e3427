//! Plain-text matrix format.
//!
//! One row per line, entries separated by whitespace. An entry is an
//! optionally signed integer or a `p/q` fraction. Blank lines and lines
//! starting with `#` are skipped.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Mat, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: invalid entry `{token}`")]
    BadEntry { line: usize, token: String },
    #[error("line {line}: zero denominator in `{token}`")]
    ZeroDenominator { line: usize, token: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("no matrix rows found")]
    Empty,
}

impl ParseError {
    /// 1-based source line, when the error has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::BadEntry { line, .. }
            | ParseError::ZeroDenominator { line, .. }
            | ParseError::Ragged { line, .. } => Some(*line),
            ParseError::Empty => None,
        }
    }

    /// Shifts reported line numbers by `offset`, for matrices embedded in a
    /// larger document.
    pub(crate) fn offset_lines(self, offset: usize) -> Self {
        match self {
            ParseError::BadEntry { line, token } => ParseError::BadEntry {
                line: line + offset,
                token,
            },
            ParseError::ZeroDenominator { line, token } => ParseError::ZeroDenominator {
                line: line + offset,
                token,
            },
            ParseError::Ragged {
                line,
                expected,
                found,
            } => ParseError::Ragged {
                line: line + offset,
                expected,
                found,
            },
            ParseError::Empty => ParseError::Empty,
        }
    }
}

fn parse_entry(token: &str, line: usize) -> Result<Scalar, ParseError> {
    let bad = || ParseError::BadEntry {
        line,
        token: token.to_owned(),
    };
    let int = |s: &str| -> Result<BigInt, ParseError> {
        let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).map_err(|_| bad())
    };
    match token.split_once('/') {
        None => Ok(Scalar::from_integer(int(token)?)),
        Some((p, q)) => {
            let num = int(p)?;
            if q.starts_with(['+', '-']) {
                return Err(bad());
            }
            let den = int(q)?;
            if den.is_zero() {
                return Err(ParseError::ZeroDenominator {
                    line,
                    token: token.to_owned(),
                });
            }
            Ok(Scalar::new(num, den))
        }
    }
}

impl FromStr for Mat {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Mat, ParseError> {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let row = trimmed
                .split_whitespace()
                .map(|tok| parse_entry(tok, line))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(ParseError::Ragged {
                        line,
                        expected: first.len(),
                        found: row.len(),
                    });
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(ParseError::Empty);
        }
        let cols = rows[0].len();
        let n = rows.len();
        Ok(Mat::from_vec(n, cols, rows.into_iter().flatten().collect()).expect("rectangular"))
    }
}

/// Writes the matrix in the text format, right-aligning columns.
impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = |j: usize| {
            (0..self.rows)
                .map(|i| cells[i * self.cols + j].len())
                .max()
                .unwrap_or(0)
        };
        let widths: Vec<usize> = (0..self.cols).map(width).collect();
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>w$}", cells[i * self.cols + j], w = widths[j]))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
