use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("lambda = {re}{im:+}i is numerically an eigenvalue")]
    Singular { re: f64, im: f64 },

    #[error("log-scale accumulator overflowed at n = {n}")]
    Overflow { n: usize },

    #[error("degenerate fit: {0}")]
    Degenerate(String),

    #[error("window [{lo}, {hi}] too small: multiplier varies at n = {at}")]
    WindowTooSmall { lo: i64, hi: i64, at: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series truncation insufficient: tail bound {tail:e} vs partial sum {partial:e}")]
    TruncationInsufficient { tail: f64, partial: f64 },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("empty summation window for n = {n}, m = {m}")]
    EmptyWindow { n: u64, m: u64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
