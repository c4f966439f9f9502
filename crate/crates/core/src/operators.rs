//! Dense complex operators on `C^d` and the reference gallery.
//!
//! Matrix file format: the first line holds the dimension `d`, followed by
//! `d` lines of `2d` whitespace-separated decimal numbers giving the
//! row-major entries as `re im` pairs. Writers emit 17 significant digits,
//! which round-trips every `f64` exactly.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense `d x d` complex matrix with finite entries and `d >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NonSquare {
                rows: inner.nrows(),
                cols: inner.ncols(),
            });
        }
        if inner.nrows() == 0 {
            return Err(Error::invalid("dim", "dimension must be at least 1"));
        }
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let z = inner[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::invalid(
                "entries",
                format!("expected {} entries, got {}", dim * dim, entries.len()),
            ));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_rows(dim, &z)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim.max(1), dim.max(1)),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim.max(1), dim.max(1)),
        }
    }

    pub(crate) fn from_dense_unchecked(inner: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_dense(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dense(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    /// True when every entry is real and nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.inner.iter().all(|z| z.im == 0.0 && z.re >= 0.0)
    }

    /// Largest eigenvalue modulus.
    ///
    /// Triangular matrices are read off the diagonal. Otherwise a complex
    /// Schur decomposition is attempted with increasing tolerance; if none
    /// converges, `||T^(2^k)||_2^(2^-k)` with `k = 10` is returned.
    pub fn spectral_radius(&self) -> f64 {
        let m = &self.inner;
        let d = m.nrows();
        let diag_max = || (0..d).map(|i| m[(i, i)].norm()).fold(0.0, f64::max);
        let upper = (0..d).all(|i| (0..i).all(|j| m[(i, j)] == Complex64::new(0.0, 0.0)));
        let lower = (0..d).all(|i| (i + 1..d).all(|j| m[(i, j)] == Complex64::new(0.0, 0.0)));
        if upper || lower {
            return diag_max();
        }
        for eps in [1e-15, 1e-13, 1e-11] {
            if let Some(s) = nalgebra::linalg::Schur::try_new(m.clone(), eps, 10_000) {
                let (_, t) = s.unpack();
                return (0..d).map(|i| t[(i, i)].norm()).fold(0.0, f64::max);
            }
        }
        let mut x = m.clone();
        let mut log_scale = 0.0;
        for _ in 0..10 {
            let s = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if s == 0.0 {
                return 0.0;
            }
            x /= Complex64::new(s, 0.0);
            log_scale = 2.0 * (log_scale + s.ln());
            x = &x * &x;
        }
        let norm = x.singular_values().max();
        ((norm.ln() + log_scale) / 1024.0).exp()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        Self::from_dense_unchecked(&self.inner * &other.inner)
    }

    /// Serializes to the matrix file format.
    pub fn to_text(&self) -> String {
        let d = self.dim();
        let mut out = String::with_capacity(d * d * 50 + 8);
        let _ = writeln!(out, "{d}");
        for i in 0..d {
            let mut first = true;
            for j in 0..d {
                let z = self.inner[(i, j)];
                for x in [z.re, z.im] {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    let _ = write!(out, "{}", fmt_f64(x));
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parses the matrix file format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "empty input, expected dimension".into(),
        })?;
        let htok: Vec<(usize, &str)> = tokens(header).collect();
        if htok.len() != 1 {
            return Err(Error::Parse {
                line: hline + 1,
                column: htok.get(1).map_or(1, |t| t.0 + 1),
                message: "first line must hold the dimension only".into(),
            });
        }
        let dim: usize = htok[0].1.parse().map_err(|_| Error::Parse {
            line: hline + 1,
            column: htok[0].0 + 1,
            message: format!("invalid dimension `{}`", htok[0].1),
        })?;
        if dim == 0 {
            return Err(Error::Parse {
                line: hline + 1,
                column: htok[0].0 + 1,
                message: "dimension must be at least 1".into(),
            });
        }

        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        let mut width: Option<usize> = None;
        for (lno, line) in lines {
            let mut vals = Vec::new();
            for (col, tok) in tokens(line) {
                let x: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: lno + 1,
                    column: col + 1,
                    message: format!("invalid number `{tok}`"),
                })?;
                vals.push(x);
            }
            if vals.len() % 2 != 0 {
                return Err(Error::Parse {
                    line: lno + 1,
                    column: line.len() + 1,
                    message: "odd number of values, expected re/im pairs".into(),
                });
            }
            let cols = vals.len() / 2;
            match width {
                None => width = Some(cols),
                Some(w) if w != cols => {
                    return Err(Error::Parse {
                        line: lno + 1,
                        column: 1,
                        message: format!("row has {cols} entries, previous rows have {w}"),
                    })
                }
                _ => {}
            }
            rows.push(
                vals.chunks_exact(2)
                    .map(|c| Complex64::new(c[0], c[1]))
                    .collect(),
            );
        }
        let cols = width.unwrap_or(0);
        if rows.len() != dim || cols != dim {
            if rows.is_empty() {
                return Err(Error::Parse {
                    line: hline + 2,
                    column: 1,
                    message: format!("expected {dim} rows, found none"),
                });
            }
            return Err(Error::NonSquare {
                rows: rows.len(),
                cols,
            });
        }
        let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
        Self::from_rows(dim, &flat)
    }
}

/// Whitespace-separated tokens with their byte offsets.
pub(crate) fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.char_indices()
        .filter(|&(i, c)| {
            !c.is_whitespace() && (i == 0 || line[..i].ends_with(char::is_whitespace))
        })
        .map(move |(i, _)| {
            let rest = &line[i..];
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            (i, &rest[..end])
        })
}

/// Formats with 17 significant digits.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ComplexMatrix::from_text(&text)
}

pub fn save_matrix(matrix: &ComplexMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, matrix.to_text()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Constructor family of a gallery operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorKind {
    Identity,
    Zero,
    /// `c I`.
    Scalar { re: f64, im: f64 },
    /// `lambda` on the diagonal, `eps` on the superdiagonal.
    Jordan { re: f64, im: f64, eps: f64 },
    /// `a` on the superdiagonal, zero elsewhere.
    Nilpotent { a: f64 },
    /// Forward shift `e_k -> w_k e_{k+1}`: the weights sit on the
    /// subdiagonal, so `weights.len() == dim - 1`.
    WeightedShift { weights: Vec<f64> },
    /// `diag(exp(2 pi i theta k))` for `k = 1..=dim`.
    Rotation { theta: f64 },
    /// Every entry equal to `1/dim`; doubly stochastic and idempotent.
    Averaging,
    /// Loaded from a matrix file; `dim` must match the file.
    Custom { path: PathBuf },
}

/// A gallery operator request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    #[serde(flatten)]
    pub kind: OperatorKind,
    pub dim: usize,
}

/// Known behaviour of a gallery family.
#[derive(Debug, Clone, Serialize)]
pub struct GalleryProperties {
    pub power_bounded: Option<bool>,
    pub positive: bool,
    pub nilpotent: bool,
    pub spectral_radius: Option<f64>,
    pub notes: &'static str,
}

fn finite(field: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::invalid(field, format!("must be finite, got {x}")))
    }
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, dim: usize) -> Self {
        Self { kind, dim }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        match &self.kind {
            OperatorKind::Identity | OperatorKind::Zero | OperatorKind::Averaging => {}
            OperatorKind::Scalar { re, im } => {
                finite("re", *re)?;
                finite("im", *im)?;
            }
            OperatorKind::Jordan { re, im, eps } => {
                finite("re", *re)?;
                finite("im", *im)?;
                finite("eps", *eps)?;
            }
            OperatorKind::Nilpotent { a } => {
                finite("a", *a)?;
                if self.dim < 2 {
                    return Err(Error::invalid("dim", "nilpotent needs dim >= 2"));
                }
            }
            OperatorKind::WeightedShift { weights } => {
                if weights.len() + 1 != self.dim {
                    return Err(Error::invalid(
                        "weights",
                        format!("expected {} weights for dim {}", self.dim - 1, self.dim),
                    ));
                }
                for &w in weights {
                    finite("weights", w)?;
                    if w < 0.0 {
                        return Err(Error::invalid("weights", format!("negative weight {w}")));
                    }
                }
            }
            OperatorKind::Rotation { theta } => {
                finite("theta", *theta)?;
            }
            OperatorKind::Custom { .. } => {}
        }
        Ok(())
    }

    /// Documented behaviour of the requested operator.
    pub fn properties(&self) -> GalleryProperties {
        let d = self.dim;
        match &self.kind {
            OperatorKind::Identity => GalleryProperties {
                power_bounded: Some(true),
                positive: true,
                nilpotent: false,
                spectral_radius: Some(1.0),
                notes: "isometry; K = K_s = 1",
            },
            OperatorKind::Zero => GalleryProperties {
                power_bounded: Some(true),
                positive: true,
                nilpotent: true,
                spectral_radius: Some(0.0),
                notes: "K = K_s = 1, attained only as |lambda| -> inf",
            },
            OperatorKind::Scalar { re, im } => {
                let r = Complex64::new(*re, *im).norm();
                GalleryProperties {
                    power_bounded: Some(r <= 1.0),
                    positive: *im == 0.0 && *re >= 0.0,
                    nilpotent: r == 0.0,
                    spectral_radius: Some(r),
                    notes: "normal; ||T^n|| = |c|^n",
                }
            }
            OperatorKind::Jordan { re, im, eps } => {
                let r = Complex64::new(*re, *im).norm();
                let pb = if r < 1.0 || d == 1 || *eps == 0.0 {
                    Some(r <= 1.0)
                } else {
                    Some(false)
                };
                GalleryProperties {
                    power_bounded: pb,
                    positive: *im == 0.0 && *re >= 0.0 && *eps >= 0.0,
                    nilpotent: r == 0.0,
                    spectral_radius: Some(r),
                    notes: "|lambda| = 1 with eps != 0 grows like n^(d-1)",
                }
            }
            OperatorKind::Nilpotent { a } => GalleryProperties {
                power_bounded: Some(true),
                positive: *a >= 0.0,
                nilpotent: true,
                spectral_radius: Some(0.0),
                notes: "resolvent is a finite Neumann sum",
            },
            OperatorKind::WeightedShift { weights } => GalleryProperties {
                power_bounded: Some(true),
                positive: weights.iter().all(|&w| w >= 0.0),
                nilpotent: true,
                spectral_radius: Some(0.0),
                notes: "truncated forward shift, T^d = 0",
            },
            OperatorKind::Rotation { .. } => GalleryProperties {
                power_bounded: Some(true),
                positive: false,
                nilpotent: false,
                spectral_radius: Some(1.0),
                notes: "unitary diagonal; K = K_s = 1 at p = 2",
            },
            OperatorKind::Averaging => GalleryProperties {
                power_bounded: Some(true),
                positive: true,
                nilpotent: false,
                spectral_radius: Some(1.0),
                notes: "doubly stochastic projection; T^n = T",
            },
            OperatorKind::Custom { .. } => GalleryProperties {
                power_bounded: None,
                positive: false,
                nilpotent: false,
                spectral_radius: None,
                notes: "user supplied",
            },
        }
    }
}

/// Instantiates a gallery operator. Deterministic and pure apart from
/// reading the file of a `custom` operator.
pub fn make_gallery_operator(spec: &OperatorSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let d = spec.dim;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    match &spec.kind {
        OperatorKind::Identity => m.fill_with_identity(),
        OperatorKind::Zero => {}
        OperatorKind::Scalar { re, im } => {
            for i in 0..d {
                m[(i, i)] = c(*re, *im);
            }
        }
        OperatorKind::Jordan { re, im, eps } => {
            for i in 0..d {
                m[(i, i)] = c(*re, *im);
                if i + 1 < d {
                    m[(i, i + 1)] = c(*eps, 0.0);
                }
            }
        }
        OperatorKind::Nilpotent { a } => {
            for i in 0..d - 1 {
                m[(i, i + 1)] = c(*a, 0.0);
            }
        }
        OperatorKind::WeightedShift { weights } => {
            for (k, &w) in weights.iter().enumerate() {
                m[(k + 1, k)] = c(w, 0.0);
            }
        }
        OperatorKind::Rotation { theta } => {
            for k in 0..d {
                let phase = TAU * theta * (k + 1) as f64;
                m[(k, k)] = Complex64::from_polar(1.0, phase);
            }
        }
        OperatorKind::Averaging => m.fill(c(1.0 / d as f64, 0.0)),
        OperatorKind::Custom { path } => {
            let loaded = load_matrix(path)?;
            if loaded.dim() != d {
                return Err(Error::invalid(
                    "dim",
                    format!("file holds a {}x{} matrix, spec says {d}", loaded.dim(), loaded.dim()),
                ));
            }
            return Ok(loaded);
        }
    }
    ComplexMatrix::new(m)
}

/// The reference gallery used by the invariant checks: every member has
/// spectral radius at most one.
pub fn standard_gallery() -> Vec<(&'static str, OperatorSpec)> {
    use OperatorKind::*;
    vec![
        ("identity-3", OperatorSpec::new(Identity, 3)),
        ("zero-3", OperatorSpec::new(Zero, 3)),
        ("scalar-half-2", OperatorSpec::new(Scalar { re: 0.5, im: 0.0 }, 2)),
        ("nilpotent-2-a2", OperatorSpec::new(Nilpotent { a: 2.0 }, 2)),
        ("nilpotent-3-a1", OperatorSpec::new(Nilpotent { a: 1.0 }, 3)),
        (
            "jordan-2-1-1",
            OperatorSpec::new(Jordan { re: 1.0, im: 0.0, eps: 1.0 }, 2),
        ),
        (
            "jordan-3-half-1",
            OperatorSpec::new(Jordan { re: 0.5, im: 0.0, eps: 1.0 }, 3),
        ),
        ("rotation-0.3-1", OperatorSpec::new(Rotation { theta: 0.3 }, 1)),
        ("rotation-0.3-3", OperatorSpec::new(Rotation { theta: 0.3 }, 3)),
        (
            "shift-4",
            OperatorSpec::new(WeightedShift { weights: vec![1.0, 2.0, 0.5] }, 4),
        ),
        ("averaging-2", OperatorSpec::new(Averaging, 2)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_spec() {
        let m = make_gallery_operator(&OperatorSpec::new(OperatorKind::Identity, 3)).unwrap();
        assert_eq!(m, ComplexMatrix::identity(3));
    }

    #[test]
    fn nilpotent_and_jordan_constructors() {
        let n = make_gallery_operator(&OperatorSpec::new(OperatorKind::Nilpotent { a: 2.0 }, 2))
            .unwrap();
        assert_eq!(n, ComplexMatrix::from_rows(2, &[c(0.), c(2.), c(0.), c(0.)]).unwrap());
        let j = make_gallery_operator(&OperatorSpec::new(
            OperatorKind::Jordan { re: 1.0, im: 0.0, eps: 1.0 },
            2,
        ))
        .unwrap();
        assert_eq!(j, ComplexMatrix::from_rows(2, &[c(1.), c(1.), c(0.), c(1.)]).unwrap());
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        let bad = OperatorSpec::new(OperatorKind::WeightedShift { weights: vec![1.0] }, 3);
        match make_gallery_operator(&bad) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "weights"),
            other => panic!("unexpected {other:?}"),
        }
        let bad = OperatorSpec::new(OperatorKind::Rotation { theta: f64::NAN }, 2);
        assert!(matches!(
            make_gallery_operator(&bad),
            Err(Error::InvalidParameter { field: "theta", .. })
        ));
    }

    #[test]
    fn parse_identity_file() {
        let m = ComplexMatrix::from_text("2\n1 0 0 0\n0 0 1 0\n").unwrap();
        assert_eq!(m, ComplexMatrix::identity(2));
    }

    #[test]
    fn parse_empty_is_error() {
        assert!(matches!(ComplexMatrix::from_text(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_non_square() {
        let err = ComplexMatrix::from_text("2\n1 0 0 0 0 0\n0 0 1 0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::NonSquare { rows: 2, cols: 3 }), "{err:?}");
    }

    #[test]
    fn parse_reports_column() {
        let err = ComplexMatrix::from_text("1\n1.0 x\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spectral_radius_of_gallery() {
        for (name, spec) in standard_gallery() {
            let m = make_gallery_operator(&spec).unwrap();
            let rho = m.spectral_radius();
            assert!(rho <= 1.0 + 1e-12, "{name}: {rho}");
            if let Some(expected) = spec.properties().spectral_radius {
                assert!((rho - expected).abs() < 1e-6, "{name}: {rho} vs {expected}");
            }
        }
    }

    #[test]
    fn gallery_is_pure() {
        for (_, spec) in standard_gallery() {
            let a = make_gallery_operator(&spec).unwrap().to_text();
            let b = make_gallery_operator(&spec).unwrap().to_text();
            assert_eq!(a, b);
        }
    }
}
