//! Trigonometric polynomials on the torus with coefficients in `C^d`.
//!
//! `L^p(T; C^d)` norms are Riemann sums over `N` equispaced points, computed
//! with an inverse FFT per coordinate. When `p` is an even integer and the
//! inner norm is Euclidean, `|f(t)|^p` is a trigonometric polynomial of
//! degree at most `p M` (with `M` the largest absolute frequency), so the
//! sum is exact once `N > p M`.
//!
//! Polynomial file format: one line per frequency, `n re_1 im_1 ... re_d im_d`.
//! Frequencies may appear in any order but at most once; blank lines and
//! lines starting with `#` are ignored.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng as _;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{check_p, p_norm_unchecked};
use crate::operators::{fmt_f64, tokens};
use crate::par;
use crate::search::{complex_gaussian, hill_climb, stream_rng};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Finitely supported `Z -> C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    dim: usize,
    coeffs: BTreeMap<i64, Vec<Complex64>>,
}

impl TrigPolynomial {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim: dim.max(1),
            coeffs: BTreeMap::new(),
        }
    }

    /// Scalar polynomial from `(n, c_n)` pairs.
    pub fn scalar(terms: &[(i64, Complex64)]) -> Self {
        let mut f = Self::zero(1);
        for &(n, c) in terms {
            f.add_term(n, &[c]).expect("dimension 1");
        }
        f
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (i64, Vec<Complex64>)>) -> Result<Self> {
        let mut f = Self::zero(dim);
        for (n, v) in terms {
            f.add_term(n, &v)?;
        }
        Ok(f)
    }

    /// Adds `v e_n`.
    pub fn add_term(&mut self, n: i64, v: &[Complex64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::invalid(
                "coefficient",
                format!("length {} does not match dimension {}", v.len(), self.dim),
            ));
        }
        if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("coefficient", format!("non-finite value at n = {n}")));
        }
        let slot = self.coeffs.entry(n).or_insert_with(|| vec![ZERO; v.len()]);
        for (a, b) in slot.iter_mut().zip(v) {
            *a += b;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeff(&self, n: i64) -> Option<&[Complex64]> {
        self.coeffs.get(&n).map(Vec::as_slice)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &[Complex64])> {
        self.coeffs.iter().map(|(&n, v)| (n, v.as_slice()))
    }

    /// Frequencies carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<i64> {
        self.terms()
            .filter(|(_, v)| v.iter().any(|z| *z != ZERO))
            .map(|(n, _)| n)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    /// Largest `|n|` over the stored frequencies (0 when empty).
    pub fn max_frequency(&self) -> u64 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    /// `sum_n |f^(n)|_2^2`.
    pub fn coefficient_energy(&self) -> f64 {
        self.coeffs.values().flatten().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_coeffs(|_, z| z * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::invalid("dim", "polynomials of different dimension"));
        }
        let mut out = self.clone();
        for (n, v) in other.terms() {
            out.add_term(n, v)?;
        }
        Ok(out)
    }

    /// Largest coefficientwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<i64> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        let zero = vec![ZERO; self.dim.max(other.dim)];
        keys.into_iter()
            .flat_map(|n| {
                let a = self.coeffs.get(&n).unwrap_or(&zero);
                let b = other.coeffs.get(&n).unwrap_or(&zero);
                a.iter().zip(b).map(|(x, y)| (x - y).norm()).collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }

    fn map_coeffs(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        Self {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&n, v)| (n, v.iter().map(|&z| f(n, z)).collect()))
                .collect(),
        }
    }

    /// Flattened coefficients over the stored frequencies, in key order.
    pub(crate) fn flat(&self) -> (Vec<i64>, Vec<Complex64>) {
        let keys: Vec<i64> = self.coeffs.keys().copied().collect();
        let vals = self.coeffs.values().flatten().copied().collect();
        (keys, vals)
    }

    pub(crate) fn from_flat(dim: usize, keys: &[i64], vals: &[Complex64]) -> Self {
        Self {
            dim,
            coeffs: keys
                .iter()
                .zip(vals.chunks(dim))
                .map(|(&n, v)| (n, v.to_vec()))
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, v) in self.terms() {
            let _ = write!(out, "{n}");
            for z in v {
                let _ = write!(out, " {} {}", fmt_f64(z.re), fmt_f64(z.im));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut coeffs = BTreeMap::new();
        for (lno, line) in text.lines().enumerate() {
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let err = |column: usize, message: String| Error::Parse {
                line: lno + 1,
                column,
                message,
            };
            let toks: Vec<(usize, &str)> = tokens(line).collect();
            let n: i64 = toks[0]
                .1
                .parse()
                .map_err(|_| err(toks[0].0 + 1, format!("invalid frequency `{}`", toks[0].1)))?;
            let nums = &toks[1..];
            if nums.is_empty() || nums.len() % 2 != 0 {
                return Err(err(line.len() + 1, "expected re/im pairs after the frequency".into()));
            }
            let d = nums.len() / 2;
            match dim {
                None => dim = Some(d),
                Some(d0) if d0 != d => {
                    return Err(err(1, format!("{d} coefficients, expected {d0}")));
                }
                _ => {}
            }
            let mut vals = Vec::with_capacity(nums.len());
            for &(col, tok) in nums {
                let x: f64 = tok.parse().map_err(|_| err(col + 1, format!("invalid number `{tok}`")))?;
                if !x.is_finite() {
                    return Err(err(col + 1, "non-finite value".into()));
                }
                vals.push(x);
            }
            let v: Vec<Complex64> = vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
            if coeffs.insert(n, v).is_some() {
                return Err(err(toks[0].0 + 1, format!("frequency {n} repeated")));
            }
        }
        let dim = dim.ok_or(Error::Parse {
            line: 1,
            column: 1,
            message: "no coefficients".into(),
        })?;
        Ok(Self { dim, coeffs })
    }
}

pub fn load_polynomial(path: impl AsRef<Path>) -> Result<TrigPolynomial> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })?;
    TrigPolynomial::from_text(&text)
}

/// Integer interval; `None` bounds are infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("interval", format!("[{lo}, {hi}] is empty")));
        }
        Ok(Self {
            lo: Some(lo),
            hi: Some(hi),
        })
    }

    /// `[lo, inf)`
    pub fn from(lo: i64) -> Self {
        Self { lo: Some(lo), hi: None }
    }

    /// `(-inf, hi]`
    pub fn to(hi: i64) -> Self {
        Self { lo: None, hi: Some(hi) }
    }

    pub fn all() -> Self {
        Self { lo: None, hi: None }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo.is_none_or(|a| a <= n) && self.hi.is_none_or(|b| n <= b)
    }

    fn precedes(&self, other: &Interval) -> bool {
        matches!((self.hi, other.lo), (Some(b), Some(a)) if b < a)
    }
}

/// Pairwise disjoint intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalPartition {
    intervals: Vec<Interval>,
}

impl IntervalPartition {
    pub fn new(intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::invalid("intervals", "at least one interval is required"));
        }
        for iv in &intervals {
            if let (Some(a), Some(b)) = (iv.lo, iv.hi) {
                if a > b {
                    return Err(Error::invalid("intervals", format!("[{a}, {b}] is empty")));
                }
            }
        }
        let mut sorted = intervals.clone();
        sorted.sort_by_key(|iv| (iv.lo.is_some(), iv.lo));
        for w in sorted.windows(2) {
            if !w[0].precedes(&w[1]) {
                return Err(Error::invalid("intervals", "intervals overlap"));
            }
        }
        Ok(Self { intervals })
    }

    /// Contiguous blocks `[lo, c_1 - 1], [c_1, c_2 - 1], ..., [c_k, hi]` for
    /// strictly increasing cut points inside `(lo, hi]`.
    pub fn contiguous(lo: i64, hi: i64, cuts: &[i64]) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid("range", format!("[{lo}, {hi}] is empty")));
        }
        let mut start = lo;
        let mut out = Vec::with_capacity(cuts.len() + 1);
        for &c in cuts {
            if c <= start || c > hi {
                return Err(Error::invalid("cuts", "cut points must increase strictly inside (lo, hi]"));
            }
            out.push(Interval::new(start, c - 1)?);
            start = c;
        }
        out.push(Interval::new(start, hi)?);
        Self::new(out)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// True when every frequency of `f` lies in some interval.
    pub fn covers(&self, f: &TrigPolynomial) -> bool {
        f.support().iter().all(|&n| self.intervals.iter().any(|iv| iv.contains(n)))
    }
}

/// `D_I f`: coefficients outside `I` removed.
pub fn project_interval(f: &TrigPolynomial, iv: &Interval) -> TrigPolynomial {
    TrigPolynomial {
        dim: f.dim,
        coeffs: f
            .coeffs
            .iter()
            .filter(|(&n, _)| iv.contains(n))
            .map(|(&n, v)| (n, v.clone()))
            .collect(),
    }
}

/// Scalar multiplier: `values[k]` at `n = lo + k`, `left` below and `right`
/// above the explicit range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSeq {
    pub lo: i64,
    pub values: Vec<Complex64>,
    pub left: Complex64,
    pub right: Complex64,
}

impl MultiplierSeq {
    pub fn new(lo: i64, values: Vec<Complex64>, left: Complex64, right: Complex64) -> Result<Self> {
        let all = values.iter().chain([&left, &right]);
        if all.into_iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("multiplier", "values must be finite"));
        }
        Ok(Self { lo, values, left, right })
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            lo: 0,
            values: vec![],
            left: c,
            right: c,
        }
    }

    /// `1_I`.
    pub fn indicator(iv: &Interval) -> Self {
        match (iv.lo, iv.hi) {
            (None, None) => Self::constant(ONE),
            (Some(a), None) => Self {
                lo: a,
                values: vec![ONE],
                left: ZERO,
                right: ONE,
            },
            (None, Some(b)) => Self {
                lo: b,
                values: vec![ONE],
                left: ONE,
                right: ZERO,
            },
            (Some(a), Some(b)) => Self {
                lo: a,
                values: vec![ONE; (b - a + 1).max(0) as usize],
                left: ZERO,
                right: ZERO,
            },
        }
    }

    /// Last index of the explicit range (`lo - 1` when empty).
    fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn at(&self, n: i64) -> Complex64 {
        if n < self.lo {
            self.left
        } else if n > self.hi() {
            self.right
        } else {
            self.values[(n - self.lo) as usize]
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values
            .iter()
            .chain([&self.left, &self.right])
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// `T_m f`.
pub fn apply_multiplier(f: &TrigPolynomial, m: &MultiplierSeq) -> TrigPolynomial {
    f.map_coeffs(|n, z| z * m.at(n))
}

/// `sum_n |m_{n+1} - m_n|`, computed on `[n_lo, n_hi]` plus the jumps into
/// and out of the window. Fails if `m` also varies outside the window.
pub fn v1_seminorm(m: &MultiplierSeq, n_lo: i64, n_hi: i64) -> Result<f64> {
    if n_lo > n_hi {
        return Err(Error::invalid("window", format!("[{n_lo}, {n_hi}] is empty")));
    }
    // Every jump of m sits at some n in [lo - 1, hi].
    for n in (m.lo - 1)..=m.hi() {
        let inside = n >= n_lo - 1 && n <= n_hi;
        if !inside && m.at(n + 1) != m.at(n) {
            return Err(Error::WindowTooSmall {
                lo: n_lo,
                hi: n_hi,
                at: n,
            });
        }
    }
    Ok(((n_lo - 1)..=n_hi).map(|n| (m.at(n + 1) - m.at(n)).norm()).sum())
}

/// A quadrature value of `||f||_{L^p(T; l^inner_p)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpNorm {
    pub value: f64,
    pub exact: bool,
    pub points: usize,
}

/// Oversampling factor of the default quadrature.
pub const OVERSAMPLING: usize = 8;

fn is_even_integer(p: f64) -> bool {
    p.is_finite() && p.fract() == 0.0 && (p as i64) % 2 == 0
}

/// Default number of quadrature points for frequencies in `[-m, m]`:
/// `max(8 (2m + 1), floor(p m) + 1)` for finite `p`.
pub fn default_points(max_freq: u64, p: f64) -> usize {
    let base = OVERSAMPLING * (2 * max_freq as usize + 1);
    if p.is_finite() {
        base.max((p * max_freq as f64).floor() as usize + 1)
    } else {
        base
    }
}

/// True when the `N`-point Riemann sum of `|f|^p` is exact.
pub fn quadrature_exact(max_freq: u64, p: f64, inner_p: f64, points: usize) -> bool {
    is_even_integer(p) && inner_p == 2.0 && (points as f64) > p * max_freq as f64
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|pl| pl.borrow_mut().plan_fft_inverse(n))
}

/// Samples `f(k / N)`, `k = 0..N`, as `N` vectors of length `d`.
///
/// Requires `N > 2 max_freq` so that frequencies do not alias.
pub fn sample(f: &TrigPolynomial, points: usize) -> Result<Vec<Vec<Complex64>>> {
    let m = f.max_frequency() as usize;
    if points <= 2 * m {
        return Err(Error::invalid(
            "points",
            format!("{points} points alias frequencies up to {m}"),
        ));
    }
    let plan = inverse_plan(points);
    let mut out = vec![vec![ZERO; f.dim]; points];
    let mut buf = vec![ZERO; points];
    for j in 0..f.dim {
        buf.iter_mut().for_each(|z| *z = ZERO);
        for (n, v) in f.terms() {
            buf[n.rem_euclid(points as i64) as usize] += v[j];
        }
        plan.process(&mut buf);
        for (k, z) in buf.iter().enumerate() {
            out[k][j] = *z;
        }
    }
    Ok(out)
}

fn check_inner(inner_p: f64) -> Result<()> {
    check_p(inner_p).map_err(|_| Error::invalid("inner_p", format!("{inner_p} is not in [1, inf]")))
}

/// `||f||_{L^p(T; l^inner_p(C^d))}` with the default quadrature.
pub fn lp_torus_norm(f: &TrigPolynomial, p: f64, inner_p: f64) -> Result<LpNorm> {
    lp_torus_norm_with(f, p, inner_p, default_points(f.max_frequency(), p))
}

/// As [`lp_torus_norm`] on exactly `points` quadrature nodes.
pub fn lp_torus_norm_with(f: &TrigPolynomial, p: f64, inner_p: f64, points: usize) -> Result<LpNorm> {
    check_p(p)?;
    check_inner(inner_p)?;
    let vals = sample(f, points)?;
    let pointwise: Vec<f64> = vals.iter().map(|v| p_norm_unchecked(v.iter().map(|z| z.norm()), inner_p)).collect();
    let value = if p.is_infinite() {
        pointwise.iter().copied().fold(0.0, f64::max)
    } else {
        p_norm_unchecked(pointwise.iter().copied(), p) / (points as f64).powf(1.0 / p)
    };
    Ok(LpNorm {
        value,
        exact: quadrature_exact(f.max_frequency(), p, inner_p, points),
        points,
    })
}

/// Random polynomial with independent complex Gaussian coefficients on `[lo, hi]`.
pub fn random_polynomial<R: rand::Rng + ?Sized>(rng: &mut R, dim: usize, lo: i64, hi: i64) -> TrigPolynomial {
    let coeffs = (lo..=hi)
        .map(|n| (n, (0..dim).map(|_| complex_gaussian(rng)).collect()))
        .collect();
    TrigPolynomial { dim, coeffs }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RieszConfig {
    /// Random polynomials live on `[-max_support, max_support]`.
    pub max_support: u32,
    pub trials: usize,
    /// Number of best trials refined by hill climbing.
    pub refine: usize,
    pub ascent_steps: usize,
    pub seed: u64,
}

impl Default for RieszConfig {
    fn default() -> Self {
        Self {
            max_support: 4,
            trials: 256,
            refine: 8,
            ascent_steps: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RieszReport {
    pub value: f64,
    pub p: f64,
    pub dim: usize,
    pub inner_p: f64,
    pub exact_quadrature: bool,
    pub points: usize,
    /// Best polynomial found, in the polynomial file format.
    pub witness: String,
    pub trials: usize,
}

/// `||D_{[0,inf)} f|| / ||f||` on a common quadrature.
fn riesz_ratio(f: &TrigPolynomial, p: f64, inner_p: f64, points: usize) -> f64 {
    let nf = lp_torus_norm_with(f, p, inner_p, points).map_or(0.0, |x| x.value);
    if !(nf > 0.0) {
        return f64::NEG_INFINITY;
    }
    let g = project_interval(f, &Interval::from(0));
    lp_torus_norm_with(&g, p, inner_p, points).map_or(f64::NEG_INFINITY, |x| x.value / nf)
}

/// Lower bound for the norm of the Riesz projection on `L^p(T; l^inner_p(C^d))`.
///
/// The search seeds with the analytic polynomial `e_0 x`, so the result is
/// at least 1.
pub fn riesz_norm_lower_bound(p: f64, dim: usize, inner_p: f64, cfg: &RieszConfig) -> Result<RieszReport> {
    check_p(p)?;
    check_inner(inner_p)?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::invalid("p", "must lie in (1, inf)"));
    }
    if dim == 0 {
        return Err(Error::invalid("dim", "must be at least 1"));
    }
    let k = cfg.max_support as i64;
    let points = default_points(k as u64, p);
    let analytic = TrigPolynomial::from_terms(dim, [(0, vec![ONE; dim])])?;
    let mut candidates = vec![(riesz_ratio(&analytic, p, inner_p, points), analytic)];
    candidates.extend(par::map_range(cfg.trials, |i| {
        let mut rng = stream_rng(cfg.seed, i as u64);
        let f = random_polynomial(&mut rng, dim, -k, k);
        (riesz_ratio(&f, p, inner_p, points), f)
    }));
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| candidates[b].0.total_cmp(&candidates[a].0).then(a.cmp(&b)));
    let top: Vec<usize> = order.into_iter().take(cfg.refine).collect();
    let refined = par::map_slice(&top, |&i| {
        let (keys, mut x) = candidates[i].1.flat();
        let mut rng = stream_rng(cfg.seed, (1 << 32) + i as u64);
        let obj = |v: &[Complex64]| riesz_ratio(&TrigPolynomial::from_flat(dim, &keys, v), p, inner_p, points);
        let v = hill_climb(&mut x, obj, cfg.ascent_steps, &mut rng);
        (v, TrigPolynomial::from_flat(dim, &keys, &x))
    });
    candidates.extend(refined);
    let values: Vec<f64> = candidates.iter().map(|c| c.0).collect();
    let best = par::argmax(&values).unwrap_or(0);
    let (value, witness) = candidates.swap_remove(best);
    Ok(RieszReport {
        value,
        p,
        dim,
        inner_p,
        exact_quadrature: quadrature_exact(k as u64, p, inner_p, points),
        points,
        witness: witness.to_text(),
        trials: cfg.trials,
    })
}

/// One sample of the Marcinkiewicz-type inequality
/// `||T_m f|| <= M (||m||_inf + [m]_V1) ||f||`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarcinkiewiczSample {
    /// `||T_m f|| / ||f||`
    pub lhs: f64,
    /// `||m||_inf + [m]_V1`
    pub rhs_factor: f64,
    /// `lhs / rhs_factor`, a lower bound for the constant `M`.
    pub ratio: f64,
}

pub fn marcinkiewicz_check(
    f: &TrigPolynomial,
    m: &MultiplierSeq,
    p: f64,
    inner_p: f64,
    window: (i64, i64),
) -> Result<MarcinkiewiczSample> {
    let v1 = v1_seminorm(m, window.0, window.1)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let points = default_points(f.max_frequency(), p);
    let nf = lp_torus_norm_with(f, p, inner_p, points)?.value;
    let ng = lp_torus_norm_with(&apply_multiplier(f, m), p, inner_p, points)?.value;
    let lhs = ng / nf;
    let rhs_factor = m.sup_norm() + v1;
    Ok(MarcinkiewiczSample {
        lhs,
        rhs_factor,
        ratio: if rhs_factor > 0.0 { lhs / rhs_factor } else { 0.0 },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MarcinkiewiczConfig {
    /// Multipliers are `+-1` on `[-half_width, half_width]` and 0 outside.
    pub half_width: u32,
    pub trials: usize,
    pub p: f64,
    pub inner_p: f64,
    pub dim: usize,
    pub seed: u64,
}

impl Default for MarcinkiewiczConfig {
    fn default() -> Self {
        Self {
            half_width: 8,
            trials: 2000,
            p: 4.0,
            inner_p: 2.0,
            dim: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarcinkiewiczReport {
    /// Largest sample ratio: an empirical lower bound for `M`.
    pub m_hat: f64,
    pub argmax_trial: usize,
    pub max_lhs: f64,
    pub trials: usize,
    pub exact_quadrature: bool,
}

/// Random `+-1` multipliers against random Gaussian polynomials on the same window.
pub fn marcinkiewicz_corpus(cfg: &MarcinkiewiczConfig) -> Result<MarcinkiewiczReport> {
    check_p(cfg.p)?;
    check_inner(cfg.inner_p)?;
    if cfg.trials == 0 || cfg.dim == 0 {
        return Err(Error::invalid("trials", "trials and dim must be positive"));
    }
    let w = cfg.half_width as i64;
    let samples = par::map_range(cfg.trials, |i| {
        let mut rng = stream_rng(cfg.seed, i as u64);
        let values: Vec<Complex64> = (-w..=w)
            .map(|_| if rng.gen::<bool>() { ONE } else { -ONE })
            .collect();
        let m = MultiplierSeq::new(-w, values, ZERO, ZERO)?;
        let f = random_polynomial(&mut rng, cfg.dim, -w, w);
        marcinkiewicz_check(&f, &m, cfg.p, cfg.inner_p, (-w, w))
    });
    let samples: Vec<MarcinkiewiczSample> = samples.into_iter().collect::<Result<_>>()?;
    let ratios: Vec<f64> = samples.iter().map(|s| s.ratio).collect();
    let k = par::argmax(&ratios).unwrap_or(0);
    Ok(MarcinkiewiczReport {
        m_hat: ratios[k],
        argmax_trial: k,
        max_lhs: samples.iter().map(|s| s.lhs).fold(0.0, f64::max),
        trials: cfg.trials,
        exact_quadrature: quadrature_exact(w as u64, cfg.p, cfg.inner_p, default_points(w as u64, cfg.p)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn projection_examples() {
        let f = TrigPolynomial::from_terms(2, [(0, vec![c(1.), c(2.)]), (5, vec![c(3.), c(4.)])]).unwrap();
        let g = project_interval(&f, &Interval::new(0, 3).unwrap());
        assert_eq!(g.support(), vec![0]);
        assert_eq!(project_interval(&f, &Interval::new(-10, 10).unwrap()), f);
        assert!(project_interval(&f, &Interval::new(6, 9).unwrap()).is_zero());
    }

    #[test]
    fn riesz_projection_as_multiplier() {
        let f = TrigPolynomial::scalar(&[(-1, c(1.)), (1, c(2.))]);
        let g = apply_multiplier(&f, &MultiplierSeq::indicator(&Interval::from(0)));
        assert!(g.max_abs_diff(&TrigPolynomial::scalar(&[(1, c(2.))])) == 0.0);
        assert_eq!(apply_multiplier(&f, &MultiplierSeq::constant(ONE)), f);
    }

    #[test]
    fn v1_examples() {
        assert_eq!(v1_seminorm(&MultiplierSeq::constant(c(2.)), -3, 3).unwrap(), 0.0);
        let riesz = MultiplierSeq::indicator(&Interval::from(0));
        assert_eq!(v1_seminorm(&riesz, -2, 2).unwrap(), 1.0);
        let box_ = MultiplierSeq::indicator(&Interval::new(0, 5).unwrap());
        assert_eq!(v1_seminorm(&box_, -1, 6).unwrap(), 2.0);
        assert!(matches!(v1_seminorm(&box_, 0, 3), Err(Error::WindowTooSmall { at: 5, .. })));
        assert!(matches!(v1_seminorm(&riesz, 1, 3), Err(Error::WindowTooSmall { at: -1, .. })));
    }

    #[test]
    fn lp_examples() {
        let x = vec![c(3.), c(4.)];
        let f = TrigPolynomial::from_terms(2, [(0, x)]).unwrap();
        for p in [1.0, 2.0, 3.5, 4.0] {
            assert!((lp_torus_norm(&f, p, 2.0).unwrap().value - 5.0).abs() < 1e-12);
            assert!((lp_torus_norm(&f, p, 1.0).unwrap().value - 7.0).abs() < 1e-12);
        }
        let f = TrigPolynomial::scalar(&[(1, ONE), (2, ONE)]);
        assert!((lp_torus_norm(&f, 2.0, 2.0).unwrap().value - 2f64.sqrt()).abs() < 1e-14);
        let f = TrigPolynomial::scalar(&[(0, ONE), (1, ONE)]);
        let n = lp_torus_norm(&f, 4.0, 2.0).unwrap();
        assert!(n.exact && (n.value - 6f64.powf(0.25)).abs() < 1e-14);
        assert!(!lp_torus_norm(&f, 3.0, 2.0).unwrap().exact);
    }

    #[test]
    fn aliasing_is_rejected() {
        let f = TrigPolynomial::scalar(&[(3, ONE)]);
        assert!(lp_torus_norm_with(&f, 2.0, 2.0, 6).is_err());
        assert!(lp_torus_norm_with(&f, 2.0, 2.0, 7).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let f = TrigPolynomial::from_terms(
            2,
            [(-3, vec![c(0.1), Complex64::new(0.0, -2.5)]), (7, vec![c(1e-300), c(1.0 / 3.0)])],
        )
        .unwrap();
        assert_eq!(TrigPolynomial::from_text(&f.to_text()).unwrap(), f);
        assert!(matches!(
            TrigPolynomial::from_text("0 1 0\n1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(TrigPolynomial::from_text("0 1 0\n0 2 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn partitions() {
        assert!(IntervalPartition::new(vec![Interval::to(0), Interval::from(0)]).is_err());
        let p = IntervalPartition::new(vec![Interval::to(-1), Interval::from(0)]).unwrap();
        assert!(p.covers(&TrigPolynomial::scalar(&[(-5, ONE), (9, ONE)])));
        let q = IntervalPartition::contiguous(-2, 2, &[0, 1]).unwrap();
        assert_eq!(q.len(), 3);
        assert!(!q.covers(&TrigPolynomial::scalar(&[(3, ONE)])));
        assert!(IntervalPartition::contiguous(0, 4, &[2, 2]).is_err());
    }

    #[test]
    fn riesz_p2_is_one() {
        let cfg = RieszConfig { trials: 32, refine: 2, ascent_steps: 100, ..Default::default() };
        for d in [1, 3] {
            let r = riesz_norm_lower_bound(2.0, d, 2.0, &cfg).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn marcinkiewicz_examples() {
        let f = TrigPolynomial::scalar(&[(-2, ONE), (0, c(0.5)), (3, c(-1.0))]);
        let s = marcinkiewicz_check(&f, &MultiplierSeq::constant(ONE), 4.0, 2.0, (-3, 3)).unwrap();
        assert!((s.lhs - 1.0).abs() < 1e-12 && s.rhs_factor == 1.0);
        let riesz = MultiplierSeq::indicator(&Interval::from(0));
        let s = marcinkiewicz_check(&f, &riesz, 2.0, 2.0, (-3, 3)).unwrap();
        assert!(s.lhs <= 1.0 + 1e-12 && s.rhs_factor == 2.0);
    }
}
