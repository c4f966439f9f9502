//! Kreiss-type functionals evaluated as suprema over search grids.
//!
//! Every value reported here is a lower bound of the corresponding
//! supremum: it is the largest value found on a finite grid. For `p = 2`
//! each grid evaluation is exact, so the result is a certified lower bound;
//! for other `p` the norm itself is the ascent lower bound.
//!
//! The region `|lambda| > 1` is searched on `lambda = (1 + 10^u) e^{i theta}`
//! with `u` uniformly spaced (so `|lambda| - 1` is log-spaced from
//! `min_offset` to `r_max - 1`) and `theta` uniformly spaced on the circle.
//! After the base grid, `refinement_rounds` rounds evaluate the eight
//! neighbours of the current five best points with steps shrunk by
//! `shrink` per round. Products `(|lambda| - 1)^n ||.||` are formed in the
//! log domain.

use std::f64::consts::{LN_10, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{self, check_p, AscentConfig};
use crate::operators::ComplexMatrix;
use crate::par;

/// Tolerance on the spectral radius before a functional is declared divergent.
pub const SPECTRAL_SLACK: f64 = 1e-9;

/// Number of best points refined per round.
const REFINE_TOP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    pub radial_count: usize,
    pub angular_count: usize,
    pub r_max: f64,
    /// Smallest sampled `|lambda| - 1`.
    pub min_offset: f64,
    pub refinement_rounds: usize,
    pub shrink: f64,
    pub seed: u64,
    pub p: f64,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            radial_count: 64,
            angular_count: 64,
            r_max: 1e6,
            min_offset: 1e-8,
            refinement_rounds: 3,
            shrink: 0.25,
            seed: 0,
            p: 2.0,
            restarts: 32,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        if !(self.r_max > 1.0) || !self.r_max.is_finite() {
            return Err(Error::invalid("r_max", "must be finite and > 1"));
        }
        if self.radial_count < 4 {
            return Err(Error::invalid("radial_count", "must be at least 4"));
        }
        if self.angular_count < 4 {
            return Err(Error::invalid("angular_count", "must be at least 4"));
        }
        if !(self.min_offset > 0.0 && self.min_offset < self.r_max - 1.0) {
            return Err(Error::invalid("min_offset", "must lie in (0, r_max - 1)"));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::invalid("shrink", "must lie in (0, 1)"));
        }
        Ok(())
    }

    fn ascent(&self) -> AscentConfig {
        AscentConfig {
            restarts: self.restarts,
            seed: self.seed,
            ..AscentConfig::default()
        }
    }

    fn u_range(&self) -> (f64, f64) {
        (self.min_offset.log10(), (self.r_max - 1.0).log10())
    }
}

/// Lower bound for `||m||_p`: exact for `p` in `{1, 2, inf}`.
fn norm_lower(m: &DMatrix<Complex64>, p: f64, ascent: &AscentConfig) -> f64 {
    if p == 2.0 {
        norms::spectral_norm(m)
    } else if p == 1.0 {
        norms::max_col_sum(m).0
    } else if p.is_infinite() {
        norms::max_row_sum(m).0
    } else {
        norms::dense_operator_norm(m, p, ascent).map_or(f64::NAN, |b| b.lower)
    }
}

/// Cheap upper bound for `||m||_p`, used only for pruning.
fn norm_upper_cheap(m: &DMatrix<Complex64>, p: f64) -> f64 {
    let (n1, _) = norms::max_col_sum(m);
    let (ninf, _) = norms::max_row_sum(m);
    if p == 2.0 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().min((n1 * ninf).sqrt())
    } else if p == 1.0 {
        n1
    } else if p.is_infinite() {
        ninf
    } else {
        n1.powf(1.0 / p) * ninf.powf(1.0 - 1.0 / p)
    }
}

fn shifted(t: &DMatrix<Complex64>, lambda: Complex64) -> DMatrix<Complex64> {
    let d = t.nrows();
    let mut a = -t.clone();
    for i in 0..d {
        a[(i, i)] += lambda;
    }
    a
}

fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    norms::max_row_sum(m).0
}

/// `(lambda - T)^{-1}` by a direct LU solve.
///
/// The result satisfies `||(lambda - T) R - I||_inf <= 1e-10 ||lambda - T||_inf ||R||_inf`;
/// failure of the solve or of the residual check is reported as
/// [`Error::Singular`].
pub fn resolvent_at(t: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix> {
    let a = shifted(t.as_dense(), lambda);
    let d = a.nrows();
    let singular = || Error::Singular {
        re: lambda.re,
        im: lambda.im,
    };
    let r = a
        .clone()
        .lu()
        .solve(&DMatrix::identity(d, d))
        .ok_or_else(singular)?;
    if r.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(singular());
    }
    let resid = &a * &r - DMatrix::<Complex64>::identity(d, d);
    if inf_norm(&resid) > 1e-10 * inf_norm(&a) * inf_norm(&r) {
        return Err(singular());
    }
    Ok(ComplexMatrix::from_dense_unchecked(r))
}

/// A grid location in `(u, theta)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub s: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy)]
struct Eval {
    value: f64,
    n: usize,
}

#[derive(Debug, Clone, Copy)]
struct GridMax {
    value: f64,
    n: usize,
    at: Option<GridPoint>,
    evaluations: usize,
    skipped: usize,
}

/// Base grid over `s in [s_min, s_max]` (`radial_count + 1` nested points)
/// times `angular_count` angles, then local refinement.
fn grid_maximize<F>(s_min: f64, s_max: f64, radial: usize, angular: usize, rounds: usize, shrink: f64, f: F) -> GridMax
where
    F: Fn(f64, f64) -> Eval + Sync + Send,
{
    let ds = (s_max - s_min) / radial as f64;
    let dtheta = TAU / angular as f64;
    let base: Vec<GridPoint> = (0..=radial)
        .flat_map(|i| {
            (0..angular).map(move |j| GridPoint {
                s: s_min + ds * i as f64,
                theta: dtheta * j as f64,
            })
        })
        .collect();
    let mut pool: Vec<(GridPoint, Eval)> = base
        .iter()
        .copied()
        .zip(par::map_slice(&base, |pt| f(pt.s, pt.theta)))
        .collect();

    let mut step = (ds, dtheta);
    for _ in 0..rounds {
        step = (step.0 * shrink, step.1 * shrink);
        let mut order: Vec<usize> = (0..pool.len()).filter(|&i| !pool[i].1.value.is_nan()).collect();
        order.sort_by(|&a, &b| pool[b].1.value.total_cmp(&pool[a].1.value).then(a.cmp(&b)));
        let mut fresh = Vec::new();
        for &i in order.iter().take(REFINE_TOP) {
            let c = pool[i].0;
            for (di, dj) in [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)] {
                let s = (c.s + di as f64 * step.0).clamp(s_min, s_max);
                let theta = (c.theta + dj as f64 * step.1).rem_euclid(TAU);
                fresh.push(GridPoint { s, theta });
            }
        }
        let vals = par::map_slice(&fresh, |pt| f(pt.s, pt.theta));
        pool.extend(fresh.into_iter().zip(vals));
    }

    let values: Vec<f64> = pool.iter().map(|(_, e)| e.value).collect();
    let skipped = values.iter().filter(|v| v.is_nan()).count();
    match par::argmax(&values) {
        Some(k) => GridMax {
            value: pool[k].1.value,
            n: pool[k].1.n,
            at: Some(pool[k].0),
            evaluations: pool.len(),
            skipped,
        },
        None => GridMax {
            value: f64::NAN,
            n: 0,
            at: None,
            evaluations: pool.len(),
            skipped,
        },
    }
}

fn lambda_at(u: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0 + 10f64.powf(u), theta)
}

/// Result of one supremum search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KreissEstimate {
    /// Largest value found; `+inf` when `diverged`.
    pub value: f64,
    /// Location of the maximum, `None` when it is the `|lambda| -> inf` limit.
    pub argmax: Option<Complex64>,
    /// Resolvent power (or partial-sum index) attaining the maximum.
    pub n: usize,
    pub diverged: bool,
    pub evaluations: usize,
    pub skipped: usize,
}

impl KreissEstimate {
    fn diverged() -> Self {
        Self {
            value: f64::INFINITY,
            argmax: None,
            n: 0,
            diverged: true,
            evaluations: 0,
            skipped: 0,
        }
    }

    fn from_grid(g: GridMax, point: impl Fn(GridPoint) -> Complex64, limit: f64) -> Self {
        let (value, argmax, n) = if !(g.value >= limit) {
            (limit, None, 1)
        } else {
            (g.value, g.at.map(point), g.n)
        };
        Self {
            value,
            argmax,
            n,
            diverged: false,
            evaluations: g.evaluations,
            skipped: g.skipped,
        }
    }
}

fn diverges(t: &ComplexMatrix) -> bool {
    t.spectral_radius() > 1.0 + SPECTRAL_SLACK
}

/// Lower bound of `sup_{|lambda|>1} (|lambda| - 1) ||(lambda - T)^{-1}||_p`.
///
/// The `|lambda| -> inf` limit of the functional equals 1 and is included
/// in the maximum.
pub fn kreiss_constant(t: &ComplexMatrix, cfg: &SearchConfig) -> Result<KreissEstimate> {
    cfg.validate()?;
    if diverges(t) {
        return Ok(KreissEstimate::diverged());
    }
    let dense = t.as_dense();
    let d = t.dim();
    let ascent = cfg.ascent();
    let (u_min, u_max) = cfg.u_range();
    let g = grid_maximize(u_min, u_max, cfg.radial_count, cfg.angular_count, cfg.refinement_rounds, cfg.shrink, |u, th| {
        let a = shifted(dense, lambda_at(u, th));
        match a.lu().solve(&DMatrix::identity(d, d)) {
            Some(r) => Eval {
                value: 10f64.powf(u) * norm_lower(&r, cfg.p, &ascent),
                n: 1,
            },
            None => Eval { value: f64::NAN, n: 1 },
        }
    });
    Ok(KreissEstimate::from_grid(g, |pt| lambda_at(pt.s, pt.theta), 1.0))
}

/// Lower bound of `sup_{|lambda|>1, 1<=n<=n_max} (|lambda| - 1)^n ||(lambda - T)^{-n}||_p`.
///
/// Resolvent powers reuse one LU factorization per grid point. The `n = 1`
/// search of [`kreiss_constant`] is folded into the maximum, so the result
/// never falls below the Kreiss lower bound for the same configuration.
pub fn strong_kreiss_constant(t: &ComplexMatrix, cfg: &SearchConfig, n_max: usize) -> Result<KreissEstimate> {
    cfg.validate()?;
    if n_max == 0 {
        return Err(Error::invalid("n_max", "must be at least 1"));
    }
    if diverges(t) {
        return Ok(KreissEstimate::diverged());
    }
    let dense = t.as_dense();
    let d = t.dim();
    let ascent = cfg.ascent();
    let (u_min, u_max) = cfg.u_range();
    let g = grid_maximize(u_min, u_max, cfg.radial_count, cfg.angular_count, cfg.refinement_rounds, cfg.shrink, |u, th| {
        let lu = shifted(dense, lambda_at(u, th)).lu();
        let log_gap = u * LN_10;
        let mut x = DMatrix::<Complex64>::identity(d, d);
        let mut log_scale = 0.0;
        let mut best = Eval {
            value: f64::NEG_INFINITY,
            n: 1,
        };
        for n in 1..=n_max {
            x = match lu.solve(&x) {
                Some(y) => y,
                None => return Eval { value: f64::NAN, n },
            };
            let amax = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !amax.is_finite() {
                return Eval { value: f64::NAN, n };
            }
            if amax == 0.0 {
                break;
            }
            x /= Complex64::new(amax, 0.0);
            log_scale += amax.ln();
            let nl = norm_lower(&x, cfg.p, &ascent);
            let v = (nl.ln() + log_scale + n as f64 * log_gap).exp();
            if v > best.value {
                best = Eval { value: v, n };
            }
        }
        best
    });
    let strong = KreissEstimate::from_grid(g, |pt| lambda_at(pt.s, pt.theta), 1.0);
    let k = kreiss_constant(t, cfg)?;
    Ok(if k.value > strong.value {
        KreissEstimate {
            evaluations: strong.evaluations + k.evaluations,
            skipped: strong.skipped + k.skipped,
            ..k
        }
    } else {
        KreissEstimate {
            evaluations: strong.evaluations + k.evaluations,
            skipped: strong.skipped + k.skipped,
            ..strong
        }
    })
}

/// Lower bound of `sup_{|xi| <= xi_max} e^{-|xi|} ||e^{xi T}||_p`.
///
/// Evaluated as `||exp(xi T - |xi| I)||_p`, which keeps the exponential in
/// range. The radial coordinate is `|xi|`, uniformly spaced on
/// `[0, xi_max]`; the grid contains `xi = 0`, where the functional is 1.
pub fn exponential_criterion(t: &ComplexMatrix, cfg: &SearchConfig, xi_max: f64) -> Result<KreissEstimate> {
    cfg.validate()?;
    if !(xi_max > 0.0 && xi_max.is_finite()) {
        return Err(Error::invalid("xi_max", "must be finite and positive"));
    }
    let dense = t.as_dense();
    let d = t.dim();
    let ascent = cfg.ascent();
    let g = grid_maximize(0.0, xi_max, cfg.radial_count, cfg.angular_count, cfg.refinement_rounds, cfg.shrink, |rho, th| {
        let xi = Complex64::from_polar(rho, th);
        let mut a = dense * xi;
        for i in 0..d {
            a[(i, i)] -= Complex64::new(rho, 0.0);
        }
        let e = a.exp();
        Eval {
            value: norm_lower(&e, cfg.p, &ascent),
            n: 0,
        }
    });
    let mut est = KreissEstimate::from_grid(g, |pt| Complex64::from_polar(pt.s, pt.theta), f64::NEG_INFINITY);
    est.n = 0;
    Ok(est)
}

/// Largest observed `||sum_{k<=n} lambda^k T^k||_p / (20 ks_ref (n+1))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CesaroReport {
    pub ratio_max: f64,
    pub lambda: Complex64,
    pub n: usize,
    pub ks_ref: f64,
    pub tolerance: f64,
    /// Every `(lambda, n)` whose ratio exceeds `1 + tolerance`.
    pub witnesses: Vec<CesaroWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CesaroWitness {
    pub lambda: Complex64,
    pub n: usize,
    pub ratio: f64,
}

impl CesaroReport {
    pub fn consistent(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Default slack for [`cesaro_partial_sum_bound`].
pub const CESARO_TOLERANCE: f64 = 1e-6;

/// Scans `lambda = e^{2 pi i j / angular_count}` and `n = 0..=n_max`.
///
/// Partial sums are accumulated incrementally per `lambda`. The exact norm
/// is only evaluated when a cheap upper bound could beat the running
/// maximum or cross `1 + tolerance`, so the reported maximum is the same as
/// for a full scan.
pub fn cesaro_partial_sum_bound(t: &ComplexMatrix, cfg: &SearchConfig, n_max: usize, ks_ref: f64) -> Result<CesaroReport> {
    cfg.validate()?;
    if !(ks_ref > 0.0 && ks_ref.is_finite()) {
        return Err(Error::invalid("ks_ref", "must be finite and positive"));
    }
    let dense = t.as_dense();
    let d = t.dim();
    let ascent = cfg.ascent();
    let tol = CESARO_TOLERANCE;
    let angles: Vec<usize> = (0..cfg.angular_count).collect();
    let per_lambda = par::map_slice(&angles, |&j| {
        let lambda = Complex64::from_polar(1.0, TAU * j as f64 / cfg.angular_count as f64);
        let step = dense * lambda;
        let mut power = DMatrix::<Complex64>::identity(d, d);
        let mut sum = power.clone();
        let mut best = (f64::NEG_INFINITY, 0usize);
        let mut witnesses = Vec::new();
        for n in 0..=n_max {
            let denom = 20.0 * ks_ref * (n + 1) as f64;
            let up = norm_upper_cheap(&sum, cfg.p) / denom;
            if up > best.0 || up > 1.0 + tol {
                let r = norm_lower(&sum, cfg.p, &ascent) / denom;
                if r > best.0 {
                    best = (r, n);
                }
                if r > 1.0 + tol {
                    witnesses.push(CesaroWitness { lambda, n, ratio: r });
                }
            }
            if n < n_max {
                power = &step * &power;
                sum += &power;
            }
        }
        (lambda, best, witnesses)
    });
    let values: Vec<f64> = per_lambda.iter().map(|x| x.1 .0).collect();
    let k = par::argmax(&values).unwrap_or(0);
    Ok(CesaroReport {
        ratio_max: per_lambda[k].1 .0,
        lambda: per_lambda[k].0,
        n: per_lambda[k].1 .1,
        ks_ref,
        tolerance: tol,
        witnesses: per_lambda.into_iter().flat_map(|x| x.2).collect(),
    })
}

/// Informational: largest `(|lambda| - 1) ||sum_{k<=n} T^k / lambda^{k+1}||_p / (4 ks_ref)`
/// over the base grid (no refinement). Only lower bounds are produced; the
/// constant 4 is not checked for sharpness.
pub fn truncated_neumann_ratio(t: &ComplexMatrix, cfg: &SearchConfig, n_max: usize, ks_ref: f64) -> Result<f64> {
    cfg.validate()?;
    if !(ks_ref > 0.0) {
        return Err(Error::invalid("ks_ref", "must be positive"));
    }
    let dense = t.as_dense();
    let d = t.dim();
    let ascent = cfg.ascent();
    let (u_min, u_max) = cfg.u_range();
    let g = grid_maximize(u_min, u_max, cfg.radial_count, cfg.angular_count, 0, cfg.shrink, |u, th| {
        let lambda = lambda_at(u, th);
        let inv = lambda.inv();
        let step = dense * inv;
        let mut term = DMatrix::<Complex64>::identity(d, d) * inv;
        let mut sum = term.clone();
        let gap = 10f64.powf(u);
        let mut best = f64::NEG_INFINITY;
        for n in 0..=n_max {
            best = best.max(gap * norm_lower(&sum, cfg.p, &ascent));
            if n < n_max {
                term = &step * &term;
                sum += &term;
            }
        }
        Eval { value: best, n: 0 }
    });
    Ok(g.value / (4.0 * ks_ref))
}

/// `{re, im}` pair for JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgmaxSet {
    /// `None` when the maximum is the `|lambda| -> inf` limit.
    pub kreiss: Option<ComplexPoint>,
    pub strong: Option<ComplexPoint>,
    pub exp: Option<ComplexPoint>,
    pub cesaro: ComplexPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridMetadata {
    pub radial_count: usize,
    pub angular_count: usize,
    pub r_max: f64,
    pub min_offset: f64,
    pub refinement_rounds: usize,
    pub shrink: f64,
    pub p: Option<f64>,
    pub strong_n_max: usize,
    pub xi_max: f64,
    pub cesaro_n_max: usize,
    pub evaluations: usize,
    pub skipped: usize,
}

/// All four functionals for one operator. Values are `None` when the
/// spectral radius exceeds `1 + 1e-9`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KreissReport {
    pub k_lower: Option<f64>,
    /// Advisory only: the largest `||T^n||_p` upper bound seen for
    /// `n <= 256`, which bounds `K` from above if `T` is power bounded
    /// with that constant. Never a certificate.
    pub k_upper_hint: Option<f64>,
    pub ks_lower: Option<f64>,
    pub exp_lower: f64,
    pub cesaro_ratio_max: Option<f64>,
    pub argmax: ArgmaxSet,
    pub n_at_max: usize,
    pub cesaro_n_at_max: usize,
    pub spectral_radius: f64,
    pub diverged: bool,
    pub grid: GridMetadata,
    pub seed: u64,
}

/// Horizons for [`kreiss_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportHorizons {
    pub strong_n_max: usize,
    pub xi_max: f64,
    pub cesaro_n_max: usize,
}

impl Default for ReportHorizons {
    fn default() -> Self {
        Self {
            strong_n_max: 16,
            xi_max: 20.0,
            cesaro_n_max: 200,
        }
    }
}

pub fn kreiss_report(t: &ComplexMatrix, cfg: &SearchConfig, h: &ReportHorizons) -> Result<KreissReport> {
    let rho = t.spectral_radius();
    let k = kreiss_constant(t, cfg)?;
    let ks = strong_kreiss_constant(t, cfg, h.strong_n_max)?;
    let ex = exponential_criterion(t, cfg, h.xi_max)?;
    let diverged = k.diverged;
    let cesaro = if diverged {
        None
    } else {
        Some(cesaro_partial_sum_bound(t, cfg, h.cesaro_n_max, ks.value)?)
    };
    let hint = if diverged {
        None
    } else {
        let seq = norms::power_norm_sequence(t, cfg.p, 256, &cfg.ascent())?;
        Some(seq.iter().map(|e| e.upper()).fold(1.0, f64::max))
    };
    let finite = |v: f64| if v.is_finite() { Some(v) } else { None };
    Ok(KreissReport {
        k_lower: finite(k.value),
        k_upper_hint: hint,
        ks_lower: finite(ks.value),
        exp_lower: ex.value,
        cesaro_ratio_max: cesaro.as_ref().map(|c| c.ratio_max),
        argmax: ArgmaxSet {
            kreiss: k.argmax.map(Into::into),
            strong: ks.argmax.map(Into::into),
            exp: ex.argmax.map(Into::into),
            cesaro: cesaro.as_ref().map_or(ComplexPoint { re: 1.0, im: 0.0 }, |c| c.lambda.into()),
        },
        n_at_max: ks.n,
        cesaro_n_at_max: cesaro.as_ref().map_or(0, |c| c.n),
        spectral_radius: rho,
        diverged,
        grid: GridMetadata {
            radial_count: cfg.radial_count,
            angular_count: cfg.angular_count,
            r_max: cfg.r_max,
            min_offset: cfg.min_offset,
            refinement_rounds: cfg.refinement_rounds,
            shrink: cfg.shrink,
            p: finite(cfg.p),
            strong_n_max: h.strong_n_max,
            xi_max: h.xi_max,
            cesaro_n_max: h.cesaro_n_max,
            evaluations: k.evaluations + ks.evaluations + ex.evaluations,
            skipped: k.skipped + ks.skipped + ex.skipped,
        },
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_rows(2, &[c(0.), c(2.), c(0.), c(0.)]).unwrap()
    }

    #[test]
    fn resolvent_examples() {
        let r = resolvent_at(&ComplexMatrix::zeros(3), c(2.0)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.5 } else { 0.0 };
                assert!((r.get(i, j) - c(want)).norm() < 1e-15);
            }
        }
        for rr in [1.5, 3.0, 10.0] {
            let r = resolvent_at(&nilpotent(), c(rr)).unwrap();
            let want = [1.0 / rr, 2.0 / (rr * rr), 0.0, 1.0 / rr];
            for (k, w) in want.iter().enumerate() {
                assert!((r.get(k / 2, k % 2) - c(*w)).norm() < 1e-14);
            }
        }
        assert!(matches!(
            resolvent_at(&ComplexMatrix::identity(2), c(1.0)),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig { r_max: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SearchConfig { angular_count: 3, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SearchConfig { p: 0.5, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn divergence_flag() {
        let t = ComplexMatrix::from_rows(1, &[c(1.1)]).unwrap();
        let k = kreiss_constant(&t, &SearchConfig::default()).unwrap();
        assert!(k.diverged && k.value.is_infinite());
    }

    #[test]
    fn identity_kreiss_is_one() {
        let cfg = SearchConfig::default();
        let k = kreiss_constant(&ComplexMatrix::identity(3), &cfg).unwrap();
        assert!((k.value - 1.0).abs() < 1e-6, "{k:?}");
        let ks = strong_kreiss_constant(&ComplexMatrix::identity(3), &cfg, 16).unwrap();
        assert!((ks.value - 1.0).abs() < 1e-6, "{ks:?}");
    }

    #[test]
    fn exponential_examples() {
        let cfg = SearchConfig { radial_count: 16, angular_count: 16, ..Default::default() };
        let z = exponential_criterion(&ComplexMatrix::zeros(2), &cfg, 5.0).unwrap();
        assert!((z.value - 1.0).abs() < 1e-12);
        let i = exponential_criterion(&ComplexMatrix::identity(2), &cfg, 5.0).unwrap();
        assert!((i.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cesaro_examples() {
        let cfg = SearchConfig { angular_count: 8, ..Default::default() };
        let r = cesaro_partial_sum_bound(&ComplexMatrix::identity(2), &cfg, 10, 1.0).unwrap();
        assert!((r.ratio_max - 0.05).abs() < 1e-12 && r.consistent());
        let r = cesaro_partial_sum_bound(&ComplexMatrix::zeros(2), &cfg, 10, 1.0).unwrap();
        assert!((r.ratio_max - 0.05).abs() < 1e-12 && r.n == 0);
        let neg = ComplexMatrix::from_rows(1, &[c(-1.0)]).unwrap();
        let r = cesaro_partial_sum_bound(&neg, &cfg, 10, 1.0).unwrap();
        assert!((r.ratio_max - 0.05).abs() < 1e-12 && r.consistent());
        let one = SearchConfig { angular_count: 4, ..Default::default() };
        let half = cesaro_partial_sum_bound(&neg, &one, 10, 1.0).unwrap();
        assert!((half.ratio_max - 0.05).abs() < 1e-12);
    }

    #[test]
    fn cesaro_flags_witness() {
        let j = ComplexMatrix::from_rows(2, &[c(1.), c(1.), c(0.), c(1.)]).unwrap();
        let cfg = SearchConfig { angular_count: 8, ..Default::default() };
        let r = cesaro_partial_sum_bound(&j, &cfg, 100, 1.0).unwrap();
        assert!(!r.consistent());
        assert!(r.witnesses.iter().all(|w| w.ratio > 1.0));
    }
}
