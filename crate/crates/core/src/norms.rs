//! Vector and operator `p`-norms on `C^d`.
//!
//! For `p` in `{1, 2, inf}` the operator norm is computed exactly (column
//! sums, largest singular value, row sums). For every other `p` the value is
//! bracketed: the lower end comes from a multi-restart projected gradient
//! ascent of `||Tx||_p / ||x||_p` and the upper end from Riesz-Thorin
//! interpolation between the exact endpoints, intersected with the
//! `d^{|1/p - 1/2|}` equivalence bound around the 2-norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::ComplexMatrix;
use crate::par;
use crate::search::{complex_gaussian, stream_rng};

/// Rejects `p < 1` and NaN; `f64::INFINITY` stands for `p = inf`.
pub fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        Err(Error::Domain(format!("norm index p = {p} must satisfy p >= 1")))
    } else {
        Ok(())
    }
}

/// Hoelder conjugate `p' = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

pub fn vector_p_norm(v: &[Complex64], p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(p_norm_unchecked(v.iter().map(|z| z.norm()), p))
}

/// `(sum |a_k|^p)^{1/p}` (or the max for `p = inf`) of nonnegative
/// magnitudes, scaled by the largest entry to avoid overflow.
pub(crate) fn p_norm_unchecked<I>(mags: I, p: f64) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    let m = mags.clone().fold(0.0_f64, f64::max);
    if m == 0.0 || p.is_infinite() {
        return m;
    }
    if !m.is_finite() {
        return f64::INFINITY;
    }
    if p == 1.0 {
        return mags.sum();
    }
    if p == 2.0 {
        return m * mags.map(|a| (a / m) * (a / m)).sum::<f64>().sqrt();
    }
    m * mags.map(|a| (a / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Exact,
    AscentPlusInterpolation,
}

/// Two-sided bracket for an operator norm, with a vector attaining `lower`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
    pub witness: Vec<Complex64>,
    pub method: NormMethod,
}

impl NormBounds {
    pub fn is_exact(&self) -> bool {
        self.method == NormMethod::Exact
    }
}

/// Restart and step rule of the lower-bound ascent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AscentConfig {
    pub restarts: usize,
    pub max_steps: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_steps: 500,
            rel_tol: 1e-10,
            seed: 0,
        }
    }
}

pub fn operator_p_norm(t: &ComplexMatrix, p: f64, cfg: &AscentConfig) -> Result<NormBounds> {
    dense_operator_norm(t.as_dense(), p, cfg)
}

pub(crate) fn max_col_sum(m: &DMatrix<Complex64>) -> (f64, usize) {
    let mut best = (0.0, 0);
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|z| z.norm()).sum();
        if s > best.0 {
            best = (s, j);
        }
    }
    best
}

pub(crate) fn max_row_sum(m: &DMatrix<Complex64>) -> (f64, usize) {
    let mut best = (0.0, 0);
    for i in 0..m.nrows() {
        let s: f64 = m.row(i).iter().map(|z| z.norm()).sum();
        if s > best.0 {
            best = (s, i);
        }
    }
    best
}

/// Largest singular value together with a right singular vector.
pub(crate) fn top_singular(m: &DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    let d = m.ncols();
    if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        let mut e = vec![Complex64::new(0.0, 0.0); d];
        e[0] = Complex64::new(1.0, 0.0);
        return (0.0, e);
    }
    let svd = m.clone().svd(false, true);
    let k = par::argmax(svd.singular_values.as_slice()).unwrap_or(0);
    let v_t = svd.v_t.expect("requested V^H");
    let v: Vec<Complex64> = v_t.row(k).iter().map(|z| z.conj()).collect();
    (svd.singular_values[k], v)
}

/// Largest singular value only.
pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 1 {
        return m[(0, 0)].norm();
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

fn ratio(m: &DMatrix<Complex64>, x: &[Complex64], p: f64) -> f64 {
    let xv = DVector::from_column_slice(x);
    let y = m * &xv;
    let nx = p_norm_unchecked(x.iter().map(|z| z.norm()), p);
    if nx == 0.0 {
        return 0.0;
    }
    p_norm_unchecked(y.iter().map(|z| z.norm()), p) / nx
}

/// Exact norm for `p` in `{1, 2, inf}`, bracket otherwise.
pub fn dense_operator_norm(m: &DMatrix<Complex64>, p: f64, cfg: &AscentConfig) -> Result<NormBounds> {
    check_p(p)?;
    let d = m.ncols();
    let unit = |j: usize| {
        let mut e = vec![Complex64::new(0.0, 0.0); d];
        e[j] = Complex64::new(1.0, 0.0);
        e
    };
    if p == 1.0 {
        let (s, j) = max_col_sum(m);
        return Ok(NormBounds {
            lower: s,
            upper: s,
            witness: unit(j),
            method: NormMethod::Exact,
        });
    }
    if p.is_infinite() {
        let (s, i) = max_row_sum(m);
        let witness = inf_witness(m, i);
        return Ok(NormBounds {
            lower: s,
            upper: s,
            witness,
            method: NormMethod::Exact,
        });
    }
    let (s2, v2) = top_singular(m);
    if p == 2.0 {
        return Ok(NormBounds {
            lower: s2,
            upper: s2,
            witness: v2,
            method: NormMethod::Exact,
        });
    }

    let (n1, j1) = max_col_sum(m);
    let (ninf, iinf) = max_row_sum(m);
    let mut upper = n1.powf(1.0 / p) * ninf.powf(1.0 - 1.0 / p);
    if p > 2.0 {
        upper = upper.min(s2.powf(2.0 / p) * ninf.powf(1.0 - 2.0 / p));
    } else {
        upper = upper.min(n1.powf(2.0 / p - 1.0) * s2.powf(2.0 - 2.0 / p));
    }
    upper = upper.min((d as f64).powf((1.0 / p - 0.5).abs()) * s2);

    let mut starts = vec![v2, inf_witness(m, iinf), unit(j1)];
    let fixed = starts.len();
    for r in 0..cfg.restarts {
        let mut rng = stream_rng(cfg.seed, r as u64);
        starts.push((0..d).map(|_| complex_gaussian(&mut rng)).collect());
    }
    debug_assert!(starts.len() >= fixed);
    let results = par::map_slice(&starts, |x0| ascend(m, x0.clone(), p, cfg));
    let values: Vec<f64> = results.iter().map(|r| r.0).collect();
    let best = par::argmax(&values).unwrap_or(0);
    let (lower, witness) = results[best].clone();
    Ok(NormBounds {
        lower,
        upper: upper.max(lower),
        witness,
        method: NormMethod::AscentPlusInterpolation,
    })
}

fn inf_witness(m: &DMatrix<Complex64>, row: usize) -> Vec<Complex64> {
    m.row(row)
        .iter()
        .map(|z| {
            let r = z.norm();
            if r == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                z.conj() / r
            }
        })
        .collect()
}

fn normalize_p(x: &mut [Complex64], p: f64) -> bool {
    let n = p_norm_unchecked(x.iter().map(|z| z.norm()), p);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|z| *z /= n);
    true
}

/// `|z|^{p-1} z/|z|`, zero at the origin.
fn dual_power(z: Complex64, p: f64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z * r.powf(p - 2.0)
    }
}

/// Normalized gradient ascent of `log(||Tx||_p / ||x||_p)` on the unit
/// `p`-sphere with backtracking.
fn ascend(m: &DMatrix<Complex64>, mut x: Vec<Complex64>, p: f64, cfg: &AscentConfig) -> (f64, Vec<Complex64>) {
    if !normalize_p(&mut x, p) {
        return (0.0, x);
    }
    let mh = m.adjoint();
    let mut value = ratio(m, &x, p);
    let mut t = 0.5;
    for _ in 0..cfg.max_steps {
        let xv = DVector::from_column_slice(&x);
        let y = m * &xv;
        let ny = p_norm_unchecked(y.iter().map(|z| z.norm()), p);
        if ny == 0.0 {
            break;
        }
        let nyp = ny.powf(p);
        let u = y.map(|z| dual_power(z, p) / nyp);
        let g_out = &mh * u;
        // ||x||_p = 1
        let g: Vec<Complex64> = x
            .iter()
            .zip(g_out.iter())
            .map(|(xi, gi)| gi - dual_power(*xi, p))
            .collect();
        let gn = g.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if gn == 0.0 || !gn.is_finite() {
            break;
        }
        let xn = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut improved = false;
        let mut gain = 0.0;
        while t > 1e-14 {
            let mut cand: Vec<Complex64> = x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| xi + gi * (t * xn / gn))
                .collect();
            if normalize_p(&mut cand, p) {
                let v = ratio(m, &cand, p);
                if v > value {
                    gain = (v - value) / value;
                    value = v;
                    x = cand;
                    improved = true;
                    t = (t * 2.0).min(1.0);
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved || gain < cfg.rel_tol {
            break;
        }
    }
    (value, x)
}

/// `||T^n||_p` for one power, stored as the bounds of the normalized power
/// `M_n` together with the scale ledger `T^n = M_n * exp(log_scale)`.
#[derive(Debug, Clone, Serialize)]
pub struct PowerNorm {
    pub n: usize,
    pub bounds: NormBounds,
    pub log_scale: f64,
}

impl PowerNorm {
    pub fn lower(&self) -> f64 {
        self.bounds.lower * self.log_scale.exp()
    }

    pub fn upper(&self) -> f64 {
        self.bounds.upper * self.log_scale.exp()
    }

    pub fn log_lower(&self) -> f64 {
        self.bounds.lower.ln() + self.log_scale
    }

    pub fn log_upper(&self) -> f64 {
        self.bounds.upper.ln() + self.log_scale
    }
}

const RENORM_LO: f64 = 1e-100;
const RENORM_HI: f64 = 1e100;

/// Norm brackets for `T^1, ..., T^{n_max}`.
///
/// Powers are formed by repeated multiplication; whenever the largest entry
/// leaves `[1e-100, 1e100]` the matrix is rescaled and the logarithm of the
/// factor moves into the scale ledger. For inexact `p` each ascent is warm
/// started from the previous power's witness.
pub fn power_norm_sequence(t: &ComplexMatrix, p: f64, n_max: usize, cfg: &AscentConfig) -> Result<Vec<PowerNorm>> {
    check_p(p)?;
    if n_max == 0 {
        return Err(Error::invalid("n_max", "must be at least 1"));
    }
    let base = t.as_dense();
    let mut m = base.clone();
    let mut log_scale = 0.0_f64;
    let mut out = Vec::with_capacity(n_max);
    let mut prev_witness: Option<Vec<Complex64>> = None;
    for n in 1..=n_max {
        if n > 1 {
            m = base * &m;
        }
        let amax = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if amax != 0.0 && !(RENORM_LO..=RENORM_HI).contains(&amax) {
            m /= Complex64::new(amax, 0.0);
            log_scale += amax.ln();
        }
        if !log_scale.is_finite() || !amax.is_finite() {
            return Err(Error::Overflow { n });
        }
        let mut bounds = dense_operator_norm(&m, p, cfg)?;
        if let (false, Some(w)) = (bounds.is_exact(), prev_witness.as_ref()) {
            let warm = ascend(&m, w.clone(), p, cfg);
            if warm.0 > bounds.lower {
                bounds.lower = warm.0;
                bounds.witness = warm.1;
                bounds.upper = bounds.upper.max(bounds.lower);
            }
        }
        prev_witness = Some(bounds.witness.clone());
        out.push(PowerNorm { n, bounds, log_scale });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{make_gallery_operator, standard_gallery};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn vector_norm_examples() {
        assert_eq!(vector_p_norm(&[c(3.), c(4.)], 2.0).unwrap(), 5.0);
        assert_eq!(vector_p_norm(&[c(1.), c(1.), c(1.)], 1.0).unwrap(), 3.0);
        assert_eq!(vector_p_norm(&[c(2.), c(-5.)], f64::INFINITY).unwrap(), 5.0);
        assert!(matches!(vector_p_norm(&[c(1.)], 0.5), Err(Error::Domain(_))));
        assert!(vector_p_norm(&[c(1.)], f64::NAN).is_err());
    }

    #[test]
    fn vector_norm_survives_extreme_scales() {
        let v = [c(1e200), c(1e200)];
        assert!((vector_p_norm(&v, 2.0).unwrap() / 1e200 - 2f64.sqrt()).abs() < 1e-15);
        let v = [c(1e-200), c(1e-200)];
        assert!((vector_p_norm(&v, 3.0).unwrap() / 1e-200 - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn exact_examples() {
        let cfg = AscentConfig::default();
        let j = ComplexMatrix::from_rows(2, &[c(1.), c(1.), c(0.), c(1.)]).unwrap();
        let b = operator_p_norm(&j, f64::INFINITY, &cfg).unwrap();
        assert_eq!((b.lower, b.upper, b.method), (2.0, 2.0, NormMethod::Exact));
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let b = operator_p_norm(&ComplexMatrix::identity(4), p, &cfg).unwrap();
            assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12, "p={p}: {b:?}");
        }
        let nil = ComplexMatrix::from_rows(2, &[c(0.), c(2.), c(0.), c(0.)]).unwrap();
        let b = operator_p_norm(&nil, 2.0, &cfg).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-14 && b.is_exact());
    }

    #[test]
    fn witness_reproduces_lower() {
        let cfg = AscentConfig { restarts: 8, ..Default::default() };
        for (_, spec) in standard_gallery() {
            let t = make_gallery_operator(&spec).unwrap();
            for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
                let b = operator_p_norm(&t, p, &cfg).unwrap();
                let r = ratio(t.as_dense(), &b.witness, p);
                let tol = 1e-12 * b.lower.max(1e-300);
                assert!((r - b.lower).abs() <= tol.max(1e-15), "p={p}: {r} vs {}", b.lower);
                assert!(b.lower <= b.upper);
            }
        }
    }

    #[test]
    fn jordan_power_sequence_closed_form() {
        let j = ComplexMatrix::from_rows(2, &[c(1.), c(1.), c(0.), c(1.)]).unwrap();
        let seq = power_norm_sequence(&j, f64::INFINITY, 5, &AscentConfig::default()).unwrap();
        assert_eq!(seq[4].n, 5);
        assert!((seq[4].lower() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn zero_and_rotation_sequences() {
        let cfg = AscentConfig::default();
        let z = power_norm_sequence(&ComplexMatrix::zeros(3), 2.0, 6, &cfg).unwrap();
        assert!(z.iter().all(|e| e.lower() == 0.0 && e.upper() == 0.0));
        let rot = ComplexMatrix::from_rows(1, &[Complex64::from_polar(1.0, std::f64::consts::TAU * 0.3)]).unwrap();
        let r = power_norm_sequence(&rot, 2.0, 200, &cfg).unwrap();
        assert!(r.iter().all(|e| (e.lower() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn scale_ledger_prevents_overflow() {
        let big = ComplexMatrix::from_rows(1, &[c(1e10)]).unwrap();
        let seq = power_norm_sequence(&big, 2.0, 100, &AscentConfig::default()).unwrap();
        let last = &seq[99];
        assert!((last.log_lower() - 1000.0 * 10f64.ln()).abs() < 1e-8);
        let tiny = ComplexMatrix::from_rows(1, &[c(1e-10)]).unwrap();
        let seq = power_norm_sequence(&tiny, 2.0, 100, &AscentConfig::default()).unwrap();
        assert!((seq[99].log_lower() + 1000.0 * 10f64.ln()).abs() < 1e-8);
    }
}
