//! Inequalities for entrywise nonnegative operators on `R^d`, with the
//! `l^q` norm standing in for a `q`-concave lattice norm.
//!
//! Windows `n - sqrt(n) <= k <= n` are integer ranges
//! `n - isqrt(n) ..= n`, which is exactly the set of integers in the real
//! interval.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{p_norm_unchecked, power_norm_sequence, AscentConfig};
use crate::operators::ComplexMatrix;
use crate::par;
use crate::search::stream_rng;

/// Entrywise nonnegative real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveOperator {
    matrix: ComplexMatrix,
    real: DMatrix<f64>,
}

impl PositiveOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_nonnegative() {
            return Err(Error::Precondition(
                "operator is not positive: entries must be real and nonnegative".into(),
            ));
        }
        let real = matrix.as_dense().map(|z| z.re);
        Ok(Self { matrix, real })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.real.nrows()
    }

    /// `[x, T x, ..., T^k_max x]`.
    fn orbit(&self, x: &DVector<f64>, k_max: usize) -> Vec<DVector<f64>> {
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(x.clone());
        for k in 1..=k_max {
            let next = &self.real * &out[k - 1];
            out.push(next);
        }
        out
    }

    fn inf_norm(&self) -> f64 {
        self.real.row_iter().map(|r| r.sum()).fold(0.0, f64::max)
    }
}

/// `n - isqrt(n) ..= n`.
pub fn window(n: u64) -> (u64, u64) {
    (n - n.isqrt(), n)
}

fn check_q(q: f64) -> Result<()> {
    if !(1.0..2.0).contains(&q) {
        return Err(Error::invalid("q", format!("{q} is not in [1, 2)")));
    }
    Ok(())
}

fn check_x(x: &[f64], dim: usize) -> Result<DVector<f64>> {
    if x.len() != dim {
        return Err(Error::invalid("x", format!("length {} does not match dimension {dim}", x.len())));
    }
    if x.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::Precondition("x must be finite and entrywise nonnegative".into()));
    }
    Ok(DVector::from_column_slice(x))
}

/// Default series truncation `max(4n, 128)`.
pub fn default_k_max(n: u64) -> usize {
    (4 * n).max(128) as usize
}

/// Tail certificate threshold relative to the largest partial sum.
pub const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KrivineReport {
    pub n: u64,
    pub q: f64,
    /// Smallest `(rhs + tail) / lhs` over coordinates with `lhs > 0`;
    /// `+inf` when every `lhs` vanishes.
    pub margin: f64,
    /// As `margin` without the tail term.
    pub margin_partial: f64,
    pub coordinate: Option<usize>,
    pub window: (u64, u64),
    pub k_max: usize,
    /// Upper bound for the dropped series terms, in units of `e^n`.
    pub tail_bound: f64,
}

/// Compares, entrywise and scaled by `e^{-n}`,
/// `(1/(28 sqrt n)) (sum_{window} (T^k x)^q)^{1/q}` with
/// `sum_{k <= k_max} e^{-n} n^k/k! T^k x` plus a geometric tail bound.
pub fn krivine_check(t: &PositiveOperator, x: &[f64], n: u64, q: f64, k_max: Option<usize>) -> Result<KrivineReport> {
    check_q(q)?;
    if n < 2 {
        return Err(Error::invalid("n", "must be at least 2"));
    }
    let x = check_x(x, t.dim())?;
    let k_max = k_max.unwrap_or_else(|| default_k_max(n));
    if (k_max as u64) < 2 * n {
        return Err(Error::invalid("k_max", "must be at least 2n"));
    }
    let orbit = t.orbit(&x, k_max);
    let nf = n as f64;
    let d = t.dim();

    let mut rhs = vec![0.0; d];
    let mut log_w = -nf;
    let mut last_w = 0.0;
    for (k, v) in orbit.iter().enumerate() {
        if k > 0 {
            log_w += nf.ln() - (k as f64).ln();
        }
        let w = log_w.exp();
        for i in 0..d {
            rhs[i] += w * v[i];
        }
        last_w = w;
    }
    let growth = nf * t.inf_norm() / (k_max as f64 + 1.0);
    let tail = if growth == 0.0 {
        0.0
    } else if growth < 1.0 {
        last_w * orbit[k_max].amax() * growth / (1.0 - growth)
    } else {
        f64::INFINITY
    };
    let rhs_max = rhs.iter().copied().fold(0.0, f64::max);
    if !(tail < TAIL_TOLERANCE * rhs_max) && tail > 0.0 {
        return Err(Error::TruncationInsufficient { tail, partial: rhs_max });
    }

    let (lo, hi) = window(n);
    let scale = 1.0 / (28.0 * nf.sqrt());
    let mut margin = f64::INFINITY;
    let mut margin_partial = f64::INFINITY;
    let mut coordinate = None;
    for i in 0..d {
        let lhs = scale * p_norm_unchecked((lo..=hi).map(|k| orbit[k as usize][i]), q);
        if lhs > 0.0 {
            let m = (rhs[i] + tail) / lhs;
            if m < margin {
                margin = m;
                coordinate = Some(i);
            }
            margin_partial = margin_partial.min(rhs[i] / lhs);
        }
    }
    Ok(KrivineReport {
        n,
        q,
        margin,
        margin_partial,
        coordinate,
        window: (lo, hi),
        k_max,
        tail_bound: tail,
    })
}

/// `count` seeded nonnegative vectors with unit `l^q` norm.
pub fn nonnegative_corpus(dim: usize, count: usize, q: f64, seed: u64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
            let norm = p_norm_unchecked(v.iter().copied(), q);
            if norm == 0.0 {
                v[0] = 1.0;
            } else {
                v.iter_mut().for_each(|a| *a /= norm);
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockBoundReport {
    pub n: u64,
    pub q: f64,
    pub ks_ref: f64,
    pub window: (u64, u64),
    /// Smallest `28 ks_ref sqrt(n) |x| / (sum_window |T^k x|^q)^{1/q}` over the corpus.
    pub min_margin: f64,
    pub witness: Vec<f64>,
    pub corpus_size: usize,
    pub label: &'static str,
}

/// The windowed block bound over `nonnegative_corpus(d, corpus_size, q, seed)`.
///
/// `ks_ref` is normally a search lower bound, so a margin below 1 is a
/// finding about the substituted constant and not a counterexample.
pub fn block_bound_check(
    t: &PositiveOperator,
    q: f64,
    ks_ref: f64,
    n: u64,
    corpus_size: usize,
    seed: u64,
) -> Result<BlockBoundReport> {
    check_q(q)?;
    if n < 2 {
        return Err(Error::invalid("n", "must be at least 2"));
    }
    if !(ks_ref > 0.0 && ks_ref.is_finite()) {
        return Err(Error::invalid("ks_ref", "must be finite and positive"));
    }
    if corpus_size == 0 {
        return Err(Error::invalid("corpus_size", "must be at least 1"));
    }
    let (lo, hi) = window(n);
    let corpus = nonnegative_corpus(t.dim(), corpus_size, q, seed);
    let margins = par::map_slice(&corpus, |x| {
        let xv = DVector::from_column_slice(x);
        let orbit = t.orbit(&xv, n as usize);
        let xn = p_norm_unchecked(x.iter().copied(), q);
        let lhs = p_norm_unchecked(
            (lo..=hi).map(|k| p_norm_unchecked(orbit[k as usize].iter().copied(), q)),
            q,
        );
        if lhs > 0.0 {
            28.0 * ks_ref * (n as f64).sqrt() * xn / lhs
        } else {
            f64::INFINITY
        }
    });
    let neg: Vec<f64> = margins.iter().map(|m| -m).collect();
    let k = par::argmax(&neg).unwrap_or(0);
    Ok(BlockBoundReport {
        n,
        q,
        ks_ref,
        window: (lo, hi),
        min_margin: margins[k],
        witness: corpus[k].clone(),
        corpus_size,
        label: "consistency: lower-bound substitution",
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionRow {
    pub n: u64,
    /// Upper bound of `||T^n||_q`.
    pub power_norm: f64,
    /// `28 ks_ref n^{1/(2q')} max_{1 <= k <= 2 sqrt n} ||T^k||_q` (lower bounds inside the max).
    pub bound: f64,
    pub ratio: f64,
}

/// Informational: the power recursion `||T^n|| <= 28 K_s n^{1/(2q')} sup_{k <= 2 sqrt n} ||T^k||`
/// evaluated with `ks_ref` for `n = 2..=n_max`. Not asserted.
pub fn recursion_report(t: &PositiveOperator, q: f64, ks_ref: f64, n_max: u64, cfg: &AscentConfig) -> Result<Vec<RecursionRow>> {
    check_q(q)?;
    if n_max < 2 {
        return Err(Error::invalid("n_max", "must be at least 2"));
    }
    let seq = power_norm_sequence(t.matrix(), q, n_max as usize, cfg)?;
    let qc = crate::norms::conjugate_exponent(q);
    let inv_2qc = if qc.is_infinite() { 0.0 } else { 1.0 / (2.0 * qc) };
    let mut prefix_max = Vec::with_capacity(seq.len());
    let mut running = 0.0_f64;
    for e in &seq {
        running = running.max(e.lower());
        prefix_max.push(running);
    }
    Ok((2..=n_max)
        .map(|n| {
            let kk = ((4 * n).isqrt()).min(n_max) as usize;
            let sup = prefix_max[kk - 1];
            let bound = 28.0 * ks_ref * (n as f64).powf(inv_2qc) * sup;
            let power_norm = seq[n as usize - 1].upper();
            RecursionRow {
                n,
                power_norm,
                bound,
                ratio: if bound > 0.0 { power_norm / bound } else { f64::INFINITY },
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PositivityConfig {
    pub q: f64,
    pub corpus_size: usize,
    pub seed: u64,
}

impl Default for PositivityConfig {
    fn default() -> Self {
        Self {
            q: 1.5,
            corpus_size: 100,
            seed: 0,
        }
    }
}

/// Smallest Krivine margin over the corpus for each `n`.
pub fn krivine_corpus(t: &PositiveOperator, ns: &[u64], cfg: &PositivityConfig) -> Result<Vec<KrivineReport>> {
    let corpus = nonnegative_corpus(t.dim(), cfg.corpus_size, cfg.q, cfg.seed);
    ns.iter()
        .map(|&n| {
            let reports = par::map_slice(&corpus, |x| krivine_check(t, x, n, cfg.q, None));
            let reports: Vec<KrivineReport> = reports.into_iter().collect::<Result<_>>()?;
            let neg: Vec<f64> = reports.iter().map(|r| -r.margin).collect();
            let k = par::argmax(&neg).unwrap_or(0);
            Ok(reports[k].clone())
        })
        .collect()
}
