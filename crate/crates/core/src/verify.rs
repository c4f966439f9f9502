//! Verification of the Poisson-weight estimates used by the multiplier
//! construction, in double-double arithmetic.
//!
//! For `n >= 2`:
//!
//! * term bound: `e^n / (28 sqrt n) <= n^{n-k} / (n-k)! <= e^n / sqrt(8 pi n / 5)`
//!   for every integer `0 <= k <= 2 sqrt n`;
//! * weight bound: with `b_{n,m} = sum_{m - sqrt n <= k <= m - 1} n^k / k!` and
//!   `a_{n,m} = e^n / b_{n,m}` for `n - sqrt n <= m <= n` (zero otherwise),
//!   `sup_m a_{n,m} <= 32` and `[a_{n,.}]_{V1} <= 978`.
//!
//! Index windows are integer sets of closed real intervals: `k <= 2 sqrt n`
//! is `k <= isqrt(4n)`, `m >= n - sqrt n` is `m >= n - isqrt(n)`, and
//! `k >= m - sqrt n` is `k >= m - isqrt(n)` (clamped at 0). All sums are
//! log-sum-exp in double-double.

pub mod dd;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::fmt_f64;
use crate::par;
use dd::{LN_28, LN_8PI_OVER_5};
pub use dd::{log_poisson_term, DoubleDouble};


/// Weight bounds.
pub const SUP_BOUND: f64 = 32.0;
pub const V1_BOUND: f64 = 978.0;
/// Tolerance added to the weight bounds.
pub const A2_SLACK: f64 = 1e-9;
/// The term bound passes when the smallest log-domain slack is at least `-A1_SLACK`.
pub const A1_SLACK: f64 = 1e-10;
/// Slacks closer to zero than this are flagged for review.
pub const REVIEW_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumOrder {
    Ascending,
    Descending,
}

/// `ln sum_{k in lo..=hi} n^k / k!`.
fn log_sum_terms(n: u64, lo: u64, hi: u64, order: SumOrder) -> DoubleDouble {
    let terms: Vec<DoubleDouble> = (lo..=hi).map(|k| log_poisson_term(n, k)).collect();
    log_sum_exp(&terms, order)
}

fn log_sum_exp(terms: &[DoubleDouble], order: SumOrder) -> DoubleDouble {
    let m = terms
        .iter()
        .copied()
        .fold(DoubleDouble::new(f64::NEG_INFINITY, 0.0), |a, b| if b > a { b } else { a });
    let mut s = DoubleDouble::ZERO;
    let mut add = |t: &DoubleDouble| s = s + (*t - m).exp();
    match order {
        SumOrder::Ascending => terms.iter().for_each(&mut add),
        SumOrder::Descending => terms.iter().rev().for_each(&mut add),
    }
    m + s.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AppendixRow {
    pub n: u64,
    pub m: u64,
    pub k_lo: u64,
    pub k_hi: u64,
    /// `ln b_{n,m}`
    pub log_b: DoubleDouble,
    /// `e^n / b_{n,m}`
    pub a: f64,
}

/// `m` range of the weight bound: `n - isqrt(n) ..= n`.
pub fn m_window(n: u64) -> (u64, u64) {
    (n - n.isqrt(), n)
}

/// `k` window of `b_{n,m}`, or `None` when it is empty.
pub fn k_window(n: u64, m: u64) -> Option<(u64, u64)> {
    if m == 0 {
        return None;
    }
    Some((m.saturating_sub(n.isqrt()), m - 1))
}

pub fn appendix_b(n: u64, m: u64) -> Result<AppendixRow> {
    appendix_b_ordered(n, m, SumOrder::Ascending)
}

pub fn appendix_b_ordered(n: u64, m: u64, order: SumOrder) -> Result<AppendixRow> {
    if n < 2 {
        return Err(Error::invalid("n", "must be at least 2"));
    }
    let (m_lo, m_hi) = m_window(n);
    if m < m_lo || m > m_hi {
        return Err(Error::invalid("m", format!("must lie in [{m_lo}, {m_hi}] for n = {n}")));
    }
    let (k_lo, k_hi) = k_window(n, m).ok_or(Error::EmptyWindow { n, m })?;
    let log_b = log_sum_terms(n, k_lo, k_hi, order);
    let a = (DoubleDouble::from_u64(n) - log_b).exp().to_f64();
    Ok(AppendixRow {
        n,
        m,
        k_lo,
        k_hi,
        log_b,
        a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaA1 {
    pub n: u64,
    /// Smallest log-domain slack over both inequalities and all `k`.
    pub min_slack: f64,
    pub k_at_min: u64,
    /// `"lower"` or `"upper"`: the side attaining `min_slack`.
    pub side: &'static str,
    pub pass: bool,
    pub review: bool,
}

pub fn verify_lemma_a1(n: u64) -> Result<LemmaA1> {
    if n < 2 {
        return Err(Error::invalid("n", "must be at least 2"));
    }
    let nd = DoubleDouble::from_u64(n);
    let half_ln_n = nd.ln().mul_f64(0.5);
    let lower = nd - LN_28 - half_ln_n;
    let upper = nd - LN_8PI_OVER_5.mul_f64(0.5) - half_ln_n;
    let mut best = (f64::INFINITY, 0, "lower");
    for k in 0..=(4 * n).isqrt().min(n) {
        let l = log_poisson_term(n, n - k);
        let lo = (l - lower).to_f64();
        let hi = (upper - l).to_f64();
        if lo < best.0 {
            best = (lo, k, "lower");
        }
        if hi < best.0 {
            best = (hi, k, "upper");
        }
    }
    Ok(LemmaA1 {
        n,
        min_slack: best.0,
        k_at_min: best.1,
        side: best.2,
        pass: best.0 >= -A1_SLACK,
        review: best.0.abs() < REVIEW_THRESHOLD,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaA2 {
    pub n: u64,
    pub sup_a: f64,
    /// `a_first + sum |a_{m+1} - a_m| + a_last`: the `V1` seminorm of the
    /// sequence extended by zero.
    pub v1_a: f64,
    pub pass: bool,
    pub a: Vec<f64>,
}

pub fn verify_lemma_a2(n: u64) -> Result<LemmaA2> {
    if n < 2 {
        return Err(Error::invalid("n", "must be at least 2"));
    }
    let (m_lo, m_hi) = m_window(n);
    // Terms for every k any window can touch, computed once.
    let k0 = m_lo.saturating_sub(n.isqrt());
    let terms: Vec<DoubleDouble> = (k0..m_hi).map(|k| log_poisson_term(n, k)).collect();
    // All terms sit within a small constant factor of the largest, so one shift
    // and one exponential per term suffice.
    let shift = terms.iter().copied().fold(terms[0], |a, b| if b > a { b } else { a });
    let scaled: Vec<DoubleDouble> = terms.iter().map(|&t| (t - shift).exp()).collect();
    let log_en = DoubleDouble::from_u64(n) - shift;
    let mut a = Vec::with_capacity((m_hi - m_lo + 1) as usize);
    for m in m_lo..=m_hi {
        let (k_lo, k_hi) = k_window(n, m).ok_or(Error::EmptyWindow { n, m })?;
        let b = scaled[(k_lo - k0) as usize..=(k_hi - k0) as usize]
            .iter()
            .fold(DoubleDouble::ZERO, |s, &x| s + x);
        a.push((log_en - b.ln()).exp().to_f64());
    }
    let sup_a = a.iter().copied().fold(0.0, f64::max);
    let interior: f64 = a.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let v1_a = a[0] + interior + a[a.len() - 1];
    Ok(LemmaA2 {
        n,
        sup_a,
        v1_a,
        pass: sup_a <= SUP_BOUND + A2_SLACK && v1_a <= V1_BOUND + A2_SLACK,
        a,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u64,
    pub sup_a: f64,
    pub v1_a: f64,
    pub lem_a1_min_slack: f64,
    pub lem_a1_k: u64,
    pub lem_a1_pass: bool,
    pub lem_a2_pass: bool,
    pub review: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n_lo: u64,
    pub n_hi: u64,
    pub all_pass: bool,
    pub failures: Vec<u64>,
    pub review: Vec<u64>,
    pub max_sup_a: f64,
    pub n_at_max_sup_a: u64,
    pub max_v1_a: f64,
    pub n_at_max_v1_a: u64,
    pub min_a1_slack: f64,
    pub n_at_min_a1_slack: u64,
}

/// Both lemmas for every `n` in `n_lo..=n_hi`, in parallel over `n`.
pub fn sweep(n_lo: u64, n_hi: u64) -> Result<Vec<SweepRow>> {
    if n_lo < 2 || n_lo > n_hi {
        return Err(Error::invalid("range", "need 2 <= n_lo <= n_hi"));
    }
    let rows = par::map_range((n_hi - n_lo + 1) as usize, |i| {
        let n = n_lo + i as u64;
        let a1 = verify_lemma_a1(n)?;
        let a2 = verify_lemma_a2(n)?;
        Ok(SweepRow {
            n,
            sup_a: a2.sup_a,
            v1_a: a2.v1_a,
            lem_a1_min_slack: a1.min_slack,
            lem_a1_k: a1.k_at_min,
            lem_a1_pass: a1.pass,
            lem_a2_pass: a2.pass,
            review: a1.review,
        })
    });
    rows.into_iter().collect()
}

pub fn summarize(rows: &[SweepRow]) -> SweepSummary {
    let pick = |key: fn(&SweepRow) -> f64, max: bool| {
        rows.iter()
            .fold(None::<&SweepRow>, |acc, r| match acc {
                Some(b) if (max && key(r) <= key(b)) || (!max && key(r) >= key(b)) => Some(b),
                _ => Some(r),
            })
            .map_or((f64::NAN, 0), |r| (key(r), r.n))
    };
    let (max_sup_a, n_at_max_sup_a) = pick(|r| r.sup_a, true);
    let (max_v1_a, n_at_max_v1_a) = pick(|r| r.v1_a, true);
    let (min_a1_slack, n_at_min_a1_slack) = pick(|r| r.lem_a1_min_slack, false);
    let failures: Vec<u64> = rows
        .iter()
        .filter(|r| !(r.lem_a1_pass && r.lem_a2_pass))
        .map(|r| r.n)
        .collect();
    SweepSummary {
        n_lo: rows.first().map_or(0, |r| r.n),
        n_hi: rows.last().map_or(0, |r| r.n),
        all_pass: failures.is_empty(),
        failures,
        review: rows.iter().filter(|r| r.review).map(|r| r.n).collect(),
        max_sup_a,
        n_at_max_sup_a,
        max_v1_a,
        n_at_max_v1_a,
        min_a1_slack,
        n_at_min_a1_slack,
    }
}

/// See `docs/formats.md`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,sup_a,v1_a,lemA1_min_slack,lemA1_k,lemA1_pass,lemA2_pass,review\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            fmt_f64(r.sup_a),
            fmt_f64(r.v1_a),
            fmt_f64(r.lem_a1_min_slack),
            r.lem_a1_k,
            r.lem_a1_pass,
            r.lem_a2_pass,
            r.review
        );
    }
    out
}
