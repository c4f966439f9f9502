//! Empirical `l^q(L^p)` decomposition constants and the type, cotype and
//! Fourier-type inequalities.
//!
//! A constant returned here is the largest ratio observed over a seeded
//! corpus, i.e. an empirical floor for the best constant; nothing is
//! claimed about the true value.
//!
//! All `L^p` norms of a polynomial and of its blocks `D_I f` are taken on
//! one common quadrature grid, so Hölder-type and Parseval identities hold
//! exactly for the discrete norms as well.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{
    default_points, lp_torus_norm_with, project_interval, quadrature_exact, Interval, IntervalPartition, TrigPolynomial,
};
use crate::norms::{check_p, conjugate_exponent, p_norm_unchecked};
use crate::par;
use crate::search::{complex_gaussian, hill_climb, stream_rng, unit_phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `||f|| <= U (sum_I ||D_I f||^q)^{1/q}`
    Upper,
    /// `(sum_I ||D_I f||^q)^{1/q} <= L ||f||`
    Lower,
}

fn check_q(q: f64) -> Result<()> {
    check_p(q).map_err(|_| Error::invalid("q", format!("{q} is not in [1, inf]")))
}

/// `||D_I f||_{L^p}` for every block, plus `||f||_{L^p}`, on `points` nodes.
pub fn block_norms(
    f: &TrigPolynomial,
    part: &IntervalPartition,
    p: f64,
    inner_p: f64,
    points: usize,
) -> Result<(f64, Vec<f64>)> {
    let whole = lp_torus_norm_with(f, p, inner_p, points)?.value;
    let blocks = part
        .intervals()
        .iter()
        .map(|iv| lp_torus_norm_with(&project_interval(f, iv), p, inner_p, points).map(|n| n.value))
        .collect::<Result<Vec<_>>>()?;
    Ok((whole, blocks))
}

/// Ratio that any valid constant for `side` must dominate.
pub fn decomposition_ratio(
    f: &TrigPolynomial,
    part: &IntervalPartition,
    p: f64,
    q: f64,
    inner_p: f64,
    side: Side,
) -> Result<f64> {
    check_p(p)?;
    check_q(q)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !part.covers(f) {
        return Err(Error::Precondition("partition does not cover the support".into()));
    }
    let (whole, blocks) = block_norms(f, part, p, inner_p, default_points(f.max_frequency(), p))?;
    let sum = p_norm_unchecked(blocks.iter().copied(), q);
    Ok(match side {
        Side::Upper => whole / sum,
        Side::Lower => sum / whole,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMode {
    /// Random contiguous blocks.
    Contiguous,
    /// Every frequency its own block (Fourier-type ratios).
    Singletons,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecompConfig {
    pub dim: usize,
    /// Largest number of consecutive frequencies in a random support.
    pub max_support: usize,
    pub trials: usize,
    /// Number of best trials refined by local ascent.
    pub refine: usize,
    pub ascent_steps: usize,
    /// All `+-1` patterns (times the all-ones vector) on supports of size
    /// up to this bound are scanned against every contiguous partition.
    pub exhaustive_signs: usize,
    pub partitions: PartitionMode,
    pub seed: u64,
}

impl Default for DecompConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            max_support: 32,
            trials: 10_000,
            refine: 10,
            ascent_steps: 200,
            exhaustive_signs: 8,
            partitions: PartitionMode::Contiguous,
            seed: 0,
        }
    }
}

impl DecompConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        if self.max_support == 0 {
            return Err(Error::invalid("max_support", "must be at least 1"));
        }
        if self.exhaustive_signs > 12 {
            return Err(Error::invalid("exhaustive_signs", "at most 12"));
        }
        Ok(())
    }
}

/// A polynomial on consecutive frequencies `lo..lo+len` with cut flags
/// between neighbours; `cuts[k]` splits between `lo+k` and `lo+k+1`.
#[derive(Debug, Clone, PartialEq)]
struct Candidate {
    lo: i64,
    coeffs: Vec<Complex64>,
    cuts: Vec<bool>,
}

impl Candidate {
    fn len(&self, dim: usize) -> usize {
        self.coeffs.len() / dim
    }

    fn polynomial(&self, dim: usize) -> TrigPolynomial {
        let keys: Vec<i64> = (0..self.len(dim) as i64).map(|k| self.lo + k).collect();
        TrigPolynomial::from_terms(dim, keys.iter().zip(self.coeffs.chunks(dim)).map(|(&n, v)| (n, v.to_vec())))
            .expect("consistent dimension")
    }

    fn partition(&self, dim: usize) -> IntervalPartition {
        let hi = self.lo + self.len(dim) as i64 - 1;
        let cuts: Vec<i64> = self
            .cuts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(k, _)| self.lo + k as i64 + 1)
            .collect();
        IntervalPartition::contiguous(self.lo, hi, &cuts).expect("cuts are increasing and inside")
    }
}

struct Objective {
    p: f64,
    q: f64,
    inner_p: f64,
    side: Side,
    gamma: f64,
    dim: usize,
}

impl Objective {
    fn eval(&self, c: &Candidate) -> f64 {
        let f = c.polynomial(self.dim);
        if f.is_zero() {
            return f64::NEG_INFINITY;
        }
        let part = c.partition(self.dim);
        let blocks = part.len() as f64;
        decomposition_ratio(&f, &part, self.p, self.q, self.inner_p, self.side)
            .map_or(f64::NEG_INFINITY, |r| r / blocks.powf(self.gamma))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionEstimate {
    pub side: Side,
    pub p: f64,
    pub q: f64,
    pub inner_p: f64,
    pub gamma: f64,
    pub dim: usize,
    /// Largest observed `ratio / (#I)^gamma`.
    pub constant_lower: f64,
    /// Largest value before local ascent; nondecreasing in `trials`.
    pub initial_max: f64,
    /// Witness polynomial in the polynomial file format.
    pub witness_polynomial: String,
    pub witness_partition: IntervalPartition,
    pub trials: usize,
    pub evaluations: usize,
    pub exact_quadrature: bool,
    pub seed: u64,
    pub label: &'static str,
}

impl DecompositionEstimate {
    pub fn witness(&self) -> Result<(TrigPolynomial, IntervalPartition)> {
        Ok((TrigPolynomial::from_text(&self.witness_polynomial)?, self.witness_partition.clone()))
    }
}

/// One evaluated corpus member, for bookkeeping checks.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub polynomial: TrigPolynomial,
    pub partition: IntervalPartition,
    pub value: f64,
}

fn random_candidate<R: Rng>(rng: &mut R, cfg: &DecompConfig) -> Candidate {
    let len = rng.gen_range(1..=cfg.max_support);
    let lo = -(rng.gen_range(0..=len as i64 - 1));
    let signs = rng.gen::<bool>();
    let coeffs = (0..len * cfg.dim)
        .map(|_| {
            if signs {
                Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)
            } else {
                complex_gaussian(rng)
            }
        })
        .collect();
    let cuts = match cfg.partitions {
        PartitionMode::Singletons => vec![true; len - 1],
        PartitionMode::Contiguous => {
            let rate: f64 = rng.gen();
            (0..len - 1).map(|_| rng.gen::<f64>() < rate).collect()
        }
    };
    Candidate { lo, coeffs, cuts }
}

/// `+-1` patterns with a positive first coefficient, times every contiguous partition.
fn exhaustive_candidates(cfg: &DecompConfig) -> Vec<Candidate> {
    let mut out = Vec::new();
    for len in 1..=cfg.exhaustive_signs.min(cfg.max_support) {
        for pattern in 0u32..(1 << (len - 1)) {
            let coeffs: Vec<Complex64> = (0..len)
                .flat_map(|k| {
                    let s = if k > 0 && pattern >> (k - 1) & 1 == 1 { -1.0 } else { 1.0 };
                    std::iter::repeat_n(Complex64::new(s, 0.0), cfg.dim)
                })
                .collect();
            let partitions: Vec<u32> = match cfg.partitions {
                PartitionMode::Singletons => vec![(1u32 << (len - 1)) - 1],
                PartitionMode::Contiguous => (0..1u32 << (len - 1)).collect(),
            };
            for mask in partitions {
                out.push(Candidate {
                    lo: 0,
                    coeffs: coeffs.clone(),
                    cuts: (0..len - 1).map(|k| mask >> k & 1 == 1).collect(),
                });
            }
        }
    }
    out
}

/// Coefficient hill climbing interleaved with single cut toggles.
fn refine(c: &mut Candidate, value: f64, obj: &Objective, cfg: &DecompConfig, stream: u64) -> f64 {
    let mut rng = stream_rng(cfg.seed, stream);
    let mut best = value;
    const CHUNK: usize = 20;
    let mut left = cfg.ascent_steps;
    while left > 0 {
        let steps = left.min(CHUNK);
        left -= steps;
        let cuts = c.cuts.clone();
        let lo = c.lo;
        let v = hill_climb(
            &mut c.coeffs,
            |x| {
                obj.eval(&Candidate {
                    lo,
                    coeffs: x.to_vec(),
                    cuts: cuts.clone(),
                })
            },
            steps,
            &mut rng,
        );
        best = best.max(v);
        if cfg.partitions == PartitionMode::Contiguous {
            for k in 0..c.cuts.len() {
                c.cuts[k] = !c.cuts[k];
                let v = obj.eval(c);
                if v > best {
                    best = v;
                } else {
                    c.cuts[k] = !c.cuts[k];
                }
            }
        }
    }
    best
}

/// Seeded search for the largest `decomposition_ratio / (#I)^gamma`.
pub fn estimate_constant(p: f64, q: f64, inner_p: f64, side: Side, gamma: f64, cfg: &DecompConfig) -> Result<DecompositionEstimate> {
    estimate_inner(p, q, inner_p, side, gamma, cfg, false).map(|(e, _)| e)
}

/// As [`estimate_constant`], also returning every corpus member of the
/// exhaustive and random phases.
pub fn estimate_constant_traced(
    p: f64,
    q: f64,
    inner_p: f64,
    side: Side,
    gamma: f64,
    cfg: &DecompConfig,
) -> Result<(DecompositionEstimate, Vec<TraceEntry>)> {
    estimate_inner(p, q, inner_p, side, gamma, cfg, true)
}

fn estimate_inner(
    p: f64,
    q: f64,
    inner_p: f64,
    side: Side,
    gamma: f64,
    cfg: &DecompConfig,
    trace: bool,
) -> Result<(DecompositionEstimate, Vec<TraceEntry>)> {
    check_p(p)?;
    check_q(q)?;
    check_p(inner_p).map_err(|_| Error::invalid("inner_p", "not in [1, inf]"))?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::invalid("p", "must lie in (1, inf)"));
    }
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::invalid("gamma", "must be finite and nonnegative"));
    }
    cfg.validate()?;
    let obj = Objective {
        p,
        q,
        inner_p,
        side,
        gamma,
        dim: cfg.dim,
    };
    let mut pool: Vec<Candidate> = exhaustive_candidates(cfg);
    pool.extend(par::map_range(cfg.trials, |i| {
        random_candidate(&mut stream_rng(cfg.seed, i as u64), cfg)
    }));
    let mut values = par::map_slice(&pool, |c| obj.eval(c));
    let initial_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let trace_entries = if trace {
        pool.iter()
            .zip(&values)
            .map(|(c, &v)| TraceEntry {
                polynomial: c.polynomial(cfg.dim),
                partition: c.partition(cfg.dim),
                value: v,
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let top: Vec<usize> = order.into_iter().take(cfg.refine).collect();
    let refined = par::map_slice(&top, |&i| {
        let mut c = pool[i].clone();
        let v = refine(&mut c, values[i], &obj, cfg, (1 << 40) + i as u64);
        (c, v)
    });
    let evaluations = pool.len() + refined.len() * cfg.ascent_steps;
    for (c, v) in refined {
        // Re-evaluate so the stored value is exactly reproducible from the witness.
        let exact = obj.eval(&c);
        debug_assert!((exact - v).abs() <= 1e-12 * v.abs().max(1.0));
        pool.push(c);
        values.push(exact);
    }
    let k = par::argmax(&values).ok_or_else(|| Error::Degenerate("empty corpus".into()))?;
    let w = &pool[k];
    let f = w.polynomial(cfg.dim);
    let estimate = DecompositionEstimate {
        side,
        p,
        q,
        inner_p,
        gamma,
        dim: cfg.dim,
        constant_lower: values[k],
        initial_max,
        witness_polynomial: f.to_text(),
        witness_partition: w.partition(cfg.dim),
        trials: cfg.trials,
        evaluations,
        exact_quadrature: quadrature_exact(f.max_frequency(), p, inner_p, default_points(f.max_frequency(), p)),
        seed: cfg.seed,
        label: "empirical floor",
    };
    Ok((estimate, trace_entries))
}

/// `(#I)^{1/q - 1/r} (sum a_I^r)^{1/r} / (sum a_I^q)^{1/q}`, at least 1 by Hölder.
pub fn hoelder_margin(block_norms: &[f64], q: f64, r: f64) -> Result<f64> {
    check_q(q)?;
    check_p(r).map_err(|_| Error::invalid("r", "not in [1, inf]"))?;
    if r < q {
        return Err(Error::Domain(format!("r = {r} must be at least q = {q}")));
    }
    if block_norms.is_empty() || block_norms.iter().all(|&a| a == 0.0) {
        return Err(Error::ZeroPolynomial);
    }
    let count = block_norms.len() as f64;
    let exponent = 1.0 / q - if r.is_infinite() { 0.0 } else { 1.0 / r };
    let num = count.powf(exponent) * p_norm_unchecked(block_norms.iter().copied(), r);
    Ok(num / p_norm_unchecked(block_norms.iter().copied(), q))
}

pub fn hoelder_growth_check(
    f: &TrigPolynomial,
    part: &IntervalPartition,
    p: f64,
    q: f64,
    r: f64,
    inner_p: f64,
) -> Result<f64> {
    check_p(p)?;
    if !part.covers(f) {
        return Err(Error::Precondition("partition does not cover the support".into()));
    }
    let (_, blocks) = block_norms(f, part, p, inner_p, default_points(f.max_frequency(), p))?;
    hoelder_margin(&blocks, q, r)
}

/// `sum_n sum_j f^_j(n) conj(g^_j(n))`, equal to the integral of
/// `<f(t), g(t)>` over the torus (linear in `f`, conjugate linear in `g`).
pub fn pairing(f: &TrigPolynomial, g: &TrigPolynomial) -> Complex64 {
    f.terms()
        .filter_map(|(n, a)| g.coeff(n).map(|b| a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>()))
        .sum()
}

/// The same pairing by an `N`-point Riemann sum; exact for `N > 2M`.
pub fn pairing_quadrature(f: &TrigPolynomial, g: &TrigPolynomial, points: usize) -> Result<Complex64> {
    let a = crate::fourier::sample(f, points)?;
    let b = crate::fourier::sample(g, points)?;
    let s: Complex64 = a
        .iter()
        .zip(&b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u * v.conj()).sum::<Complex64>())
        .sum();
    Ok(s / points as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingMargin {
    pub margin: f64,
    pub pairing_abs: f64,
    pub f_side: f64,
    pub g_side: f64,
}

/// `(sum_I ||D_I f||_p^q)^{1/q} (sum_I ||D_I g||_{p'}^{q'})^{1/q'} / |<f, g>|`,
/// with `g` measured in `L^{p'}(l^{inner_p'})`. `None` when the pairing
/// vanishes (relative to the coefficient norms).
pub fn pairing_duality_check(
    f: &TrigPolynomial,
    g: &TrigPolynomial,
    part: &IntervalPartition,
    p: f64,
    q: f64,
    inner_p: f64,
) -> Result<Option<PairingMargin>> {
    check_p(p)?;
    check_q(q)?;
    if f.dim() != g.dim() {
        return Err(Error::invalid("dim", "f and g differ in dimension"));
    }
    if !part.covers(f) || !part.covers(g) {
        return Err(Error::Precondition("partition does not cover both supports".into()));
    }
    let s = pairing(f, g);
    if !(s.norm() > 1e-14 * (f.coefficient_energy() * g.coefficient_energy()).sqrt()) {
        return Ok(None);
    }
    let (pp, qq, rr) = (conjugate_exponent(p), conjugate_exponent(q), conjugate_exponent(inner_p));
    let m = f.max_frequency().max(g.max_frequency());
    let points = default_points(m, p).max(default_points(m, pp));
    let (_, fb) = block_norms(f, part, p, inner_p, points)?;
    let (_, gb) = block_norms(g, part, pp, rr, points)?;
    let f_side = p_norm_unchecked(fb.into_iter(), q);
    let g_side = p_norm_unchecked(gb.into_iter(), qq);
    Ok(Some(PairingMargin {
        margin: f_side * g_side / s.norm(),
        pairing_abs: s.norm(),
        f_side,
        g_side,
    }))
}

/// `U_ref (sum_n |x_n|^q)^{1/q} / ||sum_n e_n x_n||_{L^p}` with `x_n` at
/// frequency `n = 0, 1, ...`.
pub fn fourier_type_check(xs: &[Vec<Complex64>], p: f64, q: f64, inner_p: f64, u_ref: f64) -> Result<f64> {
    check_p(p)?;
    check_q(q)?;
    let dim = xs.first().map_or(0, Vec::len);
    let f = TrigPolynomial::from_terms(dim, xs.iter().enumerate().map(|(n, x)| (n as i64, x.clone())))?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lhs = crate::fourier::lp_torus_norm(&f, p, inner_p)?.value;
    let rhs = p_norm_unchecked(xs.iter().map(|x| p_norm_unchecked(x.iter().map(|z| z.norm()), inner_p)), q);
    Ok(u_ref * rhs / lhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RademacherKind {
    Type,
    Cotype,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RademacherEstimate {
    pub kind: RademacherKind,
    pub exponent: f64,
    /// Monte Carlo value of `(E |sum eps_k x_k|^2)^{1/2}`.
    pub l2_average: f64,
    /// `(sum |x_k|^exponent)^{1/exponent}`
    pub lp_sum: f64,
    /// `l2_average / lp_sum` for type, the reciprocal for cotype.
    pub sample_constant: f64,
    /// Delta-method standard error of `sample_constant`.
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

/// `count` seeded complex Gaussian vectors in `C^dim`, vector `i` from stream `i`.
pub fn gaussian_vectors(count: usize, dim: usize, seed: u64) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            (0..dim).map(|_| complex_gaussian(&mut rng)).collect()
        })
        .collect()
}

/// Minimum Monte Carlo sample count.
pub const MIN_RADEMACHER_SAMPLES: usize = 1000;
const CHUNK: usize = 1024;

/// Complex Rademacher averages with uniform phases; chunk `c` of the
/// samples draws from stream `c`, so results do not depend on threading.
pub fn rademacher_constants(
    xs: &[Vec<Complex64>],
    exponent: f64,
    kind: RademacherKind,
    inner_p: f64,
    samples: usize,
    seed: u64,
) -> Result<RademacherEstimate> {
    check_p(exponent).map_err(|_| Error::invalid("exponent", "not in [1, inf]"))?;
    check_p(inner_p).map_err(|_| Error::invalid("inner_p", "not in [1, inf]"))?;
    if samples < MIN_RADEMACHER_SAMPLES {
        return Err(Error::invalid("samples", format!("need at least {MIN_RADEMACHER_SAMPLES}")));
    }
    let dim = xs.first().map_or(0, Vec::len);
    if dim == 0 || xs.iter().any(|x| x.len() != dim) {
        return Err(Error::invalid("xs", "vectors must be nonempty and of equal length"));
    }
    let norms: Vec<f64> = xs.iter().map(|x| p_norm_unchecked(x.iter().map(|z| z.norm()), inner_p)).collect();
    let lp_sum = p_norm_unchecked(norms.iter().copied(), exponent);
    if lp_sum == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial = par::map_range(chunks, |c| {
        let mut rng = stream_rng(seed, c as u64);
        let count = CHUNK.min(samples - c * CHUNK);
        let mut acc = vec![Complex64::new(0.0, 0.0); dim];
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..count {
            acc.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for x in xs {
                let eps = unit_phase(&mut rng);
                for (a, b) in acc.iter_mut().zip(x) {
                    *a += eps * b;
                }
            }
            let v = p_norm_unchecked(acc.iter().map(|z| z.norm()), inner_p).powi(2);
            s1 += v;
            s2 += v * v;
        }
        (s1, s2)
    });
    let (s1, s2) = partial.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = s1 / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    let l2 = mean.sqrt();
    // d sqrt(m) = dm / (2 sqrt(m))
    let se_l2 = if l2 > 0.0 { (var / n).sqrt() / (2.0 * l2) } else { 0.0 };
    let (sample_constant, std_error) = match kind {
        RademacherKind::Type => (l2 / lp_sum, se_l2 / lp_sum),
        RademacherKind::Cotype => {
            if l2 == 0.0 {
                (f64::INFINITY, f64::INFINITY)
            } else {
                (lp_sum / l2, lp_sum * se_l2 / (l2 * l2))
            }
        }
    };
    Ok(RademacherEstimate {
        kind,
        exponent,
        l2_average: l2,
        lp_sum,
        sample_constant,
        std_error,
        samples,
        seed,
    })
}

/// Partition in text form, one `lo hi` pair per line (`-inf`/`inf` for open ends).
pub fn partition_to_text(part: &IntervalPartition) -> String {
    let mut out = String::new();
    for Interval { lo, hi } in part.intervals() {
        let lo = lo.map_or("-inf".to_string(), |v| v.to_string());
        let hi = hi.map_or("inf".to_string(), |v| v.to_string());
        let _ = writeln!(out, "{lo} {hi}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ratio_examples() {
        let f = TrigPolynomial::scalar(&[(0, c(1.)), (1, c(1.))]);
        let whole = IntervalPartition::new(vec![Interval::new(-3, 3).unwrap()]).unwrap();
        for side in [Side::Upper, Side::Lower] {
            let r = decomposition_ratio(&f, &whole, 3.0, 1.5, 2.0, side).unwrap();
            assert!((r - 1.0).abs() < 1e-14);
        }
        let single = IntervalPartition::contiguous(0, 1, &[1]).unwrap();
        let r = decomposition_ratio(&f, &single, 2.0, 1.0, 2.0, Side::Upper).unwrap();
        assert!((r - 0.5f64.sqrt()).abs() < 1e-14);
        let r = decomposition_ratio(&f, &single, 2.0, 2.0, 2.0, Side::Lower).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        assert!(matches!(
            decomposition_ratio(&TrigPolynomial::zero(1), &single, 2.0, 2.0, 2.0, Side::Lower),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn hoelder_examples() {
        assert!((hoelder_margin(&[1.0, 0.0], 1.0, 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((hoelder_margin(&[0.3, 2.0, 1.0], 1.7, 1.7).unwrap() - 1.0).abs() < 1e-15);
        assert!((hoelder_margin(&[2.0; 5], 1.5, 64.0).unwrap() - 1.0).abs() < 1e-6);
        assert!(matches!(hoelder_margin(&[1.0], 2.0, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn pairing_examples() {
        let e0 = TrigPolynomial::scalar(&[(0, c(1.))]);
        let part = IntervalPartition::contiguous(-2, 2, &[0, 1]).unwrap();
        let m = pairing_duality_check(&e0, &e0, &part, 3.0, 1.5, 2.0).unwrap().unwrap();
        assert!((m.margin - 1.0).abs() < 1e-14);
        let e1 = TrigPolynomial::scalar(&[(1, c(1.))]);
        assert!(pairing_duality_check(&e0, &e1, &part, 3.0, 1.5, 2.0).unwrap().is_none());
    }

    #[test]
    fn pairing_matches_quadrature() {
        let mut rng = stream_rng(3, 0);
        let f = crate::fourier::random_polynomial(&mut rng, 2, -4, 4);
        let g = crate::fourier::random_polynomial(&mut rng, 2, -2, 6);
        let a = pairing(&f, &g);
        let b = pairing_quadrature(&f, &g, 13).unwrap();
        assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn fourier_type_examples() {
        let m = fourier_type_check(&[vec![c(3.), c(4.)]], 3.0, 1.5, 2.0, 1.2).unwrap();
        assert!((m - 1.2).abs() < 1e-14);
        let m = fourier_type_check(&[vec![c(1.)], vec![c(1.)]], 2.0, 1.0, 2.0, 1.0).unwrap();
        assert!((m - 2.0 / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rademacher_examples() {
        let one = rademacher_constants(&[vec![c(2.), c(-1.)]], 2.0, RademacherKind::Type, 2.0, 1000, 1).unwrap();
        assert!((one.sample_constant - 1.0).abs() < 1e-14);
        let xs: Vec<Vec<Complex64>> = [1.0, -2.0, 0.5, 3.0].iter().map(|&a| vec![c(a)]).collect();
        let r = rademacher_constants(&xs, 2.0, RademacherKind::Type, 2.0, 20_000, 9).unwrap();
        assert!((r.sample_constant - 1.0).abs() < 3.0 * r.std_error, "{r:?}");
        let basis = vec![vec![c(1.), c(0.)], vec![c(0.), c(1.)]];
        let r = rademacher_constants(&basis, 2.0, RademacherKind::Cotype, 1.0, 1000, 0).unwrap();
        assert!((r.sample_constant - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(rademacher_constants(&basis, 2.0, RademacherKind::Cotype, 1.0, 999, 0).is_err());
    }

    #[test]
    fn small_estimates() {
        let cfg = DecompConfig { trials: 200, max_support: 6, exhaustive_signs: 4, ..Default::default() };
        let e = estimate_constant(2.0, 2.0, 2.0, Side::Lower, 0.0, &cfg).unwrap();
        assert!((e.constant_lower - 1.0).abs() < 1e-9, "{e:?}");
        let cfg = DecompConfig { max_support: 2, ..cfg };
        let e = estimate_constant(2.0, 1.0, 2.0, Side::Upper, 0.0, &cfg).unwrap();
        assert!(e.constant_lower <= 1.0 + 1e-6);
        let (f, part) = e.witness().unwrap();
        let again = decomposition_ratio(&f, &part, 2.0, 1.0, 2.0, Side::Upper).unwrap();
        assert!((again - e.constant_lower).abs() < 1e-9);
    }
}
