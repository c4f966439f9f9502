//! Power growth profiles and regression against `C n^alpha (log(n+2))^beta`.

use std::f64::consts::{E, TAU};
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{power_norm_sequence, AscentConfig, PowerNorm};
use crate::operators::{fmt_f64, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthModel {
    /// `log v = log C + alpha log n`
    Poly,
    /// `log v = log C + alpha log n + beta log log(n + 2)`
    PolyLog,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub alpha: f64,
    /// Zero for [`GrowthModel::Poly`].
    pub beta: f64,
    pub log_c: f64,
    /// RMS of the log residuals over the fitted window.
    pub residual: f64,
    /// First and last `n` of the fitted window.
    pub n_range: [u64; 2],
    pub samples: usize,
}

impl GrowthFit {
    pub fn predict(&self, n: f64) -> f64 {
        (self.log_c + self.alpha * n.ln() + self.beta * (n + 2.0).ln().ln()).exp()
    }
}

/// Minimum number of input samples.
pub const MIN_SAMPLES: usize = 8;

/// Least-squares fit of the growth model on the upper half of the samples
/// in logarithmic scale, i.e. those with `n >= sqrt(n_first * n_last)`.
///
/// Samples must have `n >= 1`, strictly increasing `n` and `v > 0`.
pub fn growth_fit(samples: &[(u64, f64)], model: GrowthModel) -> Result<GrowthFit> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::invalid(
            "samples",
            format!("need at least {MIN_SAMPLES}, got {}", samples.len()),
        ));
    }
    for (i, &(n, v)) in samples.iter().enumerate() {
        if n == 0 {
            return Err(Error::invalid("samples", "n must be at least 1"));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid("samples", format!("value at n = {n} must be finite and positive")));
        }
        if i > 0 && samples[i - 1].0 >= n {
            return Err(Error::invalid("samples", format!("n must increase strictly (at n = {n})")));
        }
    }
    let (first, last) = (samples[0].0 as f64, samples[samples.len() - 1].0 as f64);
    let cut = (first * last).sqrt();
    let window: Vec<(u64, f64)> = samples.iter().copied().filter(|&(n, _)| n as f64 >= cut).collect();

    let cols = match model {
        GrowthModel::Poly => 2,
        GrowthModel::PolyLog => 3,
    };
    if window.len() < cols {
        return Err(Error::Degenerate(format!(
            "{} samples in the fit window, need {cols}",
            window.len()
        )));
    }
    let a = DMatrix::from_fn(window.len(), cols, |i, j| {
        let n = window[i].0 as f64;
        match j {
            0 => 1.0,
            1 => n.ln(),
            _ => (n + 2.0).ln().ln(),
        }
    });
    let y = DVector::from_iterator(window.len(), window.iter().map(|&(_, v)| v.ln()));

    // Column scaling keeps the rank test independent of units.
    let scales: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let mut a_scaled = a.clone();
    for (j, s) in scales.iter().enumerate() {
        a_scaled.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = a_scaled.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-10 * smax) {
        return Err(Error::Degenerate(format!(
            "design matrix is rank deficient (condition {:e})",
            smax / smin
        )));
    }
    let coef = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    let coef: Vec<f64> = (0..cols).map(|j| coef[j] / scales[j]).collect();
    let fitted = &a * DVector::from_column_slice(&coef);
    let residual = ((&y - fitted).norm_squared() / window.len() as f64).sqrt();
    Ok(GrowthFit {
        model,
        alpha: coef[1],
        beta: if cols == 3 { coef[2] } else { 0.0 },
        log_c: coef[0],
        residual,
        n_range: [window[0].0, window[window.len() - 1].0],
        samples: window.len(),
    })
}

/// Both fits on the same samples, poly first.
pub fn growth_fit_both(samples: &[(u64, f64)]) -> Result<[GrowthFit; 2]> {
    Ok([
        growth_fit(samples, GrowthModel::Poly)?,
        growth_fit(samples, GrowthModel::PolyLog)?,
    ])
}

/// `(n, ||T^n||_p upper)` pairs with positive norm, for fitting.
pub fn fit_samples(seq: &[PowerNorm]) -> Vec<(u64, f64)> {
    seq.iter()
        .filter(|e| e.upper() > 0.0 && e.upper().is_finite())
        .map(|e| (e.n as u64, e.upper()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub n: u64,
    pub norm_lower: f64,
    pub norm_upper: f64,
    /// `K e (n + 1)`
    pub ceiling_kreiss: f64,
    /// `K_s sqrt(2 pi (n + 1))`
    pub ceiling_strong: f64,
    /// `K e d`
    pub ceiling_matrixthm: f64,
    pub margin_kreiss: f64,
    pub margin_strong: f64,
    pub margin_matrixthm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinMargin {
    pub margin: f64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub p: Option<f64>,
    pub dim: usize,
    pub k_ref: f64,
    pub ks_ref: f64,
    /// Always `"lower-bound substitution"`: the reference constants are
    /// search lower bounds, so a margin below 1 is a numeric finding about
    /// the substituted constants rather than a violated inequality.
    pub reference_kind: &'static str,
    pub min_margin_kreiss: MinMargin,
    pub min_margin_strong: MinMargin,
    pub min_margin_matrixthm: MinMargin,
    /// `max_n ||T^n||_lower / (e (n + 1))`, a valid lower bound for `K`.
    pub kreiss_floor_from_powers: f64,
    /// `max(k_ref, kreiss_floor_from_powers)`.
    pub k_combined: f64,
    pub rows: Vec<BoundsRow>,
}

impl BoundsReport {
    pub fn all_margins_at_least_one(&self) -> bool {
        [self.min_margin_kreiss, self.min_margin_strong, self.min_margin_matrixthm]
            .iter()
            .all(|m| m.margin >= 1.0)
    }

    /// One line per `n`; see `docs/formats.md`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "n,norm_lower,norm_upper,ceiling_kreiss,ceiling_strong,ceiling_matrixthm,margin_kreiss,margin_strong,margin_matrixthm\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.n,
                fmt_f64(r.norm_lower),
                fmt_f64(r.norm_upper),
                fmt_f64(r.ceiling_kreiss),
                fmt_f64(r.ceiling_strong),
                fmt_f64(r.ceiling_matrixthm),
                fmt_f64(r.margin_kreiss),
                fmt_f64(r.margin_strong),
                fmt_f64(r.margin_matrixthm),
            );
        }
        out
    }
}

/// Compares `||T^n||_p` (upper side of the bracket) with the three
/// ceilings for `n = 1..=n_max`. Margins are `ceiling / norm`, `+inf` when
/// the power vanishes.
pub fn check_universal_bounds(
    t: &ComplexMatrix,
    p: f64,
    k_ref: f64,
    ks_ref: f64,
    n_max: usize,
    cfg: &AscentConfig,
) -> Result<BoundsReport> {
    if !(k_ref > 0.0 && k_ref.is_finite()) {
        return Err(Error::invalid("k_ref", "must be finite and positive"));
    }
    if !(ks_ref > 0.0 && ks_ref.is_finite()) {
        return Err(Error::invalid("ks_ref", "must be finite and positive"));
    }
    let seq = power_norm_sequence(t, p, n_max, cfg)?;
    let d = t.dim() as f64;
    let margin = |c: f64, v: f64| if v > 0.0 { c / v } else { f64::INFINITY };
    let rows: Vec<BoundsRow> = seq
        .iter()
        .map(|e| {
            let n1 = (e.n + 1) as f64;
            let up = e.upper();
            let ck = k_ref * E * n1;
            let cs = ks_ref * (TAU * n1).sqrt();
            let cm = k_ref * E * d;
            BoundsRow {
                n: e.n as u64,
                norm_lower: e.lower(),
                norm_upper: up,
                ceiling_kreiss: ck,
                ceiling_strong: cs,
                ceiling_matrixthm: cm,
                margin_kreiss: margin(ck, up),
                margin_strong: margin(cs, up),
                margin_matrixthm: margin(cm, up),
            }
        })
        .collect();
    let min_of = |f: fn(&BoundsRow) -> f64| {
        rows.iter().fold(
            MinMargin {
                margin: f64::INFINITY,
                n: 0,
            },
            |acc, r| if f(r) < acc.margin { MinMargin { margin: f(r), n: r.n } } else { acc },
        )
    };
    let floor = rows
        .iter()
        .map(|r| r.norm_lower / (E * (r.n + 1) as f64))
        .fold(0.0, f64::max);
    Ok(BoundsReport {
        p: p.is_finite().then_some(p),
        dim: t.dim(),
        k_ref,
        ks_ref,
        reference_kind: "lower-bound substitution",
        min_margin_kreiss: min_of(|r| r.margin_kreiss),
        min_margin_strong: min_of(|r| r.margin_strong),
        min_margin_matrixthm: min_of(|r| r.margin_matrixthm),
        kreiss_floor_from_powers: floor,
        k_combined: k_ref.max(floor),
        rows,
    })
}

/// `(n, ||T^n||_p)` profile as CSV with the bracket and the scale ledger.
pub fn profile_csv(seq: &[PowerNorm]) -> String {
    let mut out = String::from("n,norm_lower,norm_upper,log_lower,log_upper\n");
    for e in seq {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.n,
            fmt_f64(e.lower()),
            fmt_f64(e.upper()),
            fmt_f64(e.log_lower()),
            fmt_f64(e.log_upper())
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn exact_linear_recovery() {
        let s: Vec<(u64, f64)> = (1..=512).map(|n| (n, n as f64)).collect();
        let f = growth_fit(&s, GrowthModel::Poly).unwrap();
        assert!((f.alpha - 1.0).abs() < 1e-9 && f.residual <= 1e-9, "{f:?}");
        assert!(f.log_c.abs() < 1e-9);
    }

    #[test]
    fn strong_ceiling_rate() {
        let s: Vec<(u64, f64)> = (64..=4096).map(|n| (n, (TAU * (n + 1) as f64).sqrt())).collect();
        let f = growth_fit(&s, GrowthModel::Poly).unwrap();
        assert!((f.alpha - 0.5).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn jordan_rate() {
        let j = ComplexMatrix::from_real_rows(2, &[1., 1., 0., 1.]).unwrap();
        let seq = power_norm_sequence(&j, f64::INFINITY, 4096, &AscentConfig::default()).unwrap();
        let f = growth_fit(&fit_samples(&seq), GrowthModel::Poly).unwrap();
        assert!((f.alpha - 1.0).abs() < 0.02, "{f:?}");
    }

    #[test]
    fn polylog_exact() {
        let s: Vec<(u64, f64)> = (1..=4096)
            .map(|n| (n, 3.0 * (n as f64).powf(0.25) * ((n + 2) as f64).ln().powi(2)))
            .collect();
        let f = growth_fit(&s, GrowthModel::PolyLog).unwrap();
        assert!((f.alpha - 0.25).abs() < 1e-8 && (f.beta - 2.0).abs() < 1e-7, "{f:?}");
        assert!((f.log_c - 3f64.ln()).abs() < 1e-7);
        assert!((f.predict(100.0) - s[99].1).abs() < 1e-8 * s[99].1);
    }

    #[test]
    fn fit_preconditions() {
        let short: Vec<(u64, f64)> = (1..=7).map(|n| (n, 1.0)).collect();
        assert!(matches!(growth_fit(&short, GrowthModel::Poly), Err(Error::InvalidParameter { .. })));
        let mut s: Vec<(u64, f64)> = (1..=16).map(|n| (n, 1.0)).collect();
        s[3].0 = 3;
        assert!(growth_fit(&s, GrowthModel::Poly).is_err());
        let s: Vec<(u64, f64)> = (1..=16).map(|n| (n, if n == 5 { 0.0 } else { 1.0 })).collect();
        assert!(growth_fit(&s, GrowthModel::Poly).is_err());
    }

    #[test]
    fn identity_bounds() {
        let r = check_universal_bounds(&ComplexMatrix::identity(3), 2.0, 1.0, 1.0, 64, &AscentConfig::default()).unwrap();
        assert!(r.all_margins_at_least_one());
        assert!((r.min_margin_matrixthm.margin - 3.0 * E).abs() < 1e-12);
        assert_eq!(r.rows.len(), 64);
        assert!(r.to_csv().lines().count() == 65);
    }

    #[test]
    fn jordan_exceeds_matrix_ceiling() {
        let j = ComplexMatrix::from_real_rows(2, &[1., 1., 0., 1.]).unwrap();
        let r = check_universal_bounds(&j, f64::INFINITY, 1.0, 1.0, 32, &AscentConfig::default()).unwrap();
        assert!(r.min_margin_matrixthm.margin < 1.0);
        assert_eq!(r.min_margin_matrixthm.n, 32);
        // (n + 1) / (e (n + 1)) = 1 / e at every n.
        assert!((r.kreiss_floor_from_powers - 1.0 / E).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_isometric() {
        let z = Complex64::from_polar(1.0, TAU * 0.3);
        let t = ComplexMatrix::from_rows(1, &[z]).unwrap();
        let r = check_universal_bounds(&t, 2.0, 1.0, 1.0, 256, &AscentConfig::default()).unwrap();
        assert!(r.all_margins_at_least_one());
    }
}
