//! Subcommand bodies. Each resolves its config, runs the computation,
//! writes `<out>/<command>.json` (plus data files) and returns whether
//! every asserted invariant held.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use kreisslab_core::decomp::{self, DecompConfig, PartitionMode, RademacherKind, Side};
use kreisslab_core::fourier::{self, MarcinkiewiczConfig as CoreMarc, RieszConfig};
use kreisslab_core::norms::{power_norm_sequence, AscentConfig};
use kreisslab_core::operators::{load_matrix, make_gallery_operator, standard_gallery, OperatorKind, OperatorSpec};
use kreisslab_core::positivity::{self, PositiveOperator};
use kreisslab_core::power::{self, GrowthModel};
use kreisslab_core::report::{write_file, write_metadata, Envelope};
use kreisslab_core::resolvent::{self, ReportHorizons};
use kreisslab_core::{verify, ComplexMatrix};

use crate::args::*;
use crate::config::FileConfig;
use crate::plot;
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Falsified,
}

pub struct Ctx {
    pub command: &'static str,
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub file: FileConfig,
}

/// One asserted invariant.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn at_least(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, pass: value >= bound }
    }

    fn at_most(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, pass: value <= bound }
    }
}

#[derive(Serialize)]
struct Checked<'a, R: Serialize> {
    #[serde(flatten)]
    result: &'a R,
    checks: &'a [Check],
}

impl Ctx {
    fn require_seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| {
            UsageError(format!("`{}` is randomized: --seed (or `seed` in the config file) is required", self.command)).into()
        })
    }

    /// The ascent behind operator norms is randomized unless `p` is 1, 2 or inf.
    fn seed_for_p(&self, p: f64) -> Result<u64> {
        if p == 1.0 || p == 2.0 || p.is_infinite() {
            Ok(self.seed.unwrap_or(0))
        } else {
            self.require_seed()
        }
    }

    fn path(&self, suffix: &str) -> PathBuf {
        self.out.join(format!("{}{suffix}", self.command))
    }

    fn write_text(&self, suffix: &str, contents: &str) -> Result<PathBuf> {
        let p = self.path(suffix);
        write_file(&p, contents)?;
        Ok(p)
    }

    /// Writes the report and, when a check failed, a witness file holding
    /// the failed checks and `witness`. Prints the summary line.
    fn finish<R: Serialize, W: Serialize>(
        &self,
        config: &Value,
        result: &R,
        checks: &[Check],
        witness: W,
        summary: &str,
    ) -> Result<Outcome> {
        let body = Checked { result, checks };
        let report = Envelope::new(self.command, config, self.seed, &body).to_json()?;
        let path = self.write_text(".json", &report)?;
        write_metadata(&self.out, self.command)?;
        let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
        if failed.is_empty() {
            println!("{}: {summary} [pass] -> {}", self.command, path.display());
            return Ok(Outcome::Pass);
        }
        let w = json!({ "failed_checks": failed, "witness": witness });
        let wtext = Envelope::new(self.command, config, self.seed, &w).to_json()?;
        let wpath = self.write_text(".witness.json", &wtext)?;
        println!(
            "{}: {summary} [FALSIFIED: {}] -> {}, witness {}",
            self.command,
            failed.iter().map(|c| c.name).collect::<Vec<_>>().join(", "),
            path.display(),
            wpath.display()
        );
        Ok(Outcome::Falsified)
    }
}

pub fn dispatch(ctx: &Ctx, command: Command) -> Result<Outcome> {
    match command {
        Command::Kreiss(a) => kreiss(ctx, &a),
        Command::StrongKreiss(a) => strong_kreiss(ctx, &a),
        Command::ExpCriterion(a) => exp_criterion(ctx, &a),
        Command::Cesaro(a) => cesaro(ctx, &a),
        Command::Growth(a) => growth(ctx, &a),
        Command::Bounds(a) => bounds(ctx, &a),
        Command::DecompScan(a) => decomp_scan(ctx, &a),
        Command::RieszNorm(a) => riesz_norm(ctx, &a),
        Command::Marcinkiewicz(a) => marcinkiewicz(ctx, &a),
        Command::TypeCotype(a) => type_cotype(ctx, &a),
        Command::Positivity(a) => positivity(ctx, &a),
        Command::VerifyAppendix(a) => verify_appendix(ctx, &a),
        Command::GalleryList => gallery_list(ctx),
        Command::Plot(a) => plot_cmd(ctx, &a),
    }
}

const UNIT_FLOOR: f64 = 1.0 - 1e-9;

fn operator(ctx: &Ctx, flags: &OperatorArgs) -> Result<(OperatorConfig, ComplexMatrix)> {
    let c: OperatorConfig = ctx.file.resolve("operator", flags)?;
    let op = c
        .op
        .ok_or_else(|| UsageError("no operator: pass --op or set `op` in [operator]".into()))?;
    let d = c.dim;
    let kind = match op {
        OpKindArg::Identity => OperatorKind::Identity,
        OpKindArg::Zero => OperatorKind::Zero,
        OpKindArg::Scalar => OperatorKind::Scalar { re: c.re, im: c.im },
        OpKindArg::Jordan => OperatorKind::Jordan { re: c.re, im: c.im, eps: c.eps },
        OpKindArg::Nilpotent => OperatorKind::Nilpotent { a: c.a },
        OpKindArg::WeightedShift => OperatorKind::WeightedShift {
            weights: c.weights.clone().unwrap_or_else(|| vec![1.0; d.saturating_sub(1)]),
        },
        OpKindArg::Rotation => OperatorKind::Rotation { theta: c.theta },
        OpKindArg::Averaging => OperatorKind::Averaging,
        OpKindArg::Custom => {
            let path = c
                .file
                .clone()
                .ok_or_else(|| UsageError("`custom` needs --file".into()))?;
            let m = load_matrix(&path)?;
            return Ok((c, m));
        }
    };
    let m = make_gallery_operator(&OperatorSpec::new(kind, d))?;
    Ok((c, m))
}

fn search(s: &SearchConfig, seed: u64) -> resolvent::SearchConfig {
    resolvent::SearchConfig {
        radial_count: s.radial_count,
        angular_count: s.angular_count,
        r_max: s.r_max,
        min_offset: s.min_offset,
        refinement_rounds: s.refinement_rounds,
        shrink: s.shrink,
        seed,
        p: s.p.0,
        restarts: s.restarts,
    }
}

fn ascent(restarts: usize, seed: u64) -> AscentConfig {
    AscentConfig {
        restarts,
        seed,
        ..AscentConfig::default()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "inf".to_string(), |x| format!("{x:.6}"))
}

fn kreiss(ctx: &Ctx, a: &KreissArgs) -> Result<Outcome> {
    let (oc, t) = operator(ctx, &a.operator)?;
    let sc: SearchConfig = ctx.file.resolve("search", &a.search)?;
    let kc: KreissConfig = ctx.file.resolve("kreiss", a)?;
    let cfg = search(&sc, ctx.seed_for_p(sc.p.0)?);
    let h = ReportHorizons {
        strong_n_max: kc.strong_n_max,
        xi_max: kc.xi_max,
        cesaro_n_max: kc.cesaro_n_max,
    };
    let r = resolvent::kreiss_report(&t, &cfg, &h)?;
    let mut checks = Vec::new();
    if let (Some(k), Some(ks)) = (r.k_lower, r.ks_lower) {
        checks.push(Check::at_least("k_lower >= 1", k, UNIT_FLOOR));
        checks.push(Check::at_least("ks_lower >= 1", ks, UNIT_FLOOR));
        checks.push(Check::at_least("exp_lower >= 1", r.exp_lower, UNIT_FLOOR));
        checks.push(Check::at_most("k_lower <= ks_lower", k - ks, 1e-9));
    }
    if let Some(c) = r.cesaro_ratio_max {
        checks.push(Check::at_most("partial-sum ratio <= 1", c, 1.0 + resolvent::CESARO_TOLERANCE));
    }
    let config = json!({ "operator": oc, "search": sc, "kreiss": kc });
    let summary = format!(
        "K_lower={} Ks_lower={} exp_lower={:.6} rho={:.6}",
        fmt_opt(r.k_lower),
        fmt_opt(r.ks_lower),
        r.exp_lower,
        r.spectral_radius
    );
    ctx.finish(&config, &r, &checks, &r.argmax, &summary)
}

fn estimate_checks(e: &resolvent::KreissEstimate) -> Vec<Check> {
    if e.diverged {
        Vec::new()
    } else {
        vec![Check::at_least("value >= 1", e.value, UNIT_FLOOR)]
    }
}

fn strong_kreiss(ctx: &Ctx, a: &StrongKreissArgs) -> Result<Outcome> {
    let (oc, t) = operator(ctx, &a.operator)?;
    let sc: SearchConfig = ctx.file.resolve("search", &a.search)?;
    let kc: StrongKreissConfig = ctx.file.resolve("strong-kreiss", a)?;
    let cfg = search(&sc, ctx.seed_for_p(sc.p.0)?);
    let e = resolvent::strong_kreiss_constant(&t, &cfg, kc.n_max)?;
    let config = json!({ "operator": oc, "search": sc, "strong-kreiss": kc });
    let summary = format!("Ks_lower={} at n={}", fmt_opt(Some(e.value).filter(|v| v.is_finite())), e.n);
    ctx.finish(&config, &e, &estimate_checks(&e), e.argmax, &summary)
}

fn exp_criterion(ctx: &Ctx, a: &ExpCriterionArgs) -> Result<Outcome> {
    let (oc, t) = operator(ctx, &a.operator)?;
    let sc: SearchConfig = ctx.file.resolve("search", &a.search)?;
    let kc: ExpCriterionConfig = ctx.file.resolve("exp-criterion", a)?;
    let cfg = search(&sc, ctx.seed_for_p(sc.p.0)?);
    let e = resolvent::exponential_criterion(&t, &cfg, kc.xi_max)?;
    let config = json!({ "operator": oc, "search": sc, "exp-criterion": kc });
    let summary = format!("exp_lower={:.6}", e.value);
    ctx.finish(&config, &e, &estimate_checks(&e), e.argmax, &summary)
}

fn ks_reference(t: &ComplexMatrix, cfg: &resolvent::SearchConfig, given: Option<f64>, n_max: usize) -> Result<f64> {
    if let Some(k) = given {
        return Ok(k);
    }
    let e = resolvent::strong_kreiss_constant(t, cfg, n_max)?;
    if e.diverged {
        return Err(UsageError("spectral radius exceeds 1: no finite strong Kreiss constant; pass --ks-ref".into()).into());
    }
    Ok(e.value)
}

fn cesaro(ctx: &Ctx, a: &CesaroArgs) -> Result<Outcome> {
    let (oc, t) = operator(ctx, &a.operator)?;
    let sc: SearchConfig = ctx.file.resolve("search", &a.search)?;
    let kc: CesaroConfig = ctx.file.resolve("cesaro", a)?;
    let cfg = search(&sc, ctx.seed_for_p(sc.p.0)?);
    let ks = ks_reference(&t, &cfg, kc.ks_ref, kc.strong_n_max)?;
    let r = resolvent::cesaro_partial_sum_bound(&t, &cfg, kc.n_max, ks)?;
    let checks = vec![Check::at_most("partial-sum ratio <= 1", r.ratio_max, 1.0 + r.tolerance)];
    let config = json!({ "operator": oc, "search": sc, "cesaro": kc });
    let summary = format!("ratio_max={:.6} at n={} (Ks_ref={:.6})", r.ratio_max, r.n, ks);
    ctx.finish(&config, &r, &checks, &r.witnesses, &summary)
}

#[derive(Serialize)]
struct GrowthResult {
    spectral_radius: f64,
    n_max: usize,
    fits: Vec<power::GrowthFit>,
    fit_error: Option<String>,
    profile_csv: String,
}

fn growth(ctx: &Ctx, a: &GrowthArgs) -> Result<Outcome> {
    let (oc, t) = operator(ctx, &a.operator)?;
    let gc: GrowthConfig = ctx.file.resolve("growth", a)?;
    let seed = ctx.seed_for_p(gc.p.0)?;
    let seq = power_norm_sequence(&t, gc.p.0, gc.n_max, &ascent(gc.restarts, seed))?;
    let csv = ctx.write_text(".csv", &power::profile_csv(&seq))?;
    let samples = power::fit_samples(&seq);
    let models: &[GrowthModel] = match gc.fit {
        FitArg::Poly => &[GrowthModel::Poly],
        FitArg::Polylog => &[GrowthModel::PolyLog],
        FitArg::Both => &[GrowthModel::Poly, GrowthModel::PolyLog],
    };
    let fitted: Result<Vec<_>, _> = models.iter().map(|&m| power::growth_fit(&samples, m)).collect();
    let (fits, fit_error) = match fitted {
        Ok(f) => (f, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let summary = match fits.first() {
        Some(f) => format!("alpha={:.4} beta={:.4} over n in {:?}", f.alpha, f.beta, f.n_range),
        None => format!("no fit ({})", fit_error.as_deref().unwrap_or("")),
    };
    let result = GrowthResult {
        spectral_radius: t.spectral_radius(),
        n_max: gc.n_max,
        fits,
        fit_error,
        profile_csv: file_name(&csv),
    };
    let config = json!({ "operator": oc, "growth": gc });
    ctx.finish(&config, &result, &[], (), &summary)
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

fn bounds(ctx: &Ctx, a: &BoundsArgs) -> Result<Outcome> {
    let (oc, t) = operator(ctx, &a.operator)?;
    let sc: SearchConfig = ctx.file.resolve("search", &a.search)?;
    let bc: BoundsConfig = ctx.file.resolve("bounds", a)?;
    let seed = ctx.seed_for_p(sc.p.0)?;
    let cfg = search(&sc, seed);
    let k_ref = match bc.k_ref {
        Some(k) => k,
        None => {
            let e = resolvent::kreiss_constant(&t, &cfg)?;
            if e.diverged {
                return Err(UsageError("spectral radius exceeds 1: no finite Kreiss constant; pass --k-ref".into()).into());
            }
            e.value
        }
    };
    let ks_ref = ks_reference(&t, &cfg, bc.ks_ref, bc.strong_n_max)?;
    let r = power::check_universal_bounds(&t, sc.p.0, k_ref, ks_ref, bc.n_max, &ascent(sc.restarts, seed))?;
    let csv = ctx.write_text(".csv", &r.to_csv())?;
    const FLOOR: f64 = 1.0 - 1e-6;
    let checks = vec![
        Check::at_least("margin K e (n+1)", r.min_margin_kreiss.margin, FLOOR),
        Check::at_least("margin Ks sqrt(2 pi (n+1))", r.min_margin_strong.margin, FLOOR),
        Check::at_least("margin K e d", r.min_margin_matrixthm.margin, FLOOR),
    ];
    let witness = json!({
        "kreiss": r.min_margin_kreiss,
        "strong": r.min_margin_strong,
        "matrixthm": r.min_margin_matrixthm,
    });
    let summary = format!(
        "min margins kreiss={:.4} strong={:.4} matrixthm={:.4} (csv {})",
        r.min_margin_kreiss.margin,
        r.min_margin_strong.margin,
        r.min_margin_matrixthm.margin,
        file_name(&csv)
    );
    let config = json!({ "operator": oc, "search": sc, "bounds": bc });
    ctx.finish(&config, &r, &checks, witness, &summary)
}

fn decomp_scan(ctx: &Ctx, a: &DecompScanArgs) -> Result<Outcome> {
    let c: DecompScanConfig = ctx.file.resolve("decomp-scan", a)?;
    let seed = ctx.require_seed()?;
    let cfg = DecompConfig {
        dim: c.dim,
        max_support: c.max_support,
        trials: c.trials,
        refine: c.refine,
        ascent_steps: c.ascent_steps,
        exhaustive_signs: c.exhaustive_signs,
        partitions: match c.partitions {
            PartitionArg::Contiguous => PartitionMode::Contiguous,
            PartitionArg::Singletons => PartitionMode::Singletons,
        },
        seed,
    };
    let side = match c.side {
        SideArg::Upper => Side::Upper,
        SideArg::Lower => Side::Lower,
    };
    let e = decomp::estimate_constant(c.p.0, c.q.0, c.inner_p.0, side, c.gamma, &cfg)?;
    ctx.write_text(".extremal.poly", &e.witness_polynomial)?;
    ctx.write_text(".extremal.partition", &decomp::partition_to_text(&e.witness_partition))?;
    let mut checks = Vec::new();
    if side == Side::Upper && c.q.0 == 1.0 && c.gamma == 0.0 {
        checks.push(Check::at_most("upper l^1 ratio <= 1", e.constant_lower, 1.0 + 1e-9));
    }
    if c.p.0 == 2.0 && c.q.0 == 2.0 && c.inner_p.0 == 2.0 && c.gamma == 0.0 {
        checks.push(Check::at_most("Parseval ratio == 1", (e.constant_lower - 1.0).abs(), 1e-9));
    }
    let summary = format!("constant_lower={:.6} ({})", e.constant_lower, e.label);
    let witness = json!({ "polynomial": e.witness_polynomial, "partition": e.witness_partition });
    ctx.finish(&json!({ "decomp-scan": c }), &e, &checks, witness, &summary)
}

fn riesz_norm(ctx: &Ctx, a: &RieszNormArgs) -> Result<Outcome> {
    let c: RieszNormConfig = ctx.file.resolve("riesz-norm", a)?;
    let seed = ctx.require_seed()?;
    let cfg = RieszConfig {
        max_support: c.max_support,
        trials: c.trials,
        refine: c.refine,
        ascent_steps: c.ascent_steps,
        seed,
    };
    let r = fourier::riesz_norm_lower_bound(c.p.0, c.dim, c.inner_p.0, &cfg)?;
    ctx.write_text(".extremal.poly", &r.witness)?;
    let mut checks = vec![Check::at_least("value >= 1", r.value, 1.0 - 1e-12)];
    if c.p.0 == 2.0 && c.inner_p.0 == 2.0 {
        checks.push(Check::at_most("p = 2 value <= 1", r.value, 1.0 + 1e-9));
    }
    let summary = format!("norm_lower={:.6}", r.value);
    ctx.finish(&json!({ "riesz-norm": c }), &r, &checks, &r.witness, &summary)
}

fn marcinkiewicz(ctx: &Ctx, a: &MarcinkiewiczArgs) -> Result<Outcome> {
    let c: MarcinkiewiczConfig = ctx.file.resolve("marcinkiewicz", a)?;
    let seed = ctx.require_seed()?;
    let cfg = CoreMarc {
        half_width: c.half_width,
        trials: c.trials,
        p: c.p.0,
        inner_p: c.inner_p.0,
        dim: c.dim,
        seed,
    };
    let r = fourier::marcinkiewicz_corpus(&cfg)?;
    let mut checks = Vec::new();
    if c.p.0 == 2.0 && c.inner_p.0 == 2.0 {
        checks.push(Check::at_most("p = 2 ratio <= 1", r.m_hat, 1.0 + 1e-9));
    }
    let summary = format!("m_hat={:.6} (empirical lower bound)", r.m_hat);
    ctx.finish(&json!({ "marcinkiewicz": c }), &r, &checks, r.argmax_trial, &summary)
}

#[derive(Serialize)]
struct TypeCotypeResult {
    rademacher: decomp::RademacherEstimate,
    fourier_type_ratio: f64,
}

fn type_cotype(ctx: &Ctx, a: &TypeCotypeArgs) -> Result<Outcome> {
    let c: TypeCotypeConfig = ctx.file.resolve("type-cotype", a)?;
    let seed = ctx.require_seed()?;
    if c.count == 0 || c.dim == 0 {
        return Err(UsageError("count and dim must be positive".into()).into());
    }
    let xs = decomp::gaussian_vectors(c.count, c.dim, seed);
    let kind = match c.kind {
        RademacherArg::Type => RademacherKind::Type,
        RademacherArg::Cotype => RademacherKind::Cotype,
    };
    let rad = decomp::rademacher_constants(&xs, c.exponent.0, kind, c.inner_p.0, c.samples, seed)?;
    let ft = decomp::fourier_type_check(&xs, c.fourier_p.0, c.fourier_q.0, c.inner_p.0, 1.0)?;
    let mut checks = Vec::new();
    if c.fourier_p.0 == 2.0 && c.fourier_q.0 == 2.0 && c.inner_p.0 == 2.0 {
        checks.push(Check::at_most("Parseval Fourier-type ratio == 1", (ft - 1.0).abs(), 1e-9));
    }
    let summary = format!(
        "{:?} constant={:.4} +- {:.4}, fourier ratio={:.6}",
        c.kind, rad.sample_constant, rad.std_error, ft
    );
    let result = TypeCotypeResult {
        rademacher: rad,
        fourier_type_ratio: ft,
    };
    ctx.finish(&json!({ "type-cotype": c }), &result, &checks, (), &summary)
}

#[derive(Serialize)]
struct PositivityResult {
    ks_ref: f64,
    ks_ref_kind: &'static str,
    krivine: Vec<positivity::KrivineReport>,
    block_bound: Vec<positivity::BlockBoundReport>,
    recursion: Vec<positivity::RecursionRow>,
}

fn positivity(ctx: &Ctx, a: &PositivityArgs) -> Result<Outcome> {
    let (oc, t) = operator(ctx, &a.operator)?;
    let sc: SearchConfig = ctx.file.resolve("search", &a.search)?;
    let pc: PositivityConfig = ctx.file.resolve("positivity", a)?;
    let seed = ctx.require_seed()?;
    let pt = PositiveOperator::new(t.clone())?;
    let mut scfg = search(&sc, seed);
    scfg.p = pc.q;
    let (ks_ref, kind) = match pc.ks_ref {
        Some(k) => (k, "given"),
        None => (ks_reference(&t, &scfg, None, pc.strong_n_max)?, "search lower bound"),
    };
    let core_cfg = positivity::PositivityConfig {
        q: pc.q,
        corpus_size: pc.corpus_size,
        seed,
    };
    let krivine = positivity::krivine_corpus(&pt, &pc.ns, &core_cfg)?;
    let block_bound = pc
        .ns
        .iter()
        .map(|&n| positivity::block_bound_check(&pt, pc.q, ks_ref, n, pc.corpus_size, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let recursion = positivity::recursion_report(&pt, pc.q, ks_ref, pc.recursion_n_max, &ascent(sc.restarts, seed))?;
    let checks: Vec<Check> = krivine
        .iter()
        .map(|r| Check::at_least("krivine margin >= 1", r.margin, 1.0 - 1e-8))
        .collect();
    let worst = krivine
        .iter()
        .fold(f64::INFINITY, |m, r| m.min(r.margin));
    let failing: Vec<&positivity::KrivineReport> = krivine.iter().filter(|r| r.margin < 1.0 - 1e-8).collect();
    let summary = format!("min krivine margin={worst:.6} over n={:?} (Ks_ref={ks_ref:.6})", pc.ns);
    let result = PositivityResult {
        ks_ref,
        ks_ref_kind: kind,
        krivine: krivine.clone(),
        block_bound,
        recursion,
    };
    let config = json!({ "operator": oc, "search": sc, "positivity": pc });
    ctx.finish(&config, &result, &checks, failing, &summary)
}

fn verify_appendix(ctx: &Ctx, a: &VerifyAppendixArgs) -> Result<Outcome> {
    let c: VerifyAppendixConfig = ctx.file.resolve("verify-appendix", a)?;
    let rows = verify::sweep(c.n_min, c.n_max)?;
    let csv = ctx.write_text(".csv", &verify::sweep_csv(&rows))?;
    let s = verify::summarize(&rows);
    let checks = vec![
        Check::at_most("sup a <= 32", s.max_sup_a, verify::SUP_BOUND + verify::A2_SLACK),
        Check::at_most("V1 a <= 978", s.max_v1_a, verify::V1_BOUND + verify::A2_SLACK),
        Check::at_least("Poisson term slack >= 0", s.min_a1_slack, -verify::A1_SLACK),
    ];
    let failing: Vec<&verify::SweepRow> = rows.iter().filter(|r| !(r.lem_a1_pass && r.lem_a2_pass)).collect();
    let summary = format!(
        "n in [{}, {}]: max sup a={:.6} (n={}), max V1={:.6} (n={}), min slack={:.3e} (n={}), review={} (csv {})",
        c.n_min,
        c.n_max,
        s.max_sup_a,
        s.n_at_max_sup_a,
        s.max_v1_a,
        s.n_at_max_v1_a,
        s.min_a1_slack,
        s.n_at_min_a1_slack,
        s.review.len(),
        file_name(&csv)
    );
    ctx.finish(&json!({ "verify-appendix": c }), &s, &checks, failing, &summary)
}

#[derive(Serialize)]
struct GalleryEntry {
    name: &'static str,
    spec: OperatorSpec,
    properties: kreisslab_core::operators::GalleryProperties,
    spectral_radius: f64,
}

fn gallery_list(ctx: &Ctx) -> Result<Outcome> {
    let mut entries = Vec::new();
    for (name, spec) in standard_gallery() {
        let m = make_gallery_operator(&spec).with_context(|| format!("gallery entry {name}"))?;
        entries.push(GalleryEntry {
            name,
            properties: spec.properties(),
            spectral_radius: m.spectral_radius(),
            spec,
        });
    }
    for e in &entries {
        println!(
            "{:<18} dim={} rho={:.4} power_bounded={} positive={}  {}",
            e.name,
            e.spec.dim,
            e.spectral_radius,
            e.properties.power_bounded.map_or("unknown".to_string(), |b| b.to_string()),
            e.properties.positive,
            e.properties.notes
        );
    }
    let summary = format!("{} operators", entries.len());
    ctx.finish(&json!({}), &json!({ "operators": entries }), &[], (), &summary)
}

fn plot_cmd(ctx: &Ctx, a: &PlotArgs) -> Result<Outcome> {
    let c: PlotConfig = ctx.file.resolve("plot", a)?;
    let input = c
        .input
        .clone()
        .ok_or_else(|| UsageError("plot needs --input".into()))?;
    let output = c.output.clone().unwrap_or_else(|| input.with_extension("svg"));
    let title = c.title.clone().unwrap_or_else(|| file_name(&input));
    let text = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
    let svg = plot::render_csv(&text, &title)?;
    write_file(&output, &svg)?;
    println!("plot: {} -> {}", input.display(), output.display());
    Ok(Outcome::Pass)
}
