//! Command-line flags and their config-file counterparts.
//!
//! Every flag struct (`*Args`, all fields optional) has a resolved twin
//! (`*Config`, defaults filled in) with the same field names. The config
//! file supplies a table per twin; flags override file values.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Parser)]
#[command(name = "kreisslab", version, about = "Kreiss-type resolvent conditions and power growth of matrices")]
pub struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory for reports [default: out].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 means one per logical core.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Seed of every random stream. Mandatory for randomized subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All four resolvent functionals of one operator.
    Kreiss(KreissArgs),
    /// Lower bound of the strong Kreiss constant.
    StrongKreiss(StrongKreissArgs),
    /// Lower bound of sup e^{-|xi|} ||exp(xi T)||.
    ExpCriterion(ExpCriterionArgs),
    /// Partial sums on the unit circle against 20 Ks (n+1).
    Cesaro(CesaroArgs),
    /// Profile ||T^n|| and fit C n^alpha (log(n+2))^beta.
    Growth(GrowthArgs),
    /// Compare ||T^n|| with the three universal ceilings.
    Bounds(BoundsArgs),
    /// Empirical floor of an l^q(L^p) decomposition constant.
    DecompScan(DecompScanArgs),
    /// Lower bound for the Riesz projection norm on L^p(T; C^d).
    RieszNorm(RieszNormArgs),
    /// Sample the Marcinkiewicz multiplier ratio.
    Marcinkiewicz(MarcinkiewiczArgs),
    /// Monte Carlo type/cotype constants and the Fourier-type ratio.
    TypeCotype(TypeCotypeArgs),
    /// Krivine and block inequalities for a nonnegative operator.
    Positivity(PositivityArgs),
    /// Sweep the Poisson-weight estimates in double-double arithmetic.
    VerifyAppendix(VerifyAppendixArgs),
    /// List the built-in operator gallery.
    GalleryList,
    /// Render a bounds or growth CSV as an SVG line chart.
    Plot(PlotArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Kreiss(_) => "kreiss",
            Command::StrongKreiss(_) => "strong-kreiss",
            Command::ExpCriterion(_) => "exp-criterion",
            Command::Cesaro(_) => "cesaro",
            Command::Growth(_) => "growth",
            Command::Bounds(_) => "bounds",
            Command::DecompScan(_) => "decomp-scan",
            Command::RieszNorm(_) => "riesz-norm",
            Command::Marcinkiewicz(_) => "marcinkiewicz",
            Command::TypeCotype(_) => "type-cotype",
            Command::Positivity(_) => "positivity",
            Command::VerifyAppendix(_) => "verify-appendix",
            Command::GalleryList => "gallery-list",
            Command::Plot(_) => "plot",
        }
    }
}

/// A norm index: a number in `[1, inf)` or `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PValue(pub f64);

impl FromStr for PValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(PValue(f64::INFINITY));
        }
        t.parse::<f64>()
            .map(PValue)
            .map_err(|_| format!("expected a number or `inf`, got `{s}`"))
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for PValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

impl<'de> Deserialize<'de> for PValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(PValue(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKindArg {
    Identity,
    Zero,
    Scalar,
    Jordan,
    Nilpotent,
    WeightedShift,
    Rotation,
    Averaging,
    Custom,
}

/// Operator selection, table `[operator]`.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct OperatorArgs {
    /// Gallery family, or `custom` with --file.
    #[arg(long, value_enum)]
    pub op: Option<OpKindArg>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Real part of the scalar or Jordan eigenvalue.
    #[arg(long, allow_hyphen_values = true)]
    pub re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub im: Option<f64>,
    /// Jordan superdiagonal.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// Nilpotent superdiagonal.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Rotation angle in turns.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Weighted shift weights, comma separated (dim - 1 values).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Matrix file for `custom`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OperatorConfig {
    pub op: Option<OpKindArg>,
    pub dim: usize,
    pub re: f64,
    pub im: f64,
    pub eps: f64,
    pub a: f64,
    pub theta: f64,
    pub weights: Option<Vec<f64>>,
    pub file: Option<PathBuf>,
}

impl Default for OperatorConfig {
    fn default() -> Self {
        Self {
            op: None,
            dim: 2,
            re: 1.0,
            im: 0.0,
            eps: 1.0,
            a: 1.0,
            theta: 0.3,
            weights: None,
            file: None,
        }
    }
}

/// Resolvent search grid, table `[search]`.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct SearchArgs {
    /// Norm index: a number >= 1 or `inf`.
    #[arg(long)]
    pub p: Option<PValue>,
    #[arg(long)]
    pub radial_count: Option<usize>,
    #[arg(long)]
    pub angular_count: Option<usize>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub min_offset: Option<f64>,
    #[arg(long)]
    pub refinement_rounds: Option<usize>,
    #[arg(long)]
    pub shrink: Option<f64>,
    /// Restarts of the norm ascent when p is not 1, 2 or inf.
    #[arg(long)]
    pub restarts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    pub p: PValue,
    pub radial_count: usize,
    pub angular_count: usize,
    pub r_max: f64,
    pub min_offset: f64,
    pub refinement_rounds: usize,
    pub shrink: f64,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let d = kreisslab_core::resolvent::SearchConfig::default();
        Self {
            p: PValue(d.p),
            radial_count: d.radial_count,
            angular_count: d.angular_count,
            r_max: d.r_max,
            min_offset: d.min_offset,
            refinement_rounds: d.refinement_rounds,
            shrink: d.shrink,
            restarts: d.restarts,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KreissArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub search: SearchArgs,
    #[arg(long)]
    pub strong_n_max: Option<usize>,
    #[arg(long)]
    pub xi_max: Option<f64>,
    #[arg(long)]
    pub cesaro_n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KreissConfig {
    pub strong_n_max: usize,
    pub xi_max: f64,
    pub cesaro_n_max: usize,
}

impl Default for KreissConfig {
    fn default() -> Self {
        let h = kreisslab_core::resolvent::ReportHorizons::default();
        Self {
            strong_n_max: h.strong_n_max,
            xi_max: h.xi_max,
            cesaro_n_max: h.cesaro_n_max,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StrongKreissArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub search: SearchArgs,
    /// Largest resolvent power.
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StrongKreissConfig {
    pub n_max: usize,
}

impl Default for StrongKreissConfig {
    fn default() -> Self {
        Self { n_max: 16 }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpCriterionArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub search: SearchArgs,
    #[arg(long)]
    pub xi_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExpCriterionConfig {
    pub xi_max: f64,
}

impl Default for ExpCriterionConfig {
    fn default() -> Self {
        Self { xi_max: 20.0 }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CesaroArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub search: SearchArgs,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Reference strong Kreiss constant; searched for when absent.
    #[arg(long)]
    pub ks_ref: Option<f64>,
    /// Resolvent powers used when searching for the reference constant.
    #[arg(long)]
    pub strong_n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CesaroConfig {
    pub n_max: usize,
    pub ks_ref: Option<f64>,
    pub strong_n_max: usize,
}

impl Default for CesaroConfig {
    fn default() -> Self {
        Self {
            n_max: 1000,
            ks_ref: None,
            strong_n_max: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitArg {
    Poly,
    Polylog,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GrowthArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub operator: OperatorArgs,
    #[arg(long)]
    pub p: Option<PValue>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, value_enum)]
    pub fit: Option<FitArg>,
    #[arg(long)]
    pub restarts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GrowthConfig {
    pub p: PValue,
    pub n_max: usize,
    pub fit: FitArg,
    pub restarts: usize,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        Self {
            p: PValue(2.0),
            n_max: 1024,
            fit: FitArg::Both,
            restarts: 32,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub search: SearchArgs,
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Reference Kreiss constant; searched for when absent.
    #[arg(long)]
    pub k_ref: Option<f64>,
    /// Reference strong Kreiss constant; searched for when absent.
    #[arg(long)]
    pub ks_ref: Option<f64>,
    #[arg(long)]
    pub strong_n_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsConfig {
    pub n_max: usize,
    pub k_ref: Option<f64>,
    pub ks_ref: Option<f64>,
    pub strong_n_max: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            n_max: 1024,
            k_ref: None,
            ks_ref: None,
            strong_n_max: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionArg {
    Contiguous,
    Singletons,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DecompScanArgs {
    #[arg(long)]
    pub p: Option<PValue>,
    #[arg(long)]
    pub q: Option<PValue>,
    /// Norm on C^d inside the L^p norm.
    #[arg(long)]
    pub inner_p: Option<PValue>,
    #[arg(long, value_enum)]
    pub side: Option<SideArg>,
    /// Ratios are divided by (number of blocks)^gamma.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub max_support: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub refine: Option<usize>,
    #[arg(long)]
    pub ascent_steps: Option<usize>,
    #[arg(long)]
    pub exhaustive_signs: Option<usize>,
    #[arg(long, value_enum)]
    pub partitions: Option<PartitionArg>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecompScanConfig {
    pub p: PValue,
    pub q: PValue,
    pub inner_p: PValue,
    pub side: SideArg,
    pub gamma: f64,
    pub dim: usize,
    pub max_support: usize,
    pub trials: usize,
    pub refine: usize,
    pub ascent_steps: usize,
    pub exhaustive_signs: usize,
    pub partitions: PartitionArg,
}

impl Default for DecompScanConfig {
    fn default() -> Self {
        let d = kreisslab_core::decomp::DecompConfig::default();
        Self {
            p: PValue(4.0),
            q: PValue(4.0),
            inner_p: PValue(2.0),
            side: SideArg::Lower,
            gamma: 0.0,
            dim: d.dim,
            max_support: d.max_support,
            trials: d.trials,
            refine: d.refine,
            ascent_steps: d.ascent_steps,
            exhaustive_signs: d.exhaustive_signs,
            partitions: PartitionArg::Contiguous,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RieszNormArgs {
    #[arg(long)]
    pub p: Option<PValue>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub inner_p: Option<PValue>,
    #[arg(long)]
    pub max_support: Option<u32>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub refine: Option<usize>,
    #[arg(long)]
    pub ascent_steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RieszNormConfig {
    pub p: PValue,
    pub dim: usize,
    pub inner_p: PValue,
    pub max_support: u32,
    pub trials: usize,
    pub refine: usize,
    pub ascent_steps: usize,
}

impl Default for RieszNormConfig {
    fn default() -> Self {
        let d = kreisslab_core::fourier::RieszConfig::default();
        Self {
            p: PValue(4.0),
            dim: 1,
            inner_p: PValue(2.0),
            max_support: d.max_support,
            trials: d.trials,
            refine: d.refine,
            ascent_steps: d.ascent_steps,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MarcinkiewiczArgs {
    #[arg(long)]
    pub p: Option<PValue>,
    #[arg(long)]
    pub inner_p: Option<PValue>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Multipliers live on [-half_width, half_width].
    #[arg(long)]
    pub half_width: Option<u32>,
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MarcinkiewiczConfig {
    pub p: PValue,
    pub inner_p: PValue,
    pub dim: usize,
    pub half_width: u32,
    pub trials: usize,
}

impl Default for MarcinkiewiczConfig {
    fn default() -> Self {
        let d = kreisslab_core::fourier::MarcinkiewiczConfig::default();
        Self {
            p: PValue(d.p),
            inner_p: PValue(d.inner_p),
            dim: d.dim,
            half_width: d.half_width,
            trials: d.trials,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RademacherArg {
    Type,
    Cotype,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TypeCotypeArgs {
    /// Number of random vectors.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub exponent: Option<PValue>,
    #[arg(long, value_enum)]
    pub kind: Option<RademacherArg>,
    #[arg(long)]
    pub inner_p: Option<PValue>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// L^p index of the Fourier-type ratio.
    #[arg(long)]
    pub fourier_p: Option<PValue>,
    /// l^q index of the Fourier-type ratio.
    #[arg(long)]
    pub fourier_q: Option<PValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TypeCotypeConfig {
    pub count: usize,
    pub dim: usize,
    pub exponent: PValue,
    pub kind: RademacherArg,
    pub inner_p: PValue,
    pub samples: usize,
    pub fourier_p: PValue,
    pub fourier_q: PValue,
}

impl Default for TypeCotypeConfig {
    fn default() -> Self {
        Self {
            count: 8,
            dim: 4,
            exponent: PValue(2.0),
            kind: RademacherArg::Type,
            inner_p: PValue(2.0),
            samples: 10_000,
            fourier_p: PValue(2.0),
            fourier_q: PValue(2.0),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PositivityArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub search: SearchArgs,
    /// Lattice exponent in [1, 2).
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub corpus_size: Option<usize>,
    /// Values of n, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<u64>>,
    /// Reference strong Kreiss constant; searched for (at p = q) when absent.
    #[arg(long)]
    pub ks_ref: Option<f64>,
    #[arg(long)]
    pub strong_n_max: Option<usize>,
    /// Horizon of the informational power recursion table.
    #[arg(long)]
    pub recursion_n_max: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PositivityConfig {
    pub q: f64,
    pub corpus_size: usize,
    pub ns: Vec<u64>,
    pub ks_ref: Option<f64>,
    pub strong_n_max: usize,
    pub recursion_n_max: u64,
}

impl Default for PositivityConfig {
    fn default() -> Self {
        Self {
            q: 1.5,
            corpus_size: 100,
            ns: vec![4, 16, 64, 256],
            ks_ref: None,
            strong_n_max: 16,
            recursion_n_max: 64,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyAppendixArgs {
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyAppendixConfig {
    pub n_min: u64,
    pub n_max: u64,
}

impl Default for VerifyAppendixConfig {
    fn default() -> Self {
        Self { n_min: 2, n_max: 10_000 }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PlotArgs {
    /// CSV written by `bounds` or `growth`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// SVG path [default: the input path with extension .svg].
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub title: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlotConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub title: Option<String>,
}
