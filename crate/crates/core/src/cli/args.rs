//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "heightzeta",
    version,
    about = "Height zeta functions of projective spaces and Hirzebruch surfaces",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GlobalOpts {
    /// `key = value` configuration file (tol, cache, pretty, deterministic).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Target absolute error for analytic quantities.
    #[arg(long, global = true, value_name = "REAL")]
    pub tol: Option<f64>,
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Report timing_ms = 0 so that reruns are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rational points of bounded height on ℙ(V).
    #[command(subcommand)]
    Points(PointsCmd),
    /// Theta section counts of Arakelov bundles.
    #[command(subcommand)]
    Theta(ThetaCmd),
    /// The height zeta function Z(ℙ(V), s).
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Hirzebruch surfaces F_e with height H_{a,b}.
    #[command(subcommand)]
    Hirzebruch(HirzCmd),
    /// Motivic height zeta functions of ℙ(V) → ℙ¹.
    #[command(subcommand)]
    Motivic(MotivicCmd),
    /// Brute-force counts over finite fields.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Asymptotic predictions.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Debug, Args, Clone)]
pub struct GramArg {
    /// `I<k>` or row-major rationals such as `2,1;1,1`.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub gram: String,
}

#[derive(Debug, Args, Clone)]
pub struct PointsArgs {
    #[command(flatten)]
    pub gram: GramArg,
    /// Height bound B (rational).
    #[arg(long, value_name = "B")]
    pub bound: String,
    /// Dump the points as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PointsCmd {
    /// #{P : H(P) ≤ B}.
    Count(PointsArgs),
    /// The points themselves, sorted by height.
    List(PointsArgs),
}

#[derive(Debug, Subcommand)]
pub enum ThetaCmd {
    /// h⁰(V ⊗ O(t)).
    H0 {
        #[command(flatten)]
        gram: GramArg,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        twist: f64,
    },
    /// h⁰(V) − h⁰(V^∨) − deg V.
    RrCheck {
        #[command(flatten)]
        gram: GramArg,
    },
}

#[derive(Debug, Args, Clone)]
pub struct SArg {
    /// Complex argument such as `3`, `2.5`, `0.5+14i`.
    #[arg(long = "s", value_name = "COMPLEX", allow_hyphen_values = true)]
    pub s: String,
}

#[derive(Debug, Subcommand)]
pub enum ZetaCmd {
    /// Z(ℙ(V), s) by continuation.
    Eval {
        #[command(flatten)]
        gram: GramArg,
        #[command(flatten)]
        s: SArg,
    },
    /// Residue at s = rank V.
    Residue {
        #[command(flatten)]
        gram: GramArg,
    },
    /// Defect of the functional equation s ↔ r − s.
    Funceq {
        #[command(flatten)]
        gram: GramArg,
        #[command(flatten)]
        s: SArg,
    },
    /// Z(ℙⁿ, s) against the higher-ξ expansion.
    Wan {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        s: SArg,
    },
    /// Partial Dirichlet sum over H(P) ≤ B with its tail bound.
    Partial {
        #[command(flatten)]
        gram: GramArg,
        #[command(flatten)]
        s: SArg,
        #[arg(long, value_name = "B")]
        bound: String,
    },
}

#[derive(Debug, Args, Clone)]
pub struct HirzArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub e: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    /// Height bound B (rational).
    #[arg(long, value_name = "B")]
    pub bound: Option<String>,
    /// Metric on the base ℙ¹ (default I2).
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub base_gram: Option<String>,
    /// Dump the counted points as CSV.
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum HirzCmd {
    /// Points of bounded height, and those on the minimal section.
    Count(HirzArgs),
    /// Pole locations and residues.
    Predict(HirzArgs),
    /// Observed count against the dominant pole.
    Compare(HirzArgs),
    /// The α-invariant of H_{a,b}.
    Alpha(HirzArgs),
}

#[derive(Debug, Args, Clone)]
pub struct SplitArg {
    /// Comma-separated integers, e.g. `0,-1`.
    #[arg(long, value_name = "INTS", allow_hyphen_values = true)]
    pub split: String,
}

#[derive(Debug, Args, Clone)]
pub struct MotivicArgs {
    #[command(flatten)]
    pub split: SplitArg,
    /// Truncation order N.
    #[arg(long, default_value_t = 15, allow_hyphen_values = true)]
    pub trunc: i64,
}

#[derive(Debug, Args, Clone)]
pub struct MotivicQArgs {
    #[command(flatten)]
    pub split: SplitArg,
    #[arg(long)]
    pub q: i64,
    /// Highest section degree reported.
    #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
    pub trunc: i64,
}

#[derive(Debug, Subcommand)]
pub enum MotivicCmd {
    /// Coefficients of Z(ℙ(V), t) and of the section series.
    Series(MotivicArgs),
    /// Rationality, critical value, Riemann–Roch and functional equation.
    Check(MotivicArgs),
    /// Functional equation t ↔ 𝕃^{−r}t^{−1}.
    Funceq(MotivicArgs),
    /// Σ[ℙ^{an+b}]tⁿ; the pair (a, b) is given by --split.
    Lemma48(MotivicArgs),
    /// Section counts over F_q from the motivic series.
    Specialize(MotivicQArgs),
    /// Residue at t = q^{−r} of the specialized series.
    Residue(MotivicQArgs),
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Degree-d sections of ℙ(V) → ℙ¹ over F_q by enumeration.
    Sections {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        split: SplitArg,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReportCmd {
    /// g/(a(b−1)!) · B^a (log B)^{b−1} for a pole of order b at s = a.
    Tauberian {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        order: u32,
        #[arg(long, allow_hyphen_values = true)]
        g: f64,
        #[arg(long)]
        bound: f64,
    },
}
