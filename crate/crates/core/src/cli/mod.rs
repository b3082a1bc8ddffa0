//! Command-line front end: argument parsing, dispatch to the library, JSON
//! reports, configuration and the on-disk cache.
//!
//! Exit codes: 0 success, 1 a reported check failed, 2 usage or parse
//! error, 3 runtime error.

pub mod args;
pub mod cache;
pub mod config;
pub mod parse;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::arakelov::{h0, rr_defect, ArakelovBundle};
use crate::error::{Error, Result};
use crate::fqoracle::count_sections_detailed;
use crate::hirz::{self, HirzebruchConfig};
use crate::motivic::{self, SplittingType};
use crate::pcount::{self, HeightBound};
use crate::rational::{parse_rational, to_f64};
use crate::zclass;

use args::{Cli, Command, HirzArgs, HirzCmd, MotivicCmd, OracleCmd, PointsArgs, PointsCmd, ReportCmd, ThetaCmd, ZetaCmd};
use cache::{sha256_hex, Cache};
use config::Config;
pub use report::RunReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

const RR_BOUND: f64 = 1e-9;
const FUNCEQ_BOUND: f64 = 1e-6;
const WAN_BOUND: f64 = 1e-5;
const RESIDUE_AGREEMENT: f64 = 1e-6;
const RR_RANGE: std::ops::RangeInclusive<i64> = -8..=8;

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<RunReport>,
    /// Help text, usage or runtime diagnostics.
    pub message: Option<String>,
    pub pretty: bool,
    pub out: Option<std::path::PathBuf>,
}

impl Outcome {
    fn message(code: i32, msg: String) -> Self {
        Self {
            code,
            report: None,
            message: Some(msg),
            pretty: false,
            out: None,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

struct Ctx {
    tol: f64,
    cache: Option<Cache>,
    report: RunReport,
}

impl Ctx {
    fn cached<T, F>(&mut self, key: &str, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
    {
        match &self.cache {
            None => compute(),
            Some(c) => {
                let (v, hit) = c.get_or_compute(key, compute)?;
                self.report.cache_hits += hit as u64;
                Ok(v)
            }
        }
    }
}

/// Parse `argv` (including the program name) and run the command.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome::message(code, e.render().to_string());
        }
    };
    let mut cfg = match &cli.global.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => return Outcome::message(exit_code(&e), e.to_string()),
        },
        None => Config::default(),
    };
    if let Some(t) = cli.global.tol {
        if !(t > 0.0) {
            return Outcome::message(EXIT_USAGE, format!("--tol must be positive, got {t}"));
        }
        cfg.tol = t;
    }
    cfg.pretty |= cli.global.pretty;
    cfg.deterministic |= cli.global.deterministic;
    cfg.cache &= !cli.global.no_cache;

    let mut ctx = Ctx {
        tol: cfg.tol,
        cache: if cfg.cache { Cache::from_env() } else { None },
        report: RunReport::new(command_name(&cli.command)),
    };
    let start = Instant::now();
    let run = run_command(&mut ctx, cli.command);
    let elapsed = start.elapsed().as_millis() as u64;
    match run {
        Err(e) => Outcome::message(exit_code(&e), format!("error: {e}")),
        Ok(()) => {
            let mut report = ctx.report;
            report.timing_ms = if cfg.deterministic { 0 } else { elapsed };
            Outcome {
                code: if report.all_pass() { EXIT_OK } else { EXIT_CHECK_FAILED },
                report: Some(report),
                message: None,
                pretty: cfg.pretty,
                out: cli.global.out,
            }
        }
    }
}

/// Dispatch and write the report (to `--out` or standard output). Returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let outcome = dispatch(argv);
    if let Some(msg) = &outcome.message {
        if outcome.code == EXIT_OK {
            print!("{msg}");
        } else {
            eprintln!("{}", msg.trim_end());
        }
    }
    let Some(report) = &outcome.report else {
        return outcome.code;
    };
    let json = report.to_json(outcome.pretty);
    let written = match &outcome.out {
        Some(p) => std::fs::write(p, format!("{json}\n")),
        None => writeln!(std::io::stdout().lock(), "{json}"),
    };
    match written {
        Ok(()) => outcome.code,
        Err(e) => {
            eprintln!("error: writing report: {e}");
            EXIT_RUNTIME
        }
    }
}

fn command_name(cmd: &Command) -> String {
    let (group, leaf) = match cmd {
        Command::Points(c) => ("points", match c {
            PointsCmd::Count(_) => "count",
            PointsCmd::List(_) => "list",
        }),
        Command::Theta(c) => ("theta", match c {
            ThetaCmd::H0 { .. } => "h0",
            ThetaCmd::RrCheck { .. } => "rr-check",
        }),
        Command::Zeta(c) => ("zeta", match c {
            ZetaCmd::Eval { .. } => "eval",
            ZetaCmd::Residue { .. } => "residue",
            ZetaCmd::Funceq { .. } => "funceq",
            ZetaCmd::Wan { .. } => "wan",
            ZetaCmd::Partial { .. } => "partial",
        }),
        Command::Hirzebruch(c) => ("hirzebruch", match c {
            HirzCmd::Count(_) => "count",
            HirzCmd::Predict(_) => "predict",
            HirzCmd::Compare(_) => "compare",
            HirzCmd::Alpha(_) => "alpha",
        }),
        Command::Motivic(c) => ("motivic", match c {
            MotivicCmd::Series(_) => "series",
            MotivicCmd::Check(_) => "check",
            MotivicCmd::Funceq(_) => "funceq",
            MotivicCmd::Lemma48(_) => "lemma48",
            MotivicCmd::Specialize(_) => "specialize",
            MotivicCmd::Residue(_) => "residue",
        }),
        Command::Oracle(OracleCmd::Sections { .. }) => ("oracle", "sections"),
        Command::Report(ReportCmd::Tauberian { .. }) => ("report", "tauberian"),
    };
    format!("{group} {leaf}")
}

fn run_command(ctx: &mut Ctx, cmd: Command) -> Result<()> {
    match cmd {
        Command::Points(c) => points(ctx, c),
        Command::Theta(c) => theta(ctx, c),
        Command::Zeta(c) => zeta(ctx, c),
        Command::Hirzebruch(c) => hirzebruch(ctx, c),
        Command::Motivic(c) => motivic_cmd(ctx, c),
        Command::Oracle(c) => oracle(ctx, c),
        Command::Report(c) => report_cmd(ctx, c),
    }
}

fn gram_key(v: &ArakelovBundle) -> String {
    let text = match v.exact_gram() {
        Some(g) => g.entries().iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","),
        None => v.gram().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
    };
    sha256_hex(&format!("{}:{text}", v.rank()))
}

fn bound_arg(s: &str) -> Result<HeightBound> {
    HeightBound::from_height(parse_rational(s)?)
}

fn csv_file(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn points(ctx: &mut Ctx, cmd: PointsCmd) -> Result<()> {
    let (list, a): (bool, PointsArgs) = match cmd {
        PointsCmd::Count(a) => (false, a),
        PointsCmd::List(a) => (true, a),
    };
    let v = parse::parse_bundle(&a.gram.gram)?;
    let bound = bound_arg(&a.bound)?;
    ctx.report.param("gram", &a.gram.gram);
    ctx.report.param("bound", &a.bound);
    let key = format!("points:{}:{}", gram_key(&v), bound.squared());
    if list || a.csv.is_some() {
        let records: Vec<pcount::HeightRecord> =
            ctx.cached(&format!("{key}:list"), || pcount::enumerate_points(&v, &bound))?;
        if let Some(p) = &a.csv {
            ctx.report.param("csv", p.display().to_string());
            pcount::write_csv(&records, v.rank(), csv_file(p)?)?;
        }
        ctx.report.count("count", records.len() as u64);
        if list {
            for r in &records {
                let h2 = r.height_sq();
                let rec = format!("point[{}]", r.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                ctx.report.rational(&rec, &h2);
            }
        }
    } else {
        let n: u64 = ctx.cached(&format!("{key}:count"), || pcount::count_points(&v, &bound))?;
        ctx.report.count("count", n);
    }
    Ok(())
}

fn theta(ctx: &mut Ctx, cmd: ThetaCmd) -> Result<()> {
    match cmd {
        ThetaCmd::H0 { gram, twist } => {
            let v = parse::parse_bundle(&gram.gram)?;
            ctx.report.param("gram", &gram.gram);
            ctx.report.param("twist", twist);
            ctx.report.param("tol", ctx.tol);
            let w = if twist == 0.0 { v } else { v.twist(twist) };
            ctx.report.analytic("h0", &h0(&w, ctx.tol));
            ctx.report.real("degree", w.degree());
        }
        ThetaCmd::RrCheck { gram } => {
            let v = parse::parse_bundle(&gram.gram)?;
            ctx.report.param("gram", &gram.gram);
            let d = rr_defect(&v)?;
            ctx.report.real("degree", v.degree());
            ctx.report.check_bound("riemann_roch", d.abs(), RR_BOUND);
        }
    }
    Ok(())
}

fn zeta(ctx: &mut Ctx, cmd: ZetaCmd) -> Result<()> {
    let tol = ctx.tol;
    match cmd {
        ZetaCmd::Eval { gram, s } => {
            let v = parse::parse_bundle(&gram.gram)?;
            let z = parse::parse_complex(&s.s)?;
            ctx.report.param("gram", &gram.gram);
            ctx.report.param("s", &s.s);
            ctx.report.param("tol", tol);
            let res = zclass::continued_zeta(&v, z, tol)?;
            ctx.report.analytic("Z", &res.value);
            for (name, part) in ["J", "J_dual", "pole_r", "pole_0"].iter().zip(res.parts.iter()) {
                ctx.report.analytic(name, part);
            }
        }
        ZetaCmd::Residue { gram } => {
            let v = parse::parse_bundle(&gram.gram)?;
            ctx.report.param("gram", &gram.gram);
            let main = zclass::residue_main(&v)?;
            ctx.report.real("residue", main);
            let extra = zclass::residue_extrapolated(&v, tol.max(1e-12))?;
            ctx.report.analytic("residue_extrapolated", &extra);
            let defect = (extra.re() - main).abs();
            ctx.report
                .check_bound("extrapolation_agrees", defect, extra.abs_error + RESIDUE_AGREEMENT);
        }
        ZetaCmd::Funceq { gram, s } => {
            let v = parse::parse_bundle(&gram.gram)?;
            let z = parse::parse_complex(&s.s)?;
            ctx.report.param("gram", &gram.gram);
            ctx.report.param("s", &s.s);
            let d = zclass::funceq_defect(&v, z, tol)?;
            ctx.report.check_bound("functional_equation", d, FUNCEQ_BOUND);
        }
        ZetaCmd::Wan { n, s } => {
            let z = parse::parse_complex(&s.s)?;
            ctx.report.param("n", n);
            ctx.report.param("s", &s.s);
            for k in 0..=n {
                ctx.report.analytic(&format!("xi_{k}"), &zclass::wan_xi_k(k, z, tol.max(1e-12))?);
            }
            let d = zclass::wan_formula_defect(n, z)?;
            ctx.report.check_bound("wan_formula", d, WAN_BOUND);
        }
        ZetaCmd::Partial { gram, s, bound } => {
            let v = parse::parse_bundle(&gram.gram)?;
            let z = parse::parse_complex(&s.s)?;
            let b = bound_arg(&bound)?;
            ctx.report.param("gram", &gram.gram);
            ctx.report.param("s", &s.s);
            ctx.report.param("bound", &bound);
            let partial = pcount::dirichlet_partial(&v, z, &b)?;
            ctx.report.analytic("partial", &partial);
            ctx.report.real("tail_bound", pcount::dirichlet_tail_bound(&v, z.re, b.as_f64()));
        }
    }
    Ok(())
}

fn hirz_config(a: &HirzArgs) -> Result<HirzebruchConfig> {
    match &a.base_gram {
        None => HirzebruchConfig::new(a.e, a.a, a.b),
        Some(g) => HirzebruchConfig::with_base(a.e, a.a, a.b, parse::parse_gram(g)?),
    }
}

fn hirz_bound(a: &HirzArgs) -> Result<HeightBound> {
    match &a.bound {
        Some(b) => bound_arg(b),
        None => Err(Error::Parse("--bound is required for this command".into())),
    }
}

fn hirz_params(ctx: &mut Ctx, a: &HirzArgs) {
    ctx.report.param("e", a.e);
    ctx.report.param("a", a.a);
    ctx.report.param("b", a.b);
    if let Some(b) = &a.bound {
        ctx.report.param("bound", b);
    }
    if let Some(g) = &a.base_gram {
        ctx.report.param("base_gram", g);
    }
}

fn hirzebruch(ctx: &mut Ctx, cmd: HirzCmd) -> Result<()> {
    match cmd {
        HirzCmd::Count(a) => {
            hirz_params(ctx, &a);
            let cfg = hirz_config(&a)?;
            let bound = hirz_bound(&a)?;
            let key = format!(
                "hirz:{}:{}:{}:{}:{}",
                a.e,
                a.a,
                a.b,
                gram_key(cfg.base()),
                bound.squared()
            );
            let (total, minimal): (u64, u64) = ctx.cached(&key, || {
                Ok((hirz::count_surface(&cfg, &bound)?, hirz::minimal_section_count(&cfg, &bound)?))
            })?;
            if let Some(p) = &a.csv {
                ctx.report.param("csv", p.display().to_string());
                hirz::write_csv(&hirz::enumerate_surface(&cfg, &bound)?, csv_file(p)?)?;
            }
            ctx.report.count("count", total);
            ctx.report.count("minimal_section", minimal);
            if total > 0 {
                ctx.report.real("minimal_fraction", minimal as f64 / total as f64);
            }
        }
        HirzCmd::Predict(a) => {
            hirz_params(ctx, &a);
            let p = hirz::predicted_poles(&hirz_config(&a)?)?;
            ctx.report.real("s1", p.s1);
            ctx.report.analytic("rho1", &crate::AnalyticValue::real(p.rho1, p.rho1_abs_error));
            ctx.report.real("s2", p.s2);
            ctx.report.real("rho2", p.rho2);
            ctx.report.real("sigma0", p.sigma0);
            ctx.report.value("s1_in_domain", p.flags.s1_in_domain);
            ctx.report.value("s2_in_domain", p.flags.s2_in_domain);
            ctx.report.value("coincident", p.flags.coincident);
            if let Some((s, rho)) = p.dominant {
                ctx.report.real("dominant_s", s);
                ctx.report.real("dominant_rho", rho);
            }
        }
        HirzCmd::Compare(a) => {
            hirz_params(ctx, &a);
            let c = hirz::compare_counts(&hirz_config(&a)?, &hirz_bound(&a)?)?;
            ctx.report.count("observed", c.observed);
            ctx.report.real("predicted", c.predicted);
            ctx.report.real("ratio", c.ratio);
        }
        HirzCmd::Alpha(a) => {
            hirz_params(ctx, &a);
            ctx.report.rational("alpha", &hirz::alpha_invariant(&hirz_config(&a)?));
        }
    }
    Ok(())
}

/// `(c)*t^m + …` over the nonzero coefficients, on one line.
fn series_str(s: &motivic::MotivicSeries) -> String {
    let terms: Vec<String> = s
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| format!("({c})*t^{m}"))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn split_arg(s: &str) -> Result<SplittingType> {
    SplittingType::new(parse::parse_ints(s)?)
}

fn motivic_cmd(ctx: &mut Ctx, cmd: MotivicCmd) -> Result<()> {
    match cmd {
        MotivicCmd::Series(a) => {
            let split = split_arg(&a.split.split)?;
            ctx.report.param("split", split.degrees());
            ctx.report.param("trunc", a.trunc);
            for (m, c) in motivic::zeta_z_series(&split, a.trunc)?.iter() {
                ctx.report.value(&format!("Z[t^{m}]"), c.to_string());
            }
            if a.trunc >= 2 {
                for (m, c) in motivic::sect_series(&split, a.trunc)?.iter() {
                    ctx.report.value(&format!("Sect[{m}]"), c.to_string());
                }
            }
        }
        MotivicCmd::Check(a) => {
            let split = split_arg(&a.split.split)?;
            ctx.report.param("split", split.degrees());
            ctx.report.param("trunc", a.trunc);
            let rat = motivic::rationality_witness(&split, a.trunc)?;
            ctx.report.value("numerator", series_str(&rat.polynomial));
            ctx.report.check("rationality", rat.residual_zero, rat.residual_window);
            let crit = motivic::value_at_critical(&split)?;
            ctx.report.value("critical_value", crit.value.to_string());
            ctx.report.check("critical_value", crit.defect_is_zero, crit.defect.to_string());
            let bad: Vec<i64> = RR_RANGE
                .filter(|&n| !motivic::motivic_rr_defect(&split, n).is_zero())
                .collect();
            ctx.report.check("riemann_roch", bad.is_empty(), bad);
            let fe = motivic::funceq_defect_motivic(&split, a.trunc)?;
            ctx.report.check("functional_equation", fe.all_zero, series_str(&fe.defect));
        }
        MotivicCmd::Funceq(a) => {
            let split = split_arg(&a.split.split)?;
            ctx.report.param("split", split.degrees());
            ctx.report.param("trunc", a.trunc);
            let fe = motivic::funceq_defect_motivic(&split, a.trunc)?;
            ctx.report.value("lhs", series_str(&fe.lhs));
            ctx.report.value("rhs", series_str(&fe.rhs));
            ctx.report.check("functional_equation", fe.all_zero, series_str(&fe.defect));
        }
        MotivicCmd::Lemma48(a) => {
            let ab = parse::parse_ints(&a.split.split)?;
            let [x, y] = ab[..] else {
                return Err(Error::Parse("lemma48 expects --split a,b".into()));
            };
            ctx.report.param("a", x);
            ctx.report.param("b", y);
            ctx.report.param("trunc", a.trunc);
            let rep = motivic::lemma_poly_check(x, y, a.trunc)?;
            ctx.report.value("g", series_str(&rep.g));
            ctx.report.value("value", rep.value.to_string());
            ctx.report.value("expected", rep.expected.to_string());
            ctx.report.check("linear_numerator", rep.vanishing, series_str(&rep.g));
            ctx.report.check("critical_value", rep.value_matches, (&rep.value - &rep.expected).to_string());
            ctx.report.check("two_sided_sum_zero", rep.two_sided_zero, rep.two_sided_zero);
        }
        MotivicCmd::Specialize(a) => {
            let split = split_arg(&a.split.split)?;
            ctx.report.param("split", split.degrees());
            ctx.report.param("q", a.q);
            ctx.report.param("trunc", a.trunc);
            let sect = motivic::sect_series(&split, a.trunc.max(0) + 2)?;
            for (d, c) in motivic::specialize_series(&sect, a.q)? {
                ctx.report.rational(&format!("sections[{d}]"), &c);
            }
        }
        MotivicCmd::Residue(a) => {
            let split = split_arg(&a.split.split)?;
            ctx.report.param("split", split.degrees());
            ctx.report.param("q", a.q);
            let formula = motivic::residue_specialized(&split, a.q)?;
            let extracted = motivic::residue_extracted(&split, a.q)?;
            ctx.report.rational("residue", &formula);
            ctx.report.rational("residue_extracted", &extracted);
            let defect = &formula - &extracted;
            ctx.report.check("extraction_matches", formula == extracted, to_f64(&defect));
        }
    }
    Ok(())
}

fn oracle(ctx: &mut Ctx, cmd: OracleCmd) -> Result<()> {
    let OracleCmd::Sections { q, split, d } = cmd;
    let st = split_arg(&split.split)?;
    ctx.report.param("q", q);
    ctx.report.param("split", st.degrees());
    ctx.report.param("d", d);
    let c = count_sections_detailed(q, &st, d)?;
    ctx.report.count("count", c.count);
    ctx.report.count("raw", c.raw);
    // the motivic series specialized at 𝕃 = q predicts the same count
    let predicted = if d < st.first_index() {
        num_rational::BigRational::from_integer(0.into())
    } else {
        let sect = motivic::sect_series(&st, d.max(0) + 2)?;
        let spec = motivic::specialize_series(&sect, q as i64)?;
        spec.into_iter()
            .find(|(k, _)| *k == d)
            .map(|(_, c)| c)
            .unwrap_or_else(|| num_rational::BigRational::from_integer(0.into()))
    };
    ctx.report.rational("motivic_prediction", &predicted);
    let matches = predicted == num_rational::BigRational::from_integer(c.count.into());
    ctx.report.check("matches_motivic", matches, to_f64(&predicted) - c.count as f64);
    Ok(())
}

fn report_cmd(ctx: &mut Ctx, cmd: ReportCmd) -> Result<()> {
    let ReportCmd::Tauberian { a, order, g, bound } = cmd;
    ctx.report.param("a", a);
    ctx.report.param("order", order);
    ctx.report.param("g", g);
    ctx.report.param("bound", bound);
    ctx.report.real("prediction", zclass::tauberian_predict(a, order, g, bound)?);
    Ok(())
}
