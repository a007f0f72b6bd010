//! Command-line front end: convergence tables and JSON reports.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 no convergence
//! (or a failed check), 4 refinement budget exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::decompose::Variant;
use crate::error::{Error, Result};
use crate::funcs::parse_expr;
use crate::germ::{abs_increment, coboundary, signed_area, Gauge, Germ, SamplerConfig};
use crate::integrals::{
    pullback_curve, pullback_surface, stokes_check, young, young_germ, young_sewn_germ, zust,
    IntegralResult, Scalar0,
};
use crate::rough::{pure_area_family_1d, pure_area_family_2d};
use crate::sew::{certify_sewn, sew_eval, CertifyConfig, SewOptions, SewReport, SewStatus};
use crate::simplex::{FnMap, Point, PointMap, Simplex};

pub const SCHEMA: &str = "roughforms/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "roughforms",
    version,
    about = "Sewing of germs and rough integrals on simplices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ∫ f dg over a segment.
    Young(YoungArgs),
    /// ∫ f dg1 ∧ dg2 over a triangle.
    Zust(ZustArgs),
    /// ⟨∂S, f dg⟩ against the dya† sewing of δ(f ∪ δg).
    Stokes(StokesArgs),
    /// Change of variables along a map φ given component-wise.
    Pullback(PullbackArgs),
    /// Error-vs-n table for the oscillating pure-area families.
    PureArea(PureAreaArgs),
    /// Sampled seminorm of a germ against diam^γ.
    Gauge(GaugeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Dya,
    DyaDagger,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Deepest refinement level.
    #[arg(long)]
    max_level: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    abs_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    /// Turn off extrapolation of the partial sums.
    #[arg(long)]
    no_extrapolate: bool,
    #[arg(long, value_enum, default_value = "dya")]
    variant: VariantArg,
    /// Neumaier summation of streamed leaves.
    #[arg(long)]
    compensated: bool,
    /// Worker threads; 0 keeps the default pool.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Seed of every sampler.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Per-level convergence table.
    #[arg(long)]
    table: bool,
}

impl Common {
    fn sew_options(&self, default_level: usize, degree: usize) -> Result<SewOptions> {
        let level = self.max_level.unwrap_or(default_level);
        crate::decompose::check_budget(degree, level)?;
        let o = SewOptions {
            max_level: Some(level),
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            variant: match self.variant {
                VariantArg::Dya => Variant::Dya,
                VariantArg::DyaDagger => Variant::DyaDagger,
            },
            extrapolate: !self.no_extrapolate,
            compensated: self.compensated,
            ..SewOptions::default()
        };
        o.validate()?;
        Ok(o)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GermHook {
    /// The non-sewable germ |q − p|.
    AbsIncrement,
}

#[derive(Args, Debug)]
struct YoungArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    /// Segment "a;b" (coordinates comma-separated).
    #[arg(long, allow_hyphen_values = true)]
    simplex: String,
    /// Certify the sewn germ; failure exits with 3.
    #[arg(long)]
    strict: bool,
    /// Sew a built-in germ instead of f dg; always certified.
    #[arg(long, value_enum)]
    germ: Option<GermHook>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ZustArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g1: String,
    #[arg(long, allow_hyphen_values = true)]
    g2: String,
    /// Triangle "x0,y0;x1,y1;x2,y2".
    #[arg(long, allow_hyphen_values = true)]
    simplex: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct StokesArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_hyphen_values = true)]
    g: String,
    #[arg(long, allow_hyphen_values = true)]
    simplex: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PullbackArgs {
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    /// Curve case: the 1-form f dg.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    /// Surface case: the 2-form f dg1 ∧ dg2.
    #[arg(long, requires = "g2", allow_hyphen_values = true)]
    g1: Option<String>,
    #[arg(long, requires = "g1", allow_hyphen_values = true)]
    g2: Option<String>,
    /// Components of φ separated by ';', in the parameter variables.
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    /// Parameter simplex: a segment for curves, a triangle for surfaces.
    #[arg(long, allow_hyphen_values = true)]
    simplex: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PureAreaArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    dim: u8,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
    n_list: Vec<usize>,
    /// Direction ξ of the 1D family.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    xi: Vec<f64>,
    /// Exponent split ε of the 2D family.
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, allow_hyphen_values = true)]
    simplex: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GaugeGerm {
    Young,
    AbsIncrement,
    Area,
}

#[derive(Args, Debug)]
struct GaugeArgs {
    #[arg(long, value_enum, default_value = "young")]
    germ: GaugeGerm,
    #[arg(long, default_value = "x", allow_hyphen_values = true)]
    f: String,
    #[arg(long, default_value = "x", allow_hyphen_values = true)]
    g: String,
    /// Measure the coboundary of the germ.
    #[arg(long)]
    coboundary: bool,
    #[arg(long, default_value_t = 1.5)]
    gamma: f64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Use the reduced sampling plan.
    #[arg(long)]
    light: bool,
    #[command(flatten)]
    common: Common,
}

/// Outcome of one command before rendering.
struct Outcome {
    command: &'static str,
    body: Value,
    /// Reports contributing convergence tables, with their simplex degree.
    tables: Vec<(String, usize, SewReport)>,
    /// Extra CSV rows for table-shaped commands.
    rows: Option<(Vec<&'static str>, Vec<Vec<Value>>)>,
    ok: bool,
    diagnostics: Vec<String>,
}

impl Outcome {
    fn new(command: &'static str, body: Value) -> Outcome {
        Outcome {
            command,
            body,
            tables: Vec::new(),
            rows: None,
            ok: true,
            diagnostics: Vec::new(),
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(args, &mut out, &mut err)
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let common = match &cli.command {
        Command::Young(a) => &a.common,
        Command::Zust(a) => &a.common,
        Command::Stokes(a) => &a.common,
        Command::Pullback(a) => &a.common,
        Command::PureArea(a) => &a.common,
        Command::Gauge(a) => &a.common,
    }
    .clone();
    let result = if common.threads > 0 {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(Error::Parameter(format!("thread pool: {e}"))),
        }
    } else {
        dispatch(&cli.command)
    };
    match result {
        Ok(o) => {
            for d in &o.diagnostics {
                let _ = writeln!(err, "{d}");
            }
            let _ = render(&o, &common, out);
            if o.ok {
                EXIT_OK
            } else {
                EXIT_NONCONVERGENT
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::NonConvergent { report, .. } = &e {
                let _ = writeln!(err, "last levels:");
                let _ = write_csv_table(err, report, 1);
            }
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergent { .. } => EXIT_NONCONVERGENT,
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Young(a) => cmd_young(a),
        Command::Zust(a) => cmd_zust(a),
        Command::Stokes(a) => cmd_stokes(a),
        Command::Pullback(a) => cmd_pullback(a),
        Command::PureArea(a) => cmd_pure_area(a),
        Command::Gauge(a) => cmd_gauge(a),
    }
}

fn parse_simplex(text: &str, degree: usize) -> Result<Simplex> {
    let s: Simplex = text.parse()?;
    if s.degree() != degree {
        return Err(Error::Degree(format!(
            "expected a {degree}-simplex, `{text}` has {} vertices",
            s.degree() + 1
        )));
    }
    Ok(s)
}

fn scalar(text: &str, dim: usize) -> Result<Scalar0> {
    parse_expr(text)?.to_scalar(dim, text)
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn not_converged(o: &mut Outcome, what: &str, r: &SewReport) {
    if r.status != SewStatus::Converged {
        o.ok = false;
        o.diagnostics.push(format!(
            "{what}: status {:?} after level {}",
            r.status,
            r.final_level()
        ));
    }
}

fn integral_outcome(command: &'static str, r: IntegralResult, degree: usize) -> Outcome {
    let mut o = Outcome::new(command, json!({ "result": to_json(&r) }));
    not_converged(&mut o, command, &r.report);
    for w in &r.warnings {
        o.diagnostics.push(format!("warning: {w}"));
    }
    o.tables.push((command.to_string(), degree, r.report));
    o
}

fn sample_box(s: &Simplex) -> (f64, f64) {
    let c = s.vertices().iter().flat_map(|p| p.coords().to_vec());
    let (lo, hi) = c.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| {
        (l.min(x), h.max(x))
    });
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

fn cmd_young(a: &YoungArgs) -> Result<Outcome> {
    let seg = parse_simplex(&a.simplex, 1)?;
    let opts = a.common.sew_options(20, 1)?;
    let (lo, hi) = sample_box(&seg);
    let cert_cfg = CertifyConfig {
        lo,
        hi,
        seed: a.common.seed,
        ..CertifyConfig::new(seg.dim())
    };
    if let Some(GermHook::AbsIncrement) = a.germ {
        let g = abs_increment();
        let report = sew_eval(&g, &seg, &opts)?;
        let sopts = opts.clone();
        let sewn = Germ::new(1, move |s| {
            sew_eval(&g, s, &sopts).map_or(f64::NAN, |r| r.value)
        });
        let cert = certify_sewn(&sewn, &cert_cfg)?;
        let mut o = Outcome::new(
            "young",
            json!({ "germ": "abs-increment", "value": report.value, "report": to_json(&report), "certification": to_json(&cert) }),
        );
        if !cert.passed() {
            o.ok = false;
            o.diagnostics.push(certification_diagnostic(&cert));
        }
        o.tables.push(("abs-increment".into(), 1, report));
        return Ok(o);
    }
    let f = scalar(&a.f, seg.dim())?;
    let g = scalar(&a.g, seg.dim())?;
    let r = young(&f, &g, &seg, &opts)?;
    let mut o = integral_outcome("young", r, 1);
    if a.strict {
        let cert = certify_sewn(&young_sewn_germ(&f, &g, &opts), &cert_cfg)?;
        if !cert.passed() {
            o.ok = false;
            o.diagnostics.push(certification_diagnostic(&cert));
        }
        o.body["certification"] = to_json(&cert);
    }
    Ok(o)
}

fn certification_diagnostic(c: &crate::sew::CertificationReport) -> String {
    let checks = [
        ("antisymmetry", &c.antisymmetric),
        ("cut additivity", &c.cut_additive),
        ("flip", &c.flip_annihilated),
        ("nonatomic", &c.nonatomic),
    ];
    let failed: Vec<String> = checks
        .iter()
        .filter(|(_, p)| !p.pass)
        .map(|(n, p)| {
            format!(
                "{n} (defect {:.3e}, witness {})",
                p.max_defect,
                p.witness.as_deref().unwrap_or("-")
            )
        })
        .collect();
    format!("certification failed: {}", failed.join("; "))
}

fn cmd_zust(a: &ZustArgs) -> Result<Outcome> {
    let tri = parse_simplex(&a.simplex, 2)?;
    let opts = a.common.sew_options(10, 2)?;
    let d = tri.dim();
    let r = zust(
        &scalar(&a.f, d)?,
        &scalar(&a.g1, d)?,
        &scalar(&a.g2, d)?,
        &tri,
        &opts,
    )?;
    Ok(integral_outcome("zust", r, 2))
}

fn cmd_stokes(a: &StokesArgs) -> Result<Outcome> {
    let tri = parse_simplex(&a.simplex, 2)?;
    let opts = a.common.sew_options(10, 2)?;
    let d = tri.dim();
    let r = stokes_check(&scalar(&a.f, d)?, &scalar(&a.g, d)?, &tri, &opts)?;
    let mut o = Outcome::new(
        "stokes",
        json!({
            "result": to_json(&r),
            "discrepancy": r.discrepancy(),
            "tolerance": r.tolerance(),
            "holds": r.holds(),
        }),
    );
    for (i, e) in r.edge_reports.iter().enumerate() {
        not_converged(&mut o, &format!("edge {i}"), e);
        o.tables.push((format!("edge{i}"), 1, e.clone()));
    }
    not_converged(&mut o, "rhs", &r.rhs_report);
    if !r.holds() {
        o.ok = false;
        o.diagnostics.push(format!(
            "identity defect {:.3e} exceeds the error estimates {:.3e}",
            r.discrepancy(),
            r.tolerance()
        ));
    }
    o.tables.push(("rhs".into(), 2, r.rhs_report));
    Ok(o)
}

fn parse_map(text: &str, source_dim: usize) -> Result<Arc<dyn PointMap>> {
    let comps: Vec<_> = text
        .split(';')
        .map(|c| parse_expr(c.trim()).and_then(|e| e.to_scalar(source_dim, c.trim())))
        .collect::<Result<_>>()?;
    let tgt = comps.len();
    if tgt == 0 || tgt > crate::simplex::MAX_DIM {
        return Err(Error::Dimension(format!("φ has {tgt} components")));
    }
    Ok(Arc::new(FnMap::new(source_dim, tgt, move |p| {
        let v: Vec<f64> = comps.iter().map(|c| c.eval(p)).collect();
        Point::from_slice_unchecked(&v)
    })))
}

fn cmd_pullback(a: &PullbackArgs) -> Result<Outcome> {
    match (&a.g, &a.g1, &a.g2) {
        (Some(g), None, None) => {
            let seg = parse_simplex(&a.simplex, 1)?;
            let opts = a.common.sew_options(16, 1)?;
            let phi = parse_map(&a.phi, seg.dim())?;
            let d = phi.target_dim();
            let r = pullback_curve(&scalar(&a.f, d)?, &scalar(g, d)?, phi, &seg, &opts)?;
            let mut o = Outcome::new(
                "pullback",
                json!({ "kind": "curve", "result": to_json(&r), "discrepancy": r.discrepancy() }),
            );
            if r.discrepancy() > r.tolerance {
                o.ok = false;
                o.diagnostics.push(format!(
                    "pull-back defect {:.3e} exceeds {:.3e}",
                    r.discrepancy(),
                    r.tolerance
                ));
            }
            for (i, rep) in r.reports.iter().enumerate() {
                not_converged(&mut o, &format!("part {i}"), rep);
                o.tables.push((format!("part{i}"), 1, rep.clone()));
            }
            Ok(o)
        }
        (None, Some(g1), Some(g2)) => {
            let tri = parse_simplex(&a.simplex, 2)?;
            let opts = a.common.sew_options(6, 2)?;
            let phi = parse_map(&a.phi, tri.dim())?;
            let d = phi.target_dim();
            let r = pullback_surface(
                &scalar(&a.f, d)?,
                &scalar(g1, d)?,
                &scalar(g2, d)?,
                phi,
                &tri,
                &opts,
            )?;
            let mut o = Outcome::new(
                "pullback",
                json!({
                    "kind": "surface",
                    "result": to_json(&r),
                    "defect": r.defect(),
                    "tolerance": r.tolerance(),
                    "holds": r.holds(),
                }),
            );
            if r.top_dimension && !r.holds() {
                o.ok = false;
                o.diagnostics.push(format!(
                    "pull-back defect {:.3e} exceeds {:.3e}",
                    r.defect().abs(),
                    r.tolerance()
                ));
            }
            Ok(o)
        }
        _ => Err(Error::Parameter(
            "pass either --g or both --g1 and --g2".into(),
        )),
    }
}

fn cmd_pure_area(a: &PureAreaArgs) -> Result<Outcome> {
    if a.n_list.is_empty() || a.n_list.contains(&0) {
        return Err(Error::Parameter("--n-list needs positive integers".into()));
    }
    let mut rows = Vec::new();
    let mut o = Outcome::new("pure-area", Value::Null);
    let mut items = Vec::new();
    if a.dim == 1 {
        let default = format!(
            "{};{}",
            vec!["0"; a.xi.len()].join(","),
            vec!["1"; a.xi.len()].join(",")
        );
        let seg = parse_simplex(a.simplex.as_deref().unwrap_or(&default), 1)?;
        if seg.dim() != a.xi.len() {
            return Err(Error::Dimension(format!(
                "ξ has {} entries, the segment lives in ℝ^{}",
                a.xi.len(),
                seg.dim()
            )));
        }
        let opts = a.common.sew_options(20, 1)?;
        for &n in &a.n_list {
            let fam = pure_area_family_1d(n, &a.xi)?;
            let r = young(&fam.f, &fam.g, &seg, &opts)?;
            let limit = fam.limit(&seg);
            let exact = fam.exact(&seg);
            let err = (r.value - limit).abs();
            not_converged(&mut o, &format!("n={n}"), &r.report);
            rows.push(vec![
                json!(n),
                json!(r.value),
                json!(exact),
                json!(limit),
                json!(err),
                json!(1.0 / n as f64),
            ]);
            items.push(json!({
                "n": n, "value": r.value, "exact": exact, "limit": limit, "error": err,
                "bound": 1.0 / n as f64, "status": to_json(&r.report.status),
            }));
            o.tables.push((format!("n={n}"), 1, r.report));
        }
        o.rows = Some((vec!["n", "value", "exact", "limit", "error", "bound"], rows));
    } else {
        let tri = parse_simplex(a.simplex.as_deref().unwrap_or("0,0;1,0;0,1"), 2)?;
        let opts = a.common.sew_options(10, 2)?;
        let quarter_area = 0.25 * crate::simplex::vol2(&tri);
        for &n in &a.n_list {
            let fam = pure_area_family_2d(n, a.eps)?;
            let r = zust(&fam.f, &fam.g, &fam.h, &tri, &opts)?;
            let exact = fam.exact(&tri)?;
            let err = (r.value - quarter_area).abs();
            not_converged(&mut o, &format!("n={n}"), &r.report);
            rows.push(vec![
                json!(n),
                json!(r.value),
                json!(exact),
                json!(quarter_area),
                json!(err),
            ]);
            items.push(json!({
                "n": n, "value": r.value, "exact": exact, "limit": quarter_area, "error": err,
                "status": to_json(&r.report.status),
            }));
            o.tables.push((format!("n={n}"), 2, r.report));
        }
        o.rows = Some((vec!["n", "value", "exact", "limit", "error"], rows));
    }
    o.body = json!({ "dim": a.dim, "rows": items });
    Ok(o)
}

fn cmd_gauge(a: &GaugeArgs) -> Result<Outcome> {
    if a.dim == 0 || a.dim > crate::simplex::MAX_DIM {
        return Err(Error::Dimension(format!("--dim {} is out of range", a.dim)));
    }
    let base = match a.germ {
        GaugeGerm::Young => young_germ(&scalar(&a.f, a.dim)?, &scalar(&a.g, a.dim)?),
        GaugeGerm::AbsIncrement => abs_increment(),
        GaugeGerm::Area => {
            if a.dim < 2 {
                return Err(Error::Dimension("the area germ needs --dim ≥ 2".into()));
            }
            signed_area(0, 1)
        }
    };
    let germ = if a.coboundary {
        coboundary(&base)?
    } else {
        base
    };
    let gauge = Gauge::diam_pow(germ.degree(), a.gamma)?;
    let sampler = SamplerConfig {
        seed: a.common.seed,
        ..if a.light {
            SamplerConfig::light(a.dim)
        } else {
            SamplerConfig::new(a.dim)
        }
    };
    let est = crate::germ::seminorm_estimate(&germ, &gauge, &sampler)?;
    let body = json!({
        "germ": format!("{:?}", a.germ).to_lowercase(),
        "coboundary": a.coboundary,
        "gamma": a.gamma,
        "degree": germ.degree(),
        "estimate": to_json(&est),
    });
    let mut o = Outcome::new("gauge", body);
    o.rows = Some((
        vec!["gamma", "degree", "seminorm", "samples", "witness"],
        vec![vec![
            json!(a.gamma),
            json!(germ.degree()),
            json!(est.value),
            json!(est.samples_used),
            json!(est.witness.clone().unwrap_or_default()),
        ]],
    ));
    Ok(o)
}

fn table_rows(r: &SewReport, degree: usize) -> Vec<[Value; 5]> {
    let mut prev: Option<f64> = None;
    r.levels
        .iter()
        .map(|l| {
            let rate = match (prev, l.increment) {
                (Some(p), Some(d)) if p > 0.0 => json!(d / p),
                _ => Value::Null,
            };
            prev = l.increment;
            let leaves = 1u64 << (degree * l.n);
            [
                json!(l.n),
                json!(leaves),
                json!(l.partial_sum),
                to_json(&l.increment),
                rate,
            ]
        })
        .collect()
}

const TABLE_HEADER: &str = "level,n_leaves,partial_sum,increment,rate_estimate";

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_csv_table(w: &mut dyn Write, r: &SewReport, degree: usize) -> std::io::Result<()> {
    writeln!(w, "{TABLE_HEADER}")?;
    for row in table_rows(r, degree) {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn render(o: &Outcome, common: &Common, out: &mut dyn Write) -> std::io::Result<()> {
    match common.format {
        Format::Json => {
            let mut doc = json!({ "schema": SCHEMA, "command": o.command });
            if let (Value::Object(d), Value::Object(b)) = (&mut doc, &o.body) {
                for (k, v) in b {
                    d.insert(k.clone(), v.clone());
                }
            }
            doc["ok"] = json!(o.ok);
            if common.table {
                let tables: Vec<Value> = o
                    .tables
                    .iter()
                    .map(|(name, k, r)| {
                        let rows: Vec<Value> = table_rows(r, *k)
                            .into_iter()
                            .map(|[level, n_leaves, partial_sum, increment, rate_estimate]| {
                                json!({
                                    "level": level, "n_leaves": n_leaves, "partial_sum": partial_sum,
                                    "increment": increment, "rate_estimate": rate_estimate,
                                })
                            })
                            .collect();
                        json!({ "name": name, "rows": rows })
                    })
                    .collect();
                doc["tables"] = Value::Array(tables);
            }
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).unwrap_or_default()
            )
        }
        Format::Csv => {
            if let Some((header, rows)) = &o.rows {
                writeln!(out, "{}", header.join(","))?;
                for r in rows {
                    let cells: Vec<String> = r.iter().map(csv_cell).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            if common.table || o.rows.is_none() {
                for (i, (name, k, r)) in o.tables.iter().enumerate() {
                    if i > 0 || o.rows.is_some() {
                        writeln!(out)?;
                    }
                    if o.tables.len() > 1 {
                        writeln!(out, "# {name}")?;
                    }
                    write_csv_table(out, r, *k)?;
                }
            }
            Ok(())
        }
    }
}
