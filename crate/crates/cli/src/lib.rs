//! Front end of the `exthyp` binary.
//!
//! [`run`] takes the argument vector and returns what the process should
//! print and its exit code, so tests can drive it without spawning.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use exthyp_core::frac::{rl_derivative_closed, rl_integral_closed, FracCase, FracOp};
use exthyp_core::gamma::{gamma_p, lower_incomplete, upper_incomplete, ExtGammaArgs};
use exthyp_core::genfun::{gf_lhs, gf_rhs, GenFunCase, GenFunTheorem};
use exthyp_core::hyp::{eval_hyp, DeltaBlock, Head, HypSpec, NumericControls};
use exthyp_core::pochhammer::{poch_lower, poch_upper, HeadKind, PochArgs};
use exthyp_core::report::{Status, VerificationReport};
use exthyp_core::suite::{run_suite, Suite, SuiteOptions, Summary, DEFAULT_SEED};
use exthyp_core::Error;

pub mod json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_FAIL: i32 = 4;

pub const FUNCTIONS: [&str; 8] = ["gamma_p", "lower", "upper", "poch_lower", "poch_upper", "hyp", "genfun", "frac"];

#[derive(Debug, Parser)]
#[command(name = "exthyp", version, about = "Extended incomplete gamma and hypergeometric functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Relative tolerance of quadrature and series truncation.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    max_subdiv: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one function at one point.
    Eval {
        #[command(flatten)]
        common: Common,
        /// One of gamma_p, lower, upper, poch_lower, poch_upper, hyp, genfun, frac.
        function: String,
        /// Parameters as key=value.
        params: Vec<String>,
    },
    /// Evaluate along one swept parameter: `sweep=VAR range=A..B steps=N`.
    Table {
        #[command(flatten)]
        common: Common,
        function: String,
        params: Vec<String>,
    },
    /// Run an identity suite: all, gamma, pochhammer, hyp, reps, genfun or frac.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(default_value = "all")]
        suite: String,
        /// `tol=T` overrides every case tolerance; `seed=S` reseeds random cases.
        params: Vec<String>,
    },
}

/// Everything a finished invocation wants to emit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn usage(msg: impl Into<String>) -> Self {
        let mut stderr = msg.into();
        stderr.push('\n');
        stderr.push_str(USAGE);
        Self { stdout: String::new(), stderr, code: EXIT_USAGE }
    }

    fn error(e: &Error) -> Self {
        Self { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(e) }
    }
}

const USAGE: &str = "usage: exthyp <eval|table|verify> [--format text|csv|json] [--rel-tol R] [--abs-tol A] \
[--max-terms N] [--max-subdiv N] key=value...\n";

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Pole(_) | Error::Inadmissible(_) => EXIT_DOMAIN,
        Error::NonConvergence { .. } | Error::Divergence(_) | Error::MaxTermsExceeded(_) => EXIT_NONCONVERGENCE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Pole(_) => "pole",
        Error::Inadmissible(_) => "inadmissible",
        Error::NonConvergence { .. } => "non-convergence",
        Error::Divergence(_) => "divergence",
        Error::MaxTermsExceeded(_) => "max-terms",
    }
}

pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome { stdout: String::new(), stderr: text, code: EXIT_USAGE },
            };
        }
    };
    match cli.command {
        Command::Eval { common, function, params } => {
            with_setup(&common, &params, |ctl, p| cmd_eval(&function, p, ctl, common.format))
        }
        Command::Table { common, function, params } => {
            with_setup(&common, &params, |ctl, p| cmd_table(&function, p, ctl, common.format))
        }
        Command::Verify { common, suite, params } => {
            with_setup(&common, &params, |ctl, p| cmd_verify(&suite, p, ctl, common.format))
        }
    }
}

fn with_setup(common: &Common, raw: &[String], f: impl FnOnce(NumericControls, Params) -> Outcome) -> Outcome {
    let controls = match controls_of(common) {
        Ok(c) => c,
        Err(msg) => return Outcome::usage(msg),
    };
    match Params::parse(raw) {
        Ok(p) => f(controls, p),
        Err(msg) => Outcome::usage(msg),
    }
}

fn controls_of(c: &Common) -> std::result::Result<NumericControls, String> {
    let mut ctl = NumericControls::default();
    if let Some(r) = c.rel_tol {
        ctl.quad.rel_tol = r;
        ctl.series.rel_tol = r;
    }
    if let Some(a) = c.abs_tol {
        ctl.quad.abs_tol = a;
    }
    if let Some(n) = c.max_terms {
        ctl.series.max_terms = n;
    }
    if let Some(n) = c.max_subdiv {
        ctl.quad.max_subdivisions = n;
    }
    ctl.validate().map_err(|e| e.to_string())?;
    Ok(ctl)
}

/// `key=value` arguments; each key may be consumed once.
#[derive(Debug, Clone, Default)]
pub struct Params {
    map: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(raw: &[String]) -> std::result::Result<Self, String> {
        let mut map = BTreeMap::new();
        let mut it = raw.iter();
        while let Some(arg) = it.next() {
            // Also accept the spaced form `sweep VAR A..B`.
            if arg == "sweep" {
                let var = it.next().ok_or("sweep needs a variable name")?;
                let range = it.next().ok_or("sweep needs a range A..B")?;
                insert(&mut map, "sweep", var)?;
                insert(&mut map, "range", range)?;
                continue;
            }
            let (k, v) = arg.split_once('=').ok_or_else(|| format!("expected key=value, got {arg:?}"))?;
            insert(&mut map, k, v)?;
        }
        Ok(Self { map })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn take_any(&mut self, keys: &[&str]) -> std::result::Result<Option<String>, String> {
        let found: Vec<&str> = keys.iter().copied().filter(|k| self.map.contains_key(*k)).collect();
        match found.as_slice() {
            [] => Ok(None),
            [k] => Ok(self.take(k)),
            _ => Err(format!("keys {found:?} are aliases; give only one")),
        }
    }

    fn num(&mut self, key: &str) -> std::result::Result<f64, String> {
        let v = self.take(key).ok_or_else(|| format!("missing parameter {key}"))?;
        number(key, &v)
    }

    fn num_or(&mut self, key: &str, default: f64) -> std::result::Result<f64, String> {
        match self.take(key) {
            Some(v) => number(key, &v),
            None => Ok(default),
        }
    }

    fn count_or(&mut self, key: &str, default: usize) -> std::result::Result<usize, String> {
        match self.take(key) {
            Some(v) => v.parse().map_err(|_| format!("{key} must be a non-negative integer, got {v:?}")),
            None => Ok(default),
        }
    }

    fn list(&mut self, key: &str) -> std::result::Result<Vec<f64>, String> {
        match self.take(key) {
            None => Ok(Vec::new()),
            Some(v) if v.is_empty() => Ok(Vec::new()),
            Some(v) => v.split(',').map(|s| number(key, s)).collect(),
        }
    }

    /// `N:λ` pairs separated by commas.
    fn blocks(&mut self, key: &str) -> std::result::Result<Vec<DeltaBlock>, String> {
        match self.take(key) {
            None => Ok(Vec::new()),
            Some(v) if v.is_empty() => Ok(Vec::new()),
            Some(v) => v
                .split(',')
                .map(|item| {
                    let (n, l) =
                        item.split_once(':').ok_or_else(|| format!("{key} entries are N:lambda, got {item:?}"))?;
                    let n: usize =
                        n.parse().map_err(|_| format!("block size in {key} must be an integer, got {n:?}"))?;
                    Ok(DeltaBlock::new(n, number(key, l)?))
                })
                .collect(),
        }
    }

    fn set(&mut self, key: &str, value: f64) {
        self.map.insert(key.to_string(), value.to_string());
    }

    fn finish(&self) -> std::result::Result<(), String> {
        match self.map.keys().next() {
            None => Ok(()),
            Some(_) => {
                Err(format!("unknown parameter(s): {}", self.map.keys().cloned().collect::<Vec<_>>().join(", ")))
            }
        }
    }
}

fn insert(map: &mut BTreeMap<String, String>, k: &str, v: &str) -> std::result::Result<(), String> {
    if k.is_empty() {
        return Err("empty parameter name".into());
    }
    if map.insert(k.to_string(), v.to_string()).is_some() {
        return Err(format!("parameter {k} given twice"));
    }
    Ok(())
}

fn number(key: &str, v: &str) -> std::result::Result<f64, String> {
    let x: f64 = v.trim().parse().map_err(|_| format!("{key} must be a number, got {v:?}"))?;
    if !x.is_finite() {
        return Err(format!("{key} must be finite, got {v:?}"));
    }
    Ok(x)
}

/// One evaluated point with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub err_estimate: f64,
    pub series_terms: usize,
    pub quad_evals: usize,
}

/// A fully parsed evaluation target.
#[derive(Debug, Clone)]
enum Target {
    GammaP { s: f64, p: f64 },
    Lower(ExtGammaArgs),
    Upper(ExtGammaArgs),
    PochLower(PochArgs),
    PochUpper(PochArgs),
    Hyp(HypSpec),
    GenFun(GenFunCase),
    Frac(FracCase),
}

fn kind_of(s: &str) -> std::result::Result<HeadKind, String> {
    match s {
        "lower" => Ok(HeadKind::Lower),
        "upper" => Ok(HeadKind::Upper),
        "complete" => Ok(HeadKind::Complete),
        other => Err(format!("kind must be lower, upper or complete, got {other:?}")),
    }
}

fn spec_of(p: &mut Params, default_kind: HeadKind) -> std::result::Result<HypSpec, String> {
    let kind = match p.take("kind") {
        Some(k) => kind_of(&k)?,
        None => default_kind,
    };
    let alpha = match p.take_any(&["alpha1", "alpha"])? {
        Some(v) => number("alpha1", &v)?,
        None => return Err("missing parameter alpha1".into()),
    };
    let x = p.num_or("x", 0.0)?;
    let head_p = p.num_or("p", 0.0)?;
    let mut spec = HypSpec::new(kind, Head::new(alpha, x, head_p));
    spec.num = p.list("num")?;
    spec.den = p.list("den")?;
    spec.delta_num = p.blocks("delta_num")?;
    spec.delta_den = p.blocks("delta_den")?;
    spec.z = p.num_or("z", 0.0)?;
    Ok(spec)
}

fn target_of(function: &str, p: &mut Params) -> std::result::Result<Target, String> {
    let t = match function {
        "gamma_p" => Target::GammaP { s: p.num("s")?, p: p.num_or("p", 0.0)? },
        "lower" | "upper" => {
            let args = ExtGammaArgs::new(p.num("s")?, p.num("x")?, p.num_or("p", 0.0)?);
            if function == "lower" {
                Target::Lower(args)
            } else {
                Target::Upper(args)
            }
        }
        "poch_lower" | "poch_upper" => {
            let args = PochArgs::new(p.num("lambda")?, p.num("nu")?, p.num("x")?, p.num_or("p", 0.0)?);
            if function == "poch_lower" {
                Target::PochLower(args)
            } else {
                Target::PochUpper(args)
            }
        }
        "hyp" => Target::Hyp(spec_of(p, HeadKind::Upper)?),
        "genfun" => {
            let name = p.take("theorem").ok_or("missing parameter theorem")?;
            let theorem = GenFunTheorem::parse(&name).ok_or_else(|| {
                let names: Vec<_> = GenFunTheorem::ALL.iter().map(|t| t.name()).collect();
                format!("theorem must be one of {}, got {name:?}", names.join(", "))
            })?;
            let lambda = p.num("lambda")?;
            let n_block = p.count_or("N", 1)?;
            let t = p.num_or("t", 0.0)?;
            let m_outer = p.take("m_outer");
            let base = spec_of(p, HeadKind::Upper)?;
            let mut case = GenFunCase::new(theorem, lambda, n_block, base, t);
            if let Some(m) = m_outer {
                case = case.with_m_outer(m.parse().map_err(|_| format!("m_outer must be an integer, got {m:?}"))?);
            }
            Target::GenFun(case)
        }
        "frac" => {
            let op = match p.take("op").as_deref() {
                None | Some("integral") => FracOp::Integral,
                Some("derivative") => FracOp::Derivative,
                Some(other) => return Err(format!("op must be integral or derivative, got {other:?}")),
            };
            let a = p.num_or("a", 0.0)?;
            let rho = p.num("rho")?;
            let mu = p.num("mu")?;
            let omega = p.num_or("omega", 0.0)?;
            let y = p.num("y")?;
            let spec = spec_of(p, HeadKind::Upper)?;
            Target::Frac(FracCase { a, rho, mu, omega, y, spec, op })
        }
        other => return Err(format!("unknown function {other:?}; expected one of {}", FUNCTIONS.join(", "))),
    };
    Ok(t)
}

fn evaluate(target: &Target, ctl: &NumericControls) -> exthyp_core::Result<Evaluation> {
    let quad = |r: exthyp_core::quad::QuadResult| Evaluation {
        value: r.value,
        err_estimate: r.err_estimate,
        series_terms: 0,
        quad_evals: r.n_evals,
    };
    let q = &ctl.quad;
    Ok(match target {
        Target::GammaP { s, p } => quad(gamma_p(*s, *p, q)?),
        Target::Lower(a) => quad(lower_incomplete(*a, q)?),
        Target::Upper(a) => quad(upper_incomplete(*a, q)?),
        Target::PochLower(a) => quad(poch_lower(*a, q)?),
        Target::PochUpper(a) => quad(poch_upper(*a, q)?),
        Target::Hyp(spec) => {
            let s = eval_hyp(spec, ctl)?;
            Evaluation { value: s.value, err_estimate: s.err_estimate, series_terms: s.terms, quad_evals: s.quad_evals }
        }
        Target::GenFun(case) => {
            let s = gf_lhs(case, ctl)?;
            Evaluation {
                value: s.value,
                err_estimate: s.tail_bound,
                series_terms: s.inner_terms,
                quad_evals: s.quad_evals,
            }
        }
        Target::Frac(case) => {
            let value = match case.op {
                FracOp::Integral => rl_integral_closed(case, ctl)?,
                FracOp::Derivative => rl_derivative_closed(case, ctl)?,
            };
            Evaluation { value, err_estimate: f64::NAN, series_terms: 0, quad_evals: 0 }
        }
    })
}

/// Extra scalar reported next to the value: the right side of a
/// generating function.
fn companion(target: &Target, ctl: &NumericControls) -> Option<(&'static str, f64)> {
    match target {
        Target::GenFun(case) => Some(("rhs", gf_rhs(case, ctl).map(|r| r.value).unwrap_or(f64::NAN))),
        _ => None,
    }
}

/// Shortest-exact scalar rendering: 17 significant digits, or `inf`/`-inf`/`nan`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn cmd_eval(function: &str, mut p: Params, ctl: NumericControls, format: Format) -> Outcome {
    let target = match target_of(function, &mut p).and_then(|t| p.finish().map(|_| t)) {
        Ok(t) => t,
        Err(msg) => return Outcome::usage(msg),
    };
    let e = match evaluate(&target, &ctl) {
        Ok(e) => e,
        Err(err) => return Outcome::error(&err),
    };
    let extra = companion(&target, &ctl);
    let mut out = String::new();
    match format {
        Format::Text => {
            writeln!(out, "{}", fmt_num(e.value)).unwrap();
            writeln!(out, "err_estimate {}", fmt_num(e.err_estimate)).unwrap();
            writeln!(out, "series_terms {}", e.series_terms).unwrap();
            writeln!(out, "quad_evals {}", e.quad_evals).unwrap();
            if let Some((k, v)) = extra {
                writeln!(out, "{k} {}", fmt_num(v)).unwrap();
            }
        }
        Format::Csv => {
            let mut header = vec!["function", "value", "err_estimate", "series_terms", "quad_evals"];
            let mut row = vec![
                function.to_string(),
                fmt_num(e.value),
                fmt_num(e.err_estimate),
                e.series_terms.to_string(),
                e.quad_evals.to_string(),
            ];
            if let Some((k, v)) = extra {
                header.push(k);
                row.push(fmt_num(v));
            }
            out = csv_text(&[header.iter().map(|s| s.to_string()).collect(), row]);
        }
        Format::Json => {
            let mut obj = json::Object::new();
            obj.str("function", function)
                .num("value", e.value)
                .num("err_estimate", e.err_estimate)
                .int("series_terms", e.series_terms)
                .int("quad_evals", e.quad_evals);
            if let Some((k, v)) = extra {
                obj.num(k, v);
            }
            out = obj.finish();
            out.push('\n');
        }
    }
    Outcome::ok(out)
}

fn csv_text(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is utf-8")
}

/// `steps + 1` evenly spaced points over `[start, stop]`.
pub fn sweep_points(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![start];
    }
    (0..=steps).map(|i| if i == steps { stop } else { start + (stop - start) * i as f64 / steps as f64 }).collect()
}

fn parse_range(r: &str) -> std::result::Result<(f64, f64), String> {
    // Splitting on the last ".." keeps negative and decimal bounds intact.
    let (a, b) = r.rsplit_once("..").ok_or_else(|| format!("range must be A..B, got {r:?}"))?;
    Ok((number("range", a)?, number("range", b)?))
}

fn cmd_table(function: &str, mut p: Params, ctl: NumericControls, format: Format) -> Outcome {
    let parsed = (|| {
        let var = p.take("sweep").ok_or("table needs sweep=VAR")?;
        let (start, stop) = parse_range(&p.take("range").ok_or("table needs range=A..B")?)?;
        let steps = p.count_or("steps", 10)?;
        if p.map.contains_key(&var) {
            return Err(format!("{var} is swept; do not also fix it"));
        }
        let points = sweep_points(start, stop, steps);
        // Parse once up front so bad or unknown keys fail as usage errors.
        let mut probe = p.clone();
        probe.set(&var, start);
        target_of(function, &mut probe)?;
        if probe.map.contains_key(&var) {
            return Err(format!("{function} has no parameter {var}"));
        }
        probe.finish()?;
        Ok::<_, String>((var, points))
    })();
    let (var, points) = match parsed {
        Ok(v) => v,
        Err(msg) => return Outcome::usage(msg),
    };

    struct Row {
        at: f64,
        result: exthyp_core::Result<Evaluation>,
    }
    let rows: Vec<Row> = points
        .iter()
        .map(|&at| {
            let mut q = p.clone();
            q.set(&var, at);
            let target = target_of(function, &mut q).expect("validated above");
            Row { at, result: evaluate(&target, &ctl) }
        })
        .collect();
    let status = |r: &Row| match &r.result {
        Ok(_) => "ok",
        Err(e) => error_kind(e),
    };
    let fields = |r: &Row| match &r.result {
        Ok(e) => (e.value, e.err_estimate),
        Err(_) => (f64::NAN, f64::NAN),
    };

    let mut out = String::new();
    match format {
        Format::Text => {
            writeln!(out, "{:>24}  {:>24}  {:>24}  status", var, "value", "err_estimate").unwrap();
            for r in &rows {
                let (v, e) = fields(r);
                writeln!(out, "{:>24}  {:>24}  {:>24}  {}", fmt_num(r.at), fmt_num(v), fmt_num(e), status(r)).unwrap();
            }
        }
        Format::Csv => {
            let mut table = vec![vec![var.clone(), "value".into(), "err_estimate".into(), "status".into()]];
            for r in &rows {
                let (v, e) = fields(r);
                table.push(vec![fmt_num(r.at), fmt_num(v), fmt_num(e), status(r).into()]);
            }
            out = csv_text(&table);
        }
        Format::Json => {
            for r in &rows {
                let (v, e) = fields(r);
                let mut obj = json::Object::new();
                obj.num(&var, r.at).num("value", v).num("err_estimate", e).str("status", status(r));
                out.push_str(&obj.finish());
                out.push('\n');
            }
        }
    }
    Outcome::ok(out)
}

fn cmd_verify(suite: &str, mut p: Params, ctl: NumericControls, format: Format) -> Outcome {
    let parsed = (|| {
        let suite: Suite = suite
            .parse()
            .map_err(|_| format!("unknown suite {suite:?}; expected one of {}", Suite::NAMES.join(", ")))?;
        let tol = match p.take("tol") {
            Some(v) => {
                let t = number("tol", &v)?;
                if t <= 0.0 {
                    return Err(format!("tol must be positive, got {t}"));
                }
                Some(t)
            }
            None => None,
        };
        let seed = match p.take("seed") {
            Some(v) => v.parse().map_err(|_| format!("seed must be an unsigned integer, got {v:?}"))?,
            None => DEFAULT_SEED,
        };
        p.finish()?;
        Ok::<_, String>((suite, SuiteOptions { controls: ctl, tol, seed }))
    })();
    let (suite, opts) = match parsed {
        Ok(v) => v,
        Err(msg) => return Outcome::usage(msg),
    };
    let reports = run_suite(suite, &opts);
    let summary = Summary::of(&reports);
    let out = render_reports(&reports, &summary, format);
    Outcome { stdout: out, stderr: String::new(), code: if summary.failed == 0 { EXIT_OK } else { EXIT_FAIL } }
}

pub fn render_reports(reports: &[VerificationReport], summary: &Summary, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            for r in reports {
                out.push_str(&json::report_line(r));
                out.push('\n');
            }
            let mut obj = json::Object::new();
            obj.int("passed", summary.passed).int("failed", summary.failed).int("skipped", summary.skipped);
            out.push_str(&obj.finish());
            out.push('\n');
        }
        Format::Csv => {
            let mut table = vec![json::REPORT_KEYS.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
            for r in reports {
                table.push(vec![
                    r.identity_id.clone(),
                    fmt_num(r.lhs),
                    fmt_num(r.rhs),
                    fmt_num(r.abs_err),
                    fmt_num(r.rel_err),
                    fmt_num(r.tol),
                    r.status.to_string(),
                    r.series_terms.to_string(),
                    r.quad_evals.to_string(),
                ]);
            }
            out = csv_text(&table);
        }
        Format::Text => {
            for r in reports {
                let err = if r.status == Status::Skipped { "-".to_string() } else { format!("{:.3e}", r.rel_err) };
                writeln!(out, "{:<7} {:>10} {}", r.status, err, r.identity_id).unwrap();
            }
            writeln!(out, "passed {} failed {} skipped {}", summary.passed, summary.failed, summary.skipped).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_includes_both_ends() {
        assert_eq!(sweep_points(0.0, 2.0, 2), vec![0.0, 1.0, 2.0]);
        assert_eq!(sweep_points(0.3, 0.9, 3).last(), Some(&0.9));
        assert_eq!(sweep_points(1.0, 5.0, 0), vec![1.0]);
    }

    #[test]
    fn ranges_with_signs() {
        assert_eq!(parse_range("-1..2").unwrap(), (-1.0, 2.0));
        assert_eq!(parse_range("0.5..-0.5").unwrap(), (0.5, -0.5));
        assert!(parse_range("1-2").is_err());
    }

    #[test]
    fn params_reject_duplicates_and_bare_words() {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert!(Params::parse(&s(&["x=1", "x=2"])).is_err());
        assert!(Params::parse(&s(&["x"])).is_err());
        let p = Params::parse(&s(&["sweep", "x", "0..2", "steps=2"])).unwrap();
        assert_eq!(p.map.get("range").map(String::as_str), Some("0..2"));
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(2.0), "2.0000000000000000e0");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_num(-0.1).parse::<f64>().unwrap(), -0.1);
    }
}
