use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use resultant_forge::codazzi::{
    degenerate_mu_check, random_config, sign_convention_check, vanishing_report, FrameConfig, RowSelection,
    SignConvention,
};
use resultant_forge::error::AlgebraError;
use resultant_forge::hypersurface::{
    theorem1_pipeline, theorem2_pipeline, CaseVIParams, CaseVParams, PipelineOptions, PipelineReport, Verdict,
};
use resultant_forge::parse::{parse_over, render_capped, ParseError, PolyOutput, PolySource};
use resultant_forge::poly::{Poly, VarTable};
use resultant_forge::rational::Rational;
use resultant_forge::resultant::resultant_with;
use resultant_forge::{sample, selfcheck};

use crate::GlobalOpts;

/// `println!` that ignores a closed stdout, so piping into `head` does not
/// panic.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! say_inline {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// Parameters or preconditions violated: exit 3.
    Params(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Params(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Params(m) => f.write_str(m),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::UnknownVariable(_) | AlgebraError::MissingAssignment(_) => CliError::Input(e.to_string()),
            _ => CliError::Params(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }

    fn of(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Outcome::Pass,
            Verdict::Fail => Outcome::Fail,
        }
    }
}

type CmdResult = Result<Outcome, CliError>;

/// Exact number from `p`, `p/q` or a terminating decimal such as `-1.25`.
pub fn parse_number(text: &str) -> Result<Rational, CliError> {
    let t = text.trim();
    let bad = || CliError::Input(format!("`{text}` is not an integer, fraction or decimal"));
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int = if int.is_empty() || int == "-" || int == "+" {
            Rational::zero()
        } else {
            int.parse::<Rational>().map_err(|_| bad())?.abs()
        };
        let scale = Rational::from(10).pow(frac.len() as u32);
        let frac: Rational = frac.parse().map_err(|_| bad())?;
        let value = int + frac / scale;
        return Ok(if negative { -value } else { value });
    }
    t.parse().map_err(|_| bad())
}

fn read_source(path: &Path) -> Result<PolySource, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    PolySource::from_text(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Parses several files over one table: the first file's variables in
/// order, then any new names from later files.
fn load_shared(paths: &[&Path]) -> Result<(Vec<PolySource>, Vec<Poly>), CliError> {
    let sources = paths.iter().map(|p| read_source(p)).collect::<Result<Vec<_>, _>>()?;
    let mut names: Vec<String> = Vec::new();
    for src in &sources {
        for v in &src.vars {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
    }
    let table = VarTable::new(names).map_err(|e| CliError::Input(e.to_string()))?;
    let polys = paths
        .iter()
        .zip(&sources)
        .map(|(path, src)| parse_over(src, &table).map_err(|e| CliError::Input(format!("{}: {e}", path.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((sources, polys))
}

fn emit_json(v: &Value) {
    say!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn emit_poly(g: &GlobalOpts, label: &str, p: &Poly, extra: Value) {
    let rendered = render_capped(p, g.max_terms);
    if g.json {
        let mut v = json!({ label: rendered });
        if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
            m.extend(e);
        }
        emit_json(&v);
    } else {
        print_rendered(&rendered);
    }
}

fn print_rendered(r: &PolyOutput) {
    match r {
        PolyOutput::Full { text, .. } => say!("{text}"),
        PolyOutput::Digest {
            terms,
            degree_map,
            sha256,
        } => say!("<{terms} terms, degrees {degree_map:?}, sha256 {sha256}>"),
    }
}

pub fn resultant(g: &GlobalOpts, f: &Path, gf: &Path, var: &str) -> CmdResult {
    let (sources, polys) = load_shared(&[f, gf])?;
    let (fp, gp) = (&polys[0], &polys[1]);
    for (path, src) in [f, gf].iter().zip(&sources) {
        if !src.vars.iter().any(|v| v == var) {
            return Err(CliError::Input(format!(
                "{}: variable `{var}` is not declared",
                path.display()
            )));
        }
    }
    let out = resultant_with(fp, gp, var, g.det.into())?;
    emit_poly(
        g,
        "resultant",
        &out.value,
        json!({
            "variable": var,
            "convention": out.convention,
            "matrix_size": out.matrix_size,
            "strategy": out.strategy.name(),
            "nonzero": !out.value.is_zero(),
        }),
    );
    Ok(Outcome::Pass)
}

fn pipeline_options(g: &GlobalOpts) -> PipelineOptions {
    PipelineOptions {
        strategy: g.det.into(),
        record_timings: !g.deterministic,
    }
}

fn emit_pipeline(g: &GlobalOpts, report: &PipelineReport) {
    let final_poly = report.final_poly().map(|p| render_capped(p, g.max_terms));
    if g.json {
        let mut v = serde_json::to_value(report).expect("reports serialize");
        if let Value::Object(m) = &mut v {
            m.insert(
                "final_polynomial".into(),
                serde_json::to_value(&final_poly).expect("serializes"),
            );
        }
        emit_json(&v);
        return;
    }
    say!("case {}", report.case);
    let params: Vec<String> = report.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    say!("params {}", params.join(" "));
    for s in &report.stages {
        let degs: Vec<String> = s.degree_map.iter().map(|(k, d)| format!("{k}:{d}")).collect();
        say!(
            "  stage {:<16} terms {:>7}  degrees [{}]  {}  {} ms",
            s.name,
            s.terms,
            degs.join(" "),
            if s.nonzero { "nonzero" } else { "ZERO" },
            s.millis
        );
        if let Some(note) = &s.note {
            say!("        {note}");
        }
    }
    for (k, c) in &report.proportionality_constants {
        say!("  constant {k} = {c}");
    }
    for c in &report.printed_vs_derived_diffs {
        let constant = c.constant.as_deref().unwrap_or("-");
        say!(
            "  compare {}: {:?} (constant {constant}, {} difference terms)",
            c.name,
            c.status,
            c.difference_terms
        );
    }
    for n in &report.notes {
        say!("  note: {n}");
    }
    if let Some(p) = &final_poly {
        say_inline!("final ({}) = ", report.final_stage);
        print_rendered(p);
    }
    say!("verdict {}", verdict_word(report.verdict));
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
    }
}

pub fn theorem1(g: &GlobalOpts, n: i64, r: i64, mu: &str, symbolic_mu: bool) -> CmdResult {
    let params = CaseVParams::new(n, r, parse_number(mu)?)?.with_symbolic_mu(symbolic_mu);
    let report = theorem1_pipeline(&params, &pipeline_options(g))?;
    emit_pipeline(g, &report);
    Ok(Outcome::of(report.verdict))
}

pub fn theorem2(g: &GlobalOpts, n: i64, r: i64, s: i64, mu: &str, k1: &str) -> CmdResult {
    let params = CaseVIParams::new(n, r, s, parse_number(mu)?, parse_number(k1)?)?;
    let report = theorem2_pipeline(&params, &pipeline_options(g))?;
    emit_pipeline(g, &report);
    Ok(Outcome::of(report.verdict))
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportKind {
    Vanishing,
    DegenerateMu,
    Signs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomKind {
    Distinct,
    Repeated,
}

#[derive(Args, Debug)]
pub struct CodazziArgs {
    #[arg(long)]
    pub n: usize,
    /// Real curvatures of e_3..e_{n-1}, comma separated.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "random")]
    pub lambdas: Option<String>,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub h: String,
    /// Real part of the complex curvature (only used with --no-post-lemma).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Drop the constant-curvature assumptions; rows with derivative terms
    /// become unavailable.
    #[arg(long)]
    pub no_post_lemma: bool,
    /// `all` or a comma-separated list of row tags such as `T23,SYM`.
    #[arg(long, default_value = "all")]
    pub rows: String,
    #[arg(long, value_enum, default_value_t = ReportKind::Vanishing)]
    pub report: ReportKind,
    /// Draw the curvatures from --seed instead of --lambdas.
    #[arg(long, value_enum)]
    pub random: Option<RandomKind>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Uniform)]
    pub convention: ConventionArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConventionArg {
    Uniform,
    Lorentz,
}

fn frame_config(g: &GlobalOpts, a: &CodazziArgs) -> Result<FrameConfig, CliError> {
    let cfg = match a.random {
        Some(kind) => {
            let mut rng = sample::rng(g.seed);
            random_config(&mut rng, a.n, kind == RandomKind::Repeated)?.with_post_lemma33(!a.no_post_lemma)
        }
        None => {
            let values = a
                .lambdas
                .as_deref()
                .unwrap_or_default()
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(parse_number)
                .collect::<Result<Vec<_>, _>>()?;
            FrameConfig::new(a.n, values, parse_number(&a.mu)?, parse_number(&a.h)?)?
                .with_post_lemma33(!a.no_post_lemma)
        }
    };
    let cfg = match &a.lambda {
        Some(l) => cfg.with_lambda(parse_number(l)?),
        None => cfg,
    };
    Ok(cfg.with_convention(match a.convention {
        ConventionArg::Uniform => SignConvention::Uniform,
        ConventionArg::Lorentz => SignConvention::Lorentz,
    }))
}

pub fn codazzi(g: &GlobalOpts, a: &CodazziArgs) -> CmdResult {
    let cfg = frame_config(g, a)?;
    match a.report {
        ReportKind::Vanishing => {
            let sel = RowSelection::parse(&a.rows)?;
            let rep = vanishing_report(&cfg, &sel)?;
            if g.json {
                emit_json(&serde_json::to_value(&rep).expect("reports serialize"));
            } else {
                say!(
                    "n={} rows={} unknowns={} nullspace_dim={}",
                    cfg.n(),
                    rep.rows_used,
                    rep.unknown_count,
                    rep.nullspace_dim
                );
                say!("forced zero ({}): {}", rep.forced_zero.len(), rep.forced_zero.join(" "));
                say!("missing ({}): {}", rep.missing.len(), rep.missing.join(" "));
                say!("exceptions ({}): {}", rep.exceptions.len(), rep.exceptions.join(" "));
                say!("survivors ({}): {}", rep.survivors.len(), rep.survivors.join(" "));
                say!("verdict {}", verdict_word(rep.verdict));
            }
            Ok(Outcome::of(rep.verdict))
        }
        ReportKind::DegenerateMu => {
            let rep = degenerate_mu_check(&cfg)?;
            if g.json {
                emit_json(&serde_json::to_value(&rep).expect("reports serialize"));
            } else {
                say!("e_n(mu) = 0 implied: {}", rep.gradient_mu_derivative_zero);
                for b in &rep.blocks {
                    say!(
                        "  block {} lambda={} squares_equal={} w12_forced_zero={} {}",
                        b.a,
                        b.lambda_a,
                        b.squares_equal,
                        b.omega12_forced_zero,
                        b.chain.join(" -> ")
                    );
                }
                say!("verdict {}", verdict_word(rep.verdict));
            }
            Ok(Outcome::of(rep.verdict))
        }
        ReportKind::Signs => {
            let checks = sign_convention_check(&cfg)?;
            let uniform_ok = checks
                .iter()
                .any(|c| c.convention == SignConvention::Uniform && c.diagonal_pairing && c.offdiagonal_pairing);
            if g.json {
                emit_json(
                    &json!({ "checks": checks, "verdict": verdict_word(if uniform_ok { Verdict::Pass } else { Verdict::Fail }) }),
                );
            } else {
                for c in &checks {
                    say!(
                        "{:<8} diagonal_pairing={} offdiagonal_pairing={}",
                        c.convention.name(),
                        c.diagonal_pairing,
                        c.offdiagonal_pairing
                    );
                }
            }
            Ok(if uniform_ok { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

pub fn selfcheck(g: &GlobalOpts) -> CmdResult {
    let rep = selfcheck::run(g.seed);
    if g.json {
        emit_json(&serde_json::to_value(&rep).expect("reports serialize"));
    } else {
        say!("seed {}", rep.seed);
        for c in &rep.checks {
            say!("  {:<24} {:>3}/{:<3} passed", c.name, c.passed, c.trials);
            if let Some(f) = &c.first_failure {
                say!("      first failure: {f}");
            }
        }
        say!("verdict {}", verdict_word(rep.verdict));
    }
    Ok(Outcome::of(rep.verdict))
}

fn parse_assignment(table: &Arc<VarTable>, text: &str) -> Result<BTreeMap<String, Rational>, CliError> {
    let mut out = BTreeMap::new();
    for part in text.split(',').filter(|s| !s.trim().is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("expected name=value, got `{part}`")))?;
        let name = name.trim();
        table.index_of(name).map_err(|e| CliError::Input(e.to_string()))?;
        out.insert(name.to_string(), parse_number(value)?);
    }
    Ok(out)
}

pub fn poly_eval(g: &GlobalOpts, file: &Path, at: &str) -> CmdResult {
    let p = load_shared(&[file])?.1.remove(0);
    let assignment = parse_assignment(p.vars(), at)?;
    let value = p.specialize(&assignment)?;
    emit_poly(g, "value", &value, json!({}));
    Ok(Outcome::Pass)
}

#[derive(Clone, Copy)]
pub enum Binary {
    Add,
    Mul,
}

pub fn poly_binary(g: &GlobalOpts, f: &Path, gf: &Path, op: Binary) -> CmdResult {
    let (_, polys) = load_shared(&[f, gf])?;
    let out = match op {
        Binary::Add => polys[0].checked_add(&polys[1])?,
        Binary::Mul => polys[0].checked_mul(&polys[1])?,
    };
    emit_poly(g, "result", &out, json!({}));
    Ok(Outcome::Pass)
}

pub fn poly_diff(g: &GlobalOpts, file: &Path, var: &str) -> CmdResult {
    let p = load_shared(&[file])?.1.remove(0);
    let d = p.partial_derivative(var).map_err(|e| CliError::Input(e.to_string()))?;
    emit_poly(g, "derivative", &d, json!({ "variable": var }));
    Ok(Outcome::Pass)
}
