//! Command-line front end for the `relans` workbench.
//!
//! [`run_command`] parses an argument vector, runs one command and returns the
//! exit code with the rendered report. Reports are TSV by default:
//! `# key=value` header lines, a column header, then one row per record.

pub mod reproduce;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relans::bose_mesner::BoseMesnerData;
use relans::cyclotomic;
use relans::design_spaces::{self, SearchMode, ShellSupport, Variant, WeightedSubset};
use relans::dual_polar_products;
use relans::schemes::{Scheme, SchemeSpec};
use relans::terwilliger::{self, TerwilligerContext};
use serde_json::{Map, Value};

/// Exit code for a verified or true result.
pub const EXIT_TRUE: i32 = 0;
/// Exit code for a refuted or false result.
pub const EXIT_FALSE: i32 = 1;
/// Exit code for usage and internal errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] relans::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "relans", version, about = "Relative designs in P- and Q-polynomial association schemes")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scheme parameters and eigenmatrix data.
    Scheme {
        #[command(subcommand)]
        action: SchemeAction,
    },
    /// Weighted subsets read from design files.
    Design {
        #[command(subcommand)]
        action: DesignAction,
    },
    /// Restricted dimensions of the design spaces on a shell support.
    Fisher {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Comma separated shell indices, e.g. `2,3`.
        #[arg(long)]
        shells: String,
        #[arg(long)]
        e: usize,
    },
    /// Decompose the standard module into irreducible T-modules.
    Decompose {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Exhaustive search for relative t-designs on a shell support.
    Search {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long)]
        shells: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value = "uniform")]
        mode: String,
        #[arg(long, default_value = "p")]
        variant: String,
    },
    /// Exhaustive gate and product checks in symplectic dual polar graphs.
    Dualpolar {
        #[command(subcommand)]
        action: DualPolarAction,
    },
    /// Character computations in Hamming schemes.
    Hamming {
        #[command(subcommand)]
        action: HammingAction,
    },
    /// Run a reproduction suite and report one row per claim.
    Reproduce {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = reproduce::DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SchemeAction {
    Info {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum DesignAction {
    Verify {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value = "p")]
        variant: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum DualPolarAction {
    Check {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value = "gates")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        u0: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum HammingAction {
    Characters {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value = "orthogonality")]
        check: String,
    },
}

/// Scheme selection flags shared by several commands.
#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// One of `hamming`, `johnson`, `dualpolarC`, `doob`.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub v: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Base vertex.
    #[arg(long, default_value_t = 0)]
    pub u0: usize,
}

impl SchemeArgs {
    pub fn spec(&self) -> CliResult<SchemeSpec> {
        let mut text = format!("family={}", self.family);
        for (key, val) in [("d", self.d), ("q", self.q), ("v", self.v), ("n", self.n), ("m", self.m)] {
            if let Some(val) = val {
                text.push_str(&format!(" {key}={val}"));
            }
        }
        Ok(text.parse()?)
    }
}

/// A tabular result with header metadata and a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Whether the command's claim was verified.
    pub verified: bool,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { meta: Vec::new(), columns: columns.to_vec(), rows: Vec::new(), verified: true }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join("\t"));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), Value::from(v.as_str()))).collect(),
                )
            })
            .collect();
        let mut top = Map::new();
        top.insert("meta".into(), Value::Object(meta));
        top.insert("rows".into(), Value::Array(rows));
        top.insert("verified".into(), Value::Bool(self.verified));
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("json values serialize");
        text.push('\n');
        text
    }
}

/// Exit code and captured output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `argv` (including the program name) and run the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_TRUE };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => Outcome {
            code: if report.verified { EXIT_TRUE } else { EXIT_FALSE },
            stdout: match cli.format {
                Format::Tsv => report.to_tsv(),
                Format::Json => report.to_json(),
            },
            stderr: String::new(),
        },
        Err(e) => Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Size the global rayon pool from `RELANS_THREADS` when it is set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("RELANS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("RELANS_THREADS must be a positive integer, got '{raw}'")))?;
    // a second initialisation in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Build the scheme, its Bose-Mesner data and the Terwilliger context at `u0`.
pub fn with_context<R>(
    spec: SchemeSpec,
    u0: usize,
    f: impl FnOnce(&TerwilligerContext<'_>) -> CliResult<R>,
) -> CliResult<R> {
    let s = Scheme::build(spec)?;
    let b = BoseMesnerData::primitive_idempotents(&s)?;
    let ctx = terwilliger::dual_matrices(&s, &b, u0)?;
    f(&ctx)
}

fn parse_shells(text: &str, d: usize) -> CliResult<ShellSupport> {
    let r = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad shell index '{t}'"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ShellSupport::new(r, d)?)
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn execute(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Scheme { action: SchemeAction::Info { scheme } } => scheme_info(scheme),
        Command::Design { action: DesignAction::Verify { file, t, variant } } => design_verify(file, *t, variant),
        Command::Fisher { scheme, shells, e } => fisher(scheme, shells, *e),
        Command::Decompose { scheme } => decompose(scheme),
        Command::Search { scheme, shells, t, max_size, mode, variant } => {
            search(scheme, shells, *t, *max_size, mode, variant)
        }
        Command::Dualpolar { action: DualPolarAction::Check { d, q, suite, u0 } } => dualpolar_check(*d, *q, suite, *u0),
        Command::Hamming { action: HammingAction::Characters { d, q, check } } => hamming_characters(*d, *q, check),
        Command::Reproduce { suite, seed } => reproduce::run(suite, *seed),
    }
}

fn scheme_info(args: &SchemeArgs) -> CliResult<Report> {
    let spec = args.spec()?;
    let s = Scheme::build(spec)?;
    let pn = s.intersection_numbers();
    let mut r = Report::new(&["key", "value"]).meta("scheme", spec);
    let mut put = |k: &str, v: String| r.push(vec![k.to_string(), v]);
    put("name", spec.short_name());
    put("n", s.n_vertices().to_string());
    put("d", s.classes().to_string());
    put("k", join(pn.valencies()));
    let opt = |xs: &Option<Vec<u64>>| xs.as_ref().map_or("-".to_string(), join);
    put("c", opt(&pn.c));
    put("a", opt(&pn.a));
    put("b", opt(&pn.b));
    match BoseMesnerData::primitive_idempotents(&s) {
        Ok(b) => {
            put("m", join(b.multiplicities()));
            put("theta", join(b.theta()));
            put("theta_star", join(b.theta_star()));
            put("q_polynomial", b.is_q_polynomial().to_string());
            put("formally_self_dual", b.formal_self_duality().to_string());
        }
        Err(e) => put("eigenmatrices", format!("unavailable: {e}")),
    }
    Ok(r)
}

fn parse_variant(text: &str) -> CliResult<Variant> {
    Ok(text.parse()?)
}

fn design_verify(path: &PathBuf, t: usize, variant: &str) -> CliResult<Report> {
    let variant = parse_variant(variant)?;
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let file = design_spaces::parse_design_file(&text)?;
    with_context(file.scheme, file.u0, |ctx| {
        let y = WeightedSubset::new(ctx, file.entries.clone())?;
        let ok = design_spaces::verify_relative_design(ctx, &y, t, variant)?;
        let mut r = Report::new(&["scheme", "u0", "size", "support", "t", "variant", "verdict"])
            .meta("file", path.display());
        r.push(vec![
            file.scheme.short_name(),
            file.u0.to_string(),
            y.len().to_string(),
            y.support().to_string(),
            t.to_string(),
            variant.to_string(),
            if ok { "design" } else { "not-a-design" }.into(),
        ]);
        r.verified = ok;
        Ok(r)
    })
}

fn fisher(args: &SchemeArgs, shells: &str, e: usize) -> CliResult<Report> {
    let spec = args.spec()?;
    with_context(spec, args.u0, |ctx| {
        let support = parse_shells(shells, ctx.classes())?;
        let fb = design_spaces::fisher_bounds(ctx, &support, e)?;
        let mut r = Report::new(&["quantity", "value"]).meta("scheme", spec).meta("shells", &support).meta("e", e);
        for (k, v) in [("hom_bound", fb.hom_bound), ("l_bound", fb.l_bound), ("k_sum", fb.k_sum), ("m_sum", fb.m_sum)] {
            r.push(vec![k.into(), v.to_string()]);
        }
        let hom_ok = fb.hom_bound == fb.k_sum;
        let l_ok = fb.l_bound == fb.m_sum;
        r.push(vec!["hom_formula".into(), hom_ok.to_string()]);
        r.push(vec!["l_formula".into(), l_ok.to_string()]);
        r.verified = hom_ok && l_ok;
        Ok(r)
    })
}

fn decompose(args: &SchemeArgs) -> CliResult<Report> {
    let spec = args.spec()?;
    with_context(spec, args.u0, |ctx| {
        let dec = terwilliger::decompose_standard_module(ctx)?;
        let n = ctx.scheme().n_vertices();
        let mut r = Report::new(&["module", "dim", "rho", "rho_star", "delta", "thin", "dual_thin"])
            .meta("scheme", spec)
            .meta("u0", args.u0);
        for (i, w) in dec.modules.iter().enumerate() {
            r.push(vec![
                i.to_string(),
                w.dim().to_string(),
                w.endpoint().to_string(),
                w.dual_endpoint().to_string(),
                w.diameter().to_string(),
                w.is_thin().to_string(),
                w.is_dual_thin().to_string(),
            ]);
        }
        let ok = dec.total_dim() == n && dec.all_certified() && dec.pairwise_orthogonal();
        r = r.meta("total_dim", dec.total_dim()).meta("certified", ok);
        r.verified = ok;
        Ok(r)
    })
}

fn search(
    args: &SchemeArgs,
    shells: &str,
    t: usize,
    max_size: usize,
    mode: &str,
    variant: &str,
) -> CliResult<Report> {
    let spec = args.spec()?;
    let mode: SearchMode = mode.parse()?;
    let variant = parse_variant(variant)?;
    with_context(spec, args.u0, |ctx| {
        let support = parse_shells(shells, ctx.classes())?;
        let rep = design_spaces::design_search(ctx, &support, t, variant, max_size, mode)?;
        let mut r = Report::new(&["size", "vertices", "weights", "verified", "fisher_bound", "fisher_holds"])
            .meta("scheme", spec)
            .meta("shells", &support)
            .meta("t", t)
            .meta("variant", variant)
            .meta("candidates", rep.candidates)
            .meta("designs", rep.designs.len())
            .meta("minimum_size", rep.minimum_size().map_or("-".to_string(), |m| m.to_string()));
        let mut ok = true;
        for found in &rep.designs {
            let (bound, holds) = match found.fisher {
                Some((b, h)) => (b.to_string(), h.to_string()),
                None => ("-".into(), "-".into()),
            };
            ok &= found.verified && (!rep.fisher_theorem_applies || found.fisher.is_none_or(|(_, h)| h));
            r.push(vec![
                found.design.len().to_string(),
                join(found.design.entries().iter().map(|(x, _)| x)),
                join(found.design.entries().iter().map(|(_, w)| w)),
                found.verified.to_string(),
                bound,
                holds,
            ]);
        }
        r.verified = ok;
        Ok(r)
    })
}

fn dualpolar_check(d: usize, q: usize, suite: &str, u0: usize) -> CliResult<Report> {
    if suite != "gates" {
        return Err(CliError::Usage(format!("unknown dual polar suite '{suite}', expected 'gates'")));
    }
    let spec = SchemeSpec::DualPolarC { d, q };
    let s = Scheme::build(spec)?;
    let checks = dual_polar_products::gate_suite(&s, u0)?;
    let mut r = Report::new(&["check", "cases", "failures", "verdict"]).meta("scheme", spec).meta("u0", u0);
    for c in &checks {
        r.push(vec![c.name.into(), c.cases.to_string(), c.failures.to_string(), verdict(c.passed()).into()]);
    }
    r.verified = checks.iter().all(|c| c.passed());
    Ok(r)
}

fn hamming_characters(d: usize, q: usize, check: &str) -> CliResult<Report> {
    if check != "orthogonality" {
        return Err(CliError::Usage(format!("unknown character check '{check}', expected 'orthogonality'")));
    }
    let spec = SchemeSpec::Hamming { d, q };
    let s = Scheme::build(spec)?;
    let rows = cyclotomic::orthogonality_check(&s)?;
    let mut r = Report::new(&["i", "j", "pairs", "failures"]).meta("scheme", spec);
    for row in &rows {
        r.push(vec![row.i.to_string(), row.j.to_string(), row.pairs.to_string(), (row.failures + row.mismatches).to_string()]);
    }
    r.verified = rows.iter().all(|row| row.failures == 0 && row.mismatches == 0);
    Ok(r)
}

pub(crate) fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}
