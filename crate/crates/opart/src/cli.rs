//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 when every check passes, 1 when some inequality fails (the
//! first counterexample is printed in full on stderr), 2 for usage, format
//! and cache errors and for verdicts left indeterminate after escalation.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use opart_core::exact::sparse_table;
use opart_core::numerics::DEFAULT_DIGITS;
use opart_core::series::{default_terms, ZuckermanSeries};
use opart_core::verify::{asymptotic_table, CheckKind, RangeReport};
use opart_core::{AlphaParam, OverpartitionTable, PrecisionContext};

use crate::cache::{build_table, save_table, table_for, Method};
use crate::error::{CliError, Result};
use crate::parallel::{self, default_jobs};
use crate::report::{record_detail, render, render_asymptotic, summary, Format, Header};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "opart", version, about = "Overpartition tables, certified estimates and log-convexity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Working precision in significant decimal digits (at least 50)
    #[arg(long, global = true, env = "OPART_DIGITS", default_value_t = DEFAULT_DIGITS)]
    pub digits: u32,

    /// Table cache file; read when present, written when computed
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; defaults to the available cores
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute p̄(0..=max) and optionally write it to the cache
    Compute {
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Truncated Zuckerman series at n with Engel's error radius
    Estimate {
        #[arg(long)]
        n: u64,
        /// Sum odd k up to this bound; defaults to the smallest odd k >= ceil(sqrt(n))
        #[arg(long)]
        terms: Option<u64>,
    },
    /// Run one inequality check over a range of centres
    Verify(VerifyArgs),
    /// Tabulate derived quantities
    Table {
        #[command(subcommand)]
        table: TableCommand,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: CheckName,
    /// Exponent α as a decimal or fraction
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub from: Option<u64>,
    #[arg(long)]
    pub to: Option<u64>,
    /// Allow ranges below the claimed threshold (reported as no paper claim)
    #[arg(long)]
    pub exploratory: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Theorem1,
    Corollary1,
    Corollary2,
    Corollary3,
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Lemma6,
    Logconcavity,
}

#[derive(Subcommand, Debug)]
pub enum TableCommand {
    /// n^(5/2)·Δ² log r_α at the given centres, with the distance to 3π/4
    Asymptotic {
        #[arg(long, default_value = "0")]
        alpha: String,
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<u64>,
    },
}

/// Parses `args` and runs the command, writing reports to `out` and
/// diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return EXIT_PASS;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_ERROR;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = &cli.global;
    let ctx = PrecisionContext::with_digits(g.digits)?;
    let jobs = g.jobs.unwrap_or_else(default_jobs).max(1);
    match &cli.command {
        Command::Compute { max, method } => {
            let table = build_table(*max, *method)?;
            if let Some(path) = &g.cache {
                save_table(path, &table)?;
            }
            let digits = table.value(*max)?.to_string().len();
            emit(
                g,
                out,
                &format!(
                    "p̄({max}) has {digits} digits (method {}, checksum {})\n",
                    method_name(*method),
                    table.checksum()
                ),
            )?;
            Ok(EXIT_PASS)
        }
        Command::Estimate { n, terms } => estimate(g, &ctx, *n, *terms, out),
        Command::Verify(args) => verify(g, &ctx, jobs, args, out, err),
        Command::Table {
            table: TableCommand::Asymptotic { alpha, points },
        } => {
            let alpha = AlphaParam::parse(alpha)?;
            let max = points.iter().copied().max().unwrap_or(2);
            let table = table_for(g.cache.as_deref(), max + 1)?;
            let rows = asymptotic_table(&alpha, points, &table, &ctx)?;
            let header = Header {
                check: "asymptotic".into(),
                alpha: Some(alpha.to_string()),
                digits: ctx.digits(),
                table_checksum: Some(table.checksum()),
            };
            emit(g, out, &render_asymptotic(&rows, &header, g.format))?;
            Ok(EXIT_PASS)
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Series => "series",
        Method::Sparse => "sparse",
        Method::Both => "both",
    }
}

fn emit(g: &GlobalArgs, out: &mut dyn Write, text: &str) -> Result<()> {
    match &g.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn estimate(g: &GlobalArgs, ctx: &PrecisionContext, n: u64, terms: Option<u64>, out: &mut dyn Write) -> Result<i32> {
    let terms = terms.unwrap_or_else(|| default_terms(n));
    let est = ZuckermanSeries::new(*ctx)?.estimate(n, terms)?;
    let exact = sparse_table(n);
    let exact = exact.value(n)?;
    let contains = est.contains(exact)?;
    let sig = (ctx.digits() as usize).min(40);
    let text = format!(
        "n = {n}\nterms = {terms}\nvalue = {}\nerror_radius = {}\nrounded = {}\ndetermines_integer = {}\nexact = {exact}\ncontains_exact = {contains}\n",
        est.value.to_string_sig(sig),
        est.error_radius.to_string_sig(sig),
        est.rounded()?,
        est.determines_integer()?,
    );
    emit(g, out, &text)?;
    Ok(if contains { EXIT_PASS } else { EXIT_FAIL })
}

fn parse_alpha(args: &VerifyArgs, default: &str) -> Result<AlphaParam> {
    Ok(AlphaParam::parse(args.alpha.as_deref().unwrap_or(default))?)
}

/// The check kinds behind one subcommand name; `corollary2` runs two.
fn kinds(args: &VerifyArgs) -> Result<Vec<CheckKind>> {
    let no_alpha = |name: &str| -> Result<()> {
        match &args.alpha {
            Some(_) => Err(CliError::Usage(format!("{name} takes no --alpha"))),
            None => Ok(()),
        }
    };
    Ok(match args.check {
        CheckName::Theorem1 => vec![CheckKind::Theorem1 { alpha: parse_alpha(args, "0")? }],
        CheckName::Corollary1 => vec![CheckKind::Convexity { alpha: parse_alpha(args, "0")? }],
        CheckName::Corollary2 => {
            no_alpha("corollary2")?;
            vec![
                CheckKind::Convexity { alpha: AlphaParam::from_integer(1) },
                CheckKind::Convexity { alpha: AlphaParam::zero() },
            ]
        }
        CheckName::Corollary3 => {
            no_alpha("corollary3")?;
            vec![CheckKind::Corollary3]
        }
        CheckName::Lemma2 => {
            no_alpha("lemma2")?;
            vec![CheckKind::Lemma2]
        }
        CheckName::Lemma3 => {
            no_alpha("lemma3")?;
            vec![CheckKind::Lemma3]
        }
        CheckName::Lemma4 => vec![CheckKind::Lemma4 { alpha: parse_alpha(args, "1")? }],
        CheckName::Lemma5 => vec![CheckKind::Lemma5 { alpha: parse_alpha(args, "0")? }],
        CheckName::Lemma6 => vec![CheckKind::Lemma6 { alpha: parse_alpha(args, "1")? }],
        CheckName::Logconcavity => {
            no_alpha("logconcavity")?;
            vec![CheckKind::LogConcavity]
        }
    })
}

/// Corollary 1 claims log-convexity only from `N(α)`, even for the two
/// exponents whose lower ranges were checked separately.
fn claimed_from(name: CheckName, kind: &CheckKind) -> Result<u64> {
    match (name, kind) {
        (CheckName::Corollary1, CheckKind::Convexity { alpha }) => Ok(opart_core::verify::n_alpha(alpha)?),
        _ => Ok(kind.threshold()?),
    }
}

fn range_for(name: CheckName, kind: &CheckKind, args: &VerifyArgs) -> Result<(u64, u64)> {
    let (d_from, d_to) = match (name, kind) {
        (CheckName::Corollary1, CheckKind::Convexity { alpha }) => {
            CheckKind::Theorem1 { alpha: alpha.clone() }.default_range()?
        }
        _ => kind.default_range()?,
    };
    Ok((args.from.unwrap_or(d_from), args.to.unwrap_or(d_to)))
}

fn verify(
    g: &GlobalArgs,
    ctx: &PrecisionContext,
    jobs: usize,
    args: &VerifyArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let kinds = kinds(args)?;
    let mut plans = Vec::new();
    for kind in &kinds {
        let (from, to) = range_for(args.check, kind, args)?;
        kind.validate(from, to, true)?;
        let claimed = claimed_from(args.check, kind)?;
        if from < claimed && !args.exploratory {
            return Err(opart_core::Error::BelowThreshold {
                check: kind.name(),
                from,
                to,
                threshold: claimed,
            }
            .into());
        }
        plans.push((kind, from, to, claimed));
    }
    let table: Option<OverpartitionTable> = if kinds.iter().any(CheckKind::needs_table) {
        let n_max = plans.iter().map(|p| p.2).max().unwrap_or(2) + 1;
        Some(table_for(g.cache.as_deref(), n_max)?)
    } else {
        None
    };
    let checksum = table.as_ref().map(OverpartitionTable::checksum);
    let mut reports: Vec<RangeReport> = Vec::new();
    for (kind, from, to, claimed) in plans {
        let mut report = parallel::run_check(kind, from, to, table.as_ref(), ctx, true, jobs)?;
        report.check = match args.check {
            CheckName::Corollary1 => "corollary1",
            CheckName::Corollary2 => "corollary2",
            _ => report.check,
        };
        if from < claimed {
            report.paper_claim = false;
            let note = format!("no paper claim below n = {claimed}");
            if !report.notes.contains(&note) {
                report.notes.insert(0, note);
            }
        }
        reports.push(report);
    }
    let mut text = String::new();
    for report in &reports {
        text.push_str(&render(report, &Header::for_report(report, checksum), g.format));
    }
    emit(g, out, &text)?;
    let mut code = EXIT_PASS;
    for report in &reports {
        let _ = writeln!(err, "{}", summary(report));
        if let Some(rec) = report.failures().next() {
            let _ = write!(err, "counterexample:\n{}", record_detail(rec, ctx.digits()));
            code = EXIT_FAIL;
        } else if report.first_indeterminate.is_some() && code == EXIT_PASS {
            code = EXIT_ERROR;
        }
    }
    Ok(code)
}
