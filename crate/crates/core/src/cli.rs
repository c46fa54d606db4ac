//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or guard error, 2 indeterminate cells,
//! 3 violation found.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Signed;

use crate::coefficients::{coefficient_dump, CoefficientTable};
use crate::error::{Error, ParseError};
use crate::expansions::{
    self, exact_harmonic, gamma_enclosure, gamma_estimate, Family, HARMONIC_GUARD,
};
use crate::numerics::decimal::{format_fixed_directed, format_scientific};
use crate::numerics::{format_rational, Precision, Rounding};
use crate::report;
use crate::verification::{self, decompose_error, sweep};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

pub const MAX_P: usize = 200;
pub const MAX_TERMS: usize = 200;
const DIGITS: usize = report::SIGNIFICANT_DIGITS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "harmonic",
    version,
    about = "Exact coefficients and verified evaluation of harmonic number expansions"
)]
pub struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 64,
          value_parser = clap::value_parser!(u32).range(16..=10_000))]
    pub precision: u32,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print p, D_p and R_p as exact rationals.
    Coeffs {
        #[arg(long = "p-max", value_parser = parse_p_max)]
        p_max: usize,
    },
    /// Evaluate one truncated expansion against the exact harmonic number.
    Eval {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = parse_n)]
        n: u64,
        #[arg(long, value_parser = parse_terms)]
        r: usize,
    },
    /// Sweep theta over a grid and report every cell as CSV or a table.
    Verify {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long = "n-range", value_parser = parse_n_range)]
        n_range: RangeInclusive<u64>,
        #[arg(long = "r-range", value_parser = parse_r_range)]
        r_range: RangeInclusive<usize>,
    },
    /// Enclose Euler's constant.
    Gamma {
        #[arg(long, value_parser = parse_n)]
        n: u64,
        #[arg(long, value_parser = parse_terms)]
        r: usize,
    },
    /// Split the Ramanujan truncation error into its three parts.
    Decompose {
        #[arg(long, value_parser = parse_n)]
        n: u64,
        #[arg(long, value_parser = parse_terms)]
        r: usize,
    },
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse()
}

fn parse_p_max(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if !(1..=MAX_P).contains(&v) {
        return Err(format!("must be in 1..={MAX_P}"));
    }
    Ok(v)
}

fn parse_n(s: &str) -> Result<u64, String> {
    let v: u64 = s.parse().map_err(|e| format!("{e}"))?;
    check_n(v)?;
    Ok(v)
}

fn check_n(v: u64) -> Result<(), String> {
    if !(1..=HARMONIC_GUARD).contains(&v) {
        return Err(format!("n must be in 1..={HARMONIC_GUARD}"));
    }
    Ok(())
}

fn parse_terms(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v > MAX_TERMS {
        return Err(format!("must be at most {MAX_TERMS}"));
    }
    Ok(v)
}

fn parse_n_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let range = parse_range(s).map_err(|e| e.to_string())?;
    check_n(*range.start())?;
    check_n(*range.end())?;
    Ok(range)
}

fn parse_r_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let range = parse_range(s).map_err(|e| e.to_string())?;
    let (a, b) = (*range.start(), *range.end());
    if b > MAX_TERMS as u64 {
        return Err(format!("r must be at most {MAX_TERMS}"));
    }
    Ok(a as usize..=b as usize)
}

/// Parses an inclusive, non-empty range written `a..b` or `a..=b`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>, ParseError> {
    let bad = || ParseError::Range(s.to_owned());
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let number = |t: &str| -> Result<u64, ParseError> {
        if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse().map_err(|_| bad())
    };
    let (a, b) = (number(a)?, number(b)?);
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let rendered = e.render().to_string();
            if informational {
                let _ = out.write_all(rendered.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(rendered.as_bytes());
            return EXIT_USAGE;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.stdout.as_bytes());
            if let Some(note) = outcome.stderr {
                let _ = writeln!(err, "{note}");
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Text produced by a command, kept separate from I/O for testing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: None,
            code: EXIT_OK,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let p = Precision::from_decimal_digits(cli.precision);
    match &cli.command {
        Command::Coeffs { p_max } => Ok(Outcome::ok(cmd_coeffs(*p_max, cli.format))),
        Command::Eval { family, n, r } => cmd_eval(*family, *n, *r, p, cli.format),
        Command::Verify {
            family,
            n_range,
            r_range,
        } => cmd_verify(*family, n_range.clone(), r_range.clone(), p, cli.format),
        Command::Gamma { n, r } => cmd_gamma(*n, *r, p, cli.format).map(Outcome::ok),
        Command::Decompose { n, r } => cmd_decompose(*n, *r, p, cli.format).map(Outcome::ok),
    }
}

pub fn cmd_coeffs(p_max: usize, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => coefficient_dump(p_max),
        OutputFormat::Csv => {
            let table = CoefficientTable::global();
            let mut out = String::from("p,d,r\n");
            for p in 1..=p_max {
                let _ = writeln!(
                    out,
                    "{p},{},{}",
                    format_rational(&table.d(p)),
                    format_rational(&table.r(p))
                );
            }
            out
        }
    }
}

pub fn cmd_eval(
    family: Family,
    n: u64,
    r: usize,
    p: Precision,
    format: OutputFormat,
) -> Result<Outcome, Error> {
    let gamma = gamma_estimate(p)?;
    let approx = expansions::evaluate(family, n, r, &gamma, p)?;
    let exact = exact_harmonic(n)?;
    let residual = &exact - approx.value.to_rational();
    let bound = approx.next_term_bound.to_rational();
    let pass = residual.abs() < bound;
    let verdict = if pass { "PASS" } else { "FAIL" };
    let fields = [
        ("family", family.to_string()),
        ("n", n.to_string()),
        ("r", r.to_string()),
        ("approximation", approx.value.to_scientific_string(DIGITS)),
        ("exact", format_scientific(&exact, DIGITS)),
        ("residual", format_scientific(&residual, DIGITS)),
        ("next_term_bound", format_scientific(&bound, DIGITS)),
        ("verdict", verdict.to_owned()),
    ];
    Ok(Outcome {
        stdout: render_fields(&fields, format),
        stderr: None,
        code: if pass { EXIT_OK } else { EXIT_VIOLATION },
    })
}

pub fn cmd_verify(
    family: Family,
    n_range: RangeInclusive<u64>,
    r_range: RangeInclusive<usize>,
    p: Precision,
    format: OutputFormat,
) -> Result<Outcome, Error> {
    let summary = sweep(family, n_range, r_range, p)?;
    let stdout = match format {
        OutputFormat::Csv => report::write_csv(&summary),
        OutputFormat::Table => verify_table(&summary),
    };
    let (code, stderr) = if !summary.violations.is_empty() {
        (
            EXIT_VIOLATION,
            Some(format!("{} violation(s)", summary.violations.len())),
        )
    } else if !summary.indeterminate.is_empty() {
        (
            EXIT_INDETERMINATE,
            Some(format!(
                "{} indeterminate cell(s)",
                summary.indeterminate.len()
            )),
        )
    } else {
        (EXIT_OK, None)
    };
    Ok(Outcome {
        stdout,
        stderr,
        code,
    })
}

fn verify_table(summary: &verification::SweepSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:>7} {:>3}  {:<14} {:<14} classification",
        "family", "n", "r", "theta", "margin"
    );
    for rep in &summary.reports {
        let _ = writeln!(
            out,
            "{:<10} {:>7} {:>3}  {:<14} {:<14} {}",
            rep.family.name(),
            rep.n,
            rep.r,
            rep.theta.to_scientific_string(8),
            rep.margin.to_scientific_string(8),
            rep.classification.name()
        );
    }
    let show = |x: &Option<crate::numerics::HighPrecisionReal>| {
        x.as_ref()
            .map_or_else(|| "-".to_owned(), |v| v.to_scientific_string(12))
    };
    let _ = writeln!(out, "cells: {}", summary.reports.len());
    let _ = writeln!(out, "violations: {}", summary.violations.len());
    let _ = writeln!(out, "indeterminate: {}", summary.indeterminate.len());
    let _ = writeln!(out, "min_theta: {}", show(&summary.min_theta));
    let _ = writeln!(out, "max_theta: {}", show(&summary.max_theta));
    let _ = writeln!(out, "min_margin: {}", show(&summary.min_margin));
    out
}

pub fn cmd_gamma(n: u64, r: usize, p: Precision, format: OutputFormat) -> Result<String, Error> {
    let enclosure = gamma_enclosure(n, r, p)?;
    let width = enclosure.width().to_rational();
    // Digits after the point that the width still resolves.
    let exponent = format_scientific(&width, 1)
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse::<i64>().ok())
        .unwrap_or(0);
    let digits = usize::try_from(-exponent - 1).unwrap_or(0).max(1);
    let shown = digits + 4;
    let fields = [
        ("n", n.to_string()),
        ("r", r.to_string()),
        (
            "lo",
            format_fixed_directed(
                &enclosure.interval.lo().to_rational(),
                shown,
                Rounding::Floor,
            ),
        ),
        (
            "hi",
            format_fixed_directed(
                &enclosure.interval.hi().to_rational(),
                shown,
                Rounding::Ceil,
            ),
        ),
        ("width", format_scientific(&width, 4)),
        ("midpoint", enclosure.midpoint().to_fixed_string(digits)),
    ];
    Ok(render_fields(&fields, format))
}

pub fn cmd_decompose(
    n: u64,
    r: usize,
    p: Precision,
    format: OutputFormat,
) -> Result<String, Error> {
    let d = decompose_error(n, r, p)?;
    let alpha = verification::alternating_tail_fraction(n, r, p)?;
    let sci = |x: &crate::numerics::HighPrecisionReal| x.to_scientific_string(DIGITS);
    let fields = [
        ("n", n.to_string()),
        ("r", r.to_string()),
        ("epsilon_r", sci(&d.epsilon_r)),
        ("e_r", sci(&d.e_r)),
        ("dtw_tail", sci(&d.dtw_tail)),
        ("total", sci(&d.total)),
        ("direct_residual", sci(&d.direct_residual)),
        ("theta_implied", sci(&d.theta_implied)),
        ("alpha_r", sci(&alpha)),
    ];
    Ok(render_fields(&fields, format))
}

fn render_fields(fields: &[(&str, String)], format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        OutputFormat::Csv => {
            let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", header.join(","), row.join(","))
        }
    }
}
