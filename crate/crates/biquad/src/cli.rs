//! Command dispatch. [`run`] never panics on user input and returns the exit
//! code together with everything that would be written to the terminal.
//!
//! Exit codes: 0 success, 1 invalid or PBW-inconsistent presentation,
//! 2 parse or usage error.

use std::path::Path;
use std::time::Instant;

use biquad_core::calculus::{CalculusError, TwistFamily};
use biquad_core::freealg::{Algebra, FreePoly, Strategy};
use biquad_core::presentation::AlgebraPresentation;
use biquad_core::smoothness::{analyze, smoothness_conditions, verify_witness, SmoothnessError, DEFAULT_DEPTH};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::catalog::{self, CatalogError};
use crate::format::{emit_presentation, parse_presentation, FormatError};
use crate::report::{AnalysisReport, CalculusReport, PbwCommandReport};
use crate::word::parse_word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const MAX_DEPTH: u32 = 8;

#[derive(Debug, Parser)]
#[command(name = "biquad", version, about = "Analyze bi-quadratic algebras with PBW basis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide differential smoothness; several targets are analyzed independently.
    Analyze {
        /// Presentation files or catalog names.
        #[arg(required = true)]
        targets: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH, value_parser = clap::value_parser!(u32).range(1..=MAX_DEPTH as i64))]
        depth: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check PBW consistency by overlaps, plus the closed conditions for three generators.
    Pbw {
        target: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Reduce a word to PBW normal form.
    Normalize {
        target: String,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
    },
    /// Build the forced twist calculus and run its verification checks.
    Calculus {
        target: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH, value_parser = clap::value_parser!(u32).range(1..=MAX_DEPTH as i64))]
        degree: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List the built-in algebras or print one as a presentation file.
    Catalog {
        #[arg(long)]
        list: bool,
        name: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome { code, stdout: String::new(), stderr }
    }
}

struct Failure {
    code: i32,
    message: String,
}

/// Reads a presentation from a file path or, failing that, the catalog.
fn load(target: &str) -> Result<AlgebraPresentation, Failure> {
    let path = Path::new(target);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure { code: EXIT_USAGE, message: format!("{target}: {e}") })?;
        return parse_presentation(&text).map_err(|e| format_failure(target, e));
    }
    catalog::get(target).map_err(|e| match e {
        CatalogError::UnknownName(_) => {
            Failure { code: EXIT_USAGE, message: format!("{target}: no such file or catalog entry") }
        }
        CatalogError::Malformed { source, .. } => format_failure(target, source),
    })
}

fn format_failure(target: &str, e: FormatError) -> Failure {
    let code = match e {
        FormatError::Parse { .. } => EXIT_USAGE,
        FormatError::Validation(_) => EXIT_ANALYSIS,
    };
    Failure { code, message: format!("{target}: {e}") }
}

/// Runs one command line; `args[0]` is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome::fail(EXIT_USAGE, text),
            };
        }
    };
    match cli.command {
        Command::Analyze { targets, depth, format } => run_analyze(&targets, depth, format),
        Command::Pbw { target, format } => run_pbw(&target, format),
        Command::Normalize { target, word, strategy } => run_normalize(&target, &word, strategy),
        Command::Calculus { target, degree, format } => run_calculus(&target, degree, format),
        Command::Catalog { list, name } => run_catalog(list, name.as_deref()),
    }
}

fn analyze_one(target: &str, depth: u32, format: Format) -> Outcome {
    let start = Instant::now();
    let pres = match load(target) {
        Ok(p) => p,
        Err(f) => return Outcome::fail(f.code, format!("{}\n", f.message)),
    };
    let pbw = match pres.check_pbw_by_overlaps() {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
    };
    let conditions = match smoothness_conditions(&pres) {
        Ok(c) => c,
        Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
    };
    let (verdict, code, stderr) = if pbw.consistent {
        match analyze(&pres, depth) {
            Ok(v) => (Some(v), EXIT_OK, String::new()),
            Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
        }
    } else {
        (None, EXIT_ANALYSIS, format!("{target}: {}\n", SmoothnessError::InconsistentPresentation(pbw.clone())))
    };
    let mut report = AnalysisReport::new(&pres, &pbw, verdict.as_ref(), &conditions);
    report.timings.total_ms = start.elapsed().as_secs_f64() * 1000.0;
    let stdout = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Outcome { code, stdout, stderr }
}

fn run_analyze(targets: &[String], depth: u32, format: Format) -> Outcome {
    let outcomes: Vec<Outcome> = targets.par_iter().map(|t| analyze_one(t, depth, format)).collect();
    if outcomes.len() == 1 {
        let mut o = outcomes.into_iter().next().expect("one outcome");
        if format == Format::Json && !o.stdout.is_empty() {
            o.stdout.push('\n');
        }
        return o;
    }
    let code = outcomes.iter().map(|o| o.code).max().unwrap_or(EXIT_OK);
    let stderr: String = outcomes.iter().map(|o| o.stderr.as_str()).collect();
    let stdout = match format {
        Format::Json => {
            let items: Vec<String> = outcomes
                .iter()
                .filter(|o| !o.stdout.is_empty())
                .map(|o| o.stdout.trim_end().lines().map(|l| format!("  {l}")).collect::<Vec<_>>().join("\n"))
                .collect();
            format!("[\n{}\n]\n", items.join(",\n"))
        }
        Format::Text => {
            let items: Vec<&str> = outcomes.iter().filter(|o| !o.stdout.is_empty()).map(|o| o.stdout.as_str()).collect();
            items.join("\n")
        }
    };
    Outcome { code, stdout, stderr }
}

fn run_pbw(target: &str, format: Format) -> Outcome {
    let pres = match load(target) {
        Ok(p) => p,
        Err(f) => return Outcome::fail(f.code, format!("{}\n", f.message)),
    };
    let pbw = match pres.check_pbw_by_overlaps() {
        Ok(r) => r,
        Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
    };
    let closed = if pres.n() == 3 { pres.check_pbw3_closed().ok() } else { None };
    let report = PbwCommandReport::new(&pres, &pbw, closed.as_ref());
    Outcome::ok(match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    })
}

fn run_normalize(target: &str, word: &str, strategy: StrategyArg) -> Outcome {
    let pres = match load(target) {
        Ok(p) => p,
        Err(f) => return Outcome::fail(f.code, format!("{}\n", f.message)),
    };
    let w = match parse_word(word, pres.n()) {
        Ok(w) => w,
        Err(e) => return Outcome::fail(EXIT_USAGE, format!("--word: {e}\n")),
    };
    let alg = match Algebra::new(&pres) {
        Ok(a) => a,
        Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
    };
    let s = match strategy {
        StrategyArg::Leftmost => Strategy::Leftmost,
        StrategyArg::Rightmost => Strategy::Rightmost,
    };
    Outcome::ok(format!("{}\n", alg.normalize(&FreePoly::word(w), s)))
}

fn run_calculus(target: &str, degree: u32, format: Format) -> Outcome {
    let pres = match load(target) {
        Ok(p) => p,
        Err(f) => return Outcome::fail(f.code, format!("{}\n", f.message)),
    };
    match pres.check_pbw_by_overlaps() {
        Ok(r) if r.consistent => {}
        Ok(r) => {
            return Outcome::fail(
                EXIT_ANALYSIS,
                format!("{target}: {}\n", SmoothnessError::InconsistentPresentation(r)),
            )
        }
        Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
    }
    let report = match TwistFamily::forced(&pres) {
        Err(CalculusError::Obstruction(o)) => CalculusReport::obstructed(&pres, &o),
        Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
        Ok(tw) => match verify_witness(&pres, &tw, degree) {
            Ok(r) => CalculusReport::verified(&pres, &tw, &r),
            Err(e) => return Outcome::fail(EXIT_ANALYSIS, format!("{target}: {e}\n")),
        },
    };
    Outcome::ok(match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    })
}

fn run_catalog(list: bool, name: Option<&str>) -> Outcome {
    match (list, name) {
        (_, None) | (true, _) => {
            let mut s: String = catalog::names().map(|n| format!("{n}\n")).collect();
            s.push_str("families: polynomial-N, weyl-N, multiplicative-weyl-N, q-heisenberg-N, shift-ops-N-M, difference-ops-N-M\n");
            Outcome::ok(s)
        }
        (false, Some(n)) => match catalog::source(n) {
            Some(text) => Outcome::ok(text.to_string()),
            None => match catalog::get(n) {
                Ok(p) => Outcome::ok(emit_presentation(&p)),
                Err(e) => Outcome::fail(EXIT_USAGE, format!("{e}\n")),
            },
        },
    }
}

