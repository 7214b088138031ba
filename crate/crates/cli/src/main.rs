//! `ncgeo <suite> [options]` runs a verification suite and prints its report.
//!
//! Exit status is 0 when every check passes, 1 when some check fails and 2
//! for usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, ValueEnum};
use ncgeo::exactlin::Scalar;
use ncgeo::suite::{list_suites, run, AlgebraSpec, SuiteConfig, SuiteName, SuiteParams};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "ncgeo", version, about = "Exact checks of differential calculi and connections over finite algebras")]
struct Cli {
    /// Suite to run, or `list` to describe the suites.
    #[arg(value_parser = parse_target)]
    target: Target,
    /// Size of the matrix algebra M_n.
    #[arg(long)]
    n: Option<usize>,
    /// Number of points of C(N), truncation order of K[x]/x^N.
    #[arg(long = "N", id = "big_n")]
    big_n: Option<usize>,
    /// Top degree of the Connes calculus.
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    /// Off-diagonal entry of the two-point Dirac operator, as RATIONAL[+RATIONALi].
    #[arg(long, value_parser = parse_scalar, allow_hyphen_values = true)]
    m: Option<Scalar>,
    /// Seed for sampled checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Commutative algebra for the jets suite: functions:N or trunc-poly:N.
    #[arg(long, value_parser = parse_algebra)]
    algebra: Option<AlgebraSpec>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// TOML file with `suite`, `format`, `timings`, `verbosity` and a `[params]` table; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Text detail: 0 lists failures only, 1 every check, 2 adds anchors.
    #[arg(long)]
    verbosity: Option<u8>,
    /// Record per-check durations; the report is then no longer byte-reproducible.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, Debug)]
enum Target {
    List,
    Suite(SuiteName),
}

fn parse_target(s: &str) -> Result<Target, String> {
    if s == "list" {
        return Ok(Target::List);
    }
    s.parse().map(Target::Suite).map_err(|e: ncgeo::error::Error| e.to_string())
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse().map_err(|e: ncgeo::error::Error| e.to_string())
}

fn parse_algebra(s: &str) -> Result<AlgebraSpec, String> {
    s.parse().map_err(|e: ncgeo::error::Error| e.to_string())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    suite: Option<String>,
    format: Option<Format>,
    timings: Option<bool>,
    verbosity: Option<u8>,
    #[serde(default)]
    params: FileParams,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileParams {
    n: Option<usize>,
    #[serde(rename = "N")]
    big_n: Option<usize>,
    k_max: Option<usize>,
    m: Option<String>,
    seed: Option<u64>,
    algebra: Option<String>,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n");
    eprintln!("{}", Cli::command().render_usage());
    ExitCode::from(2)
}

fn load_config(path: &PathBuf) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

fn build(cli: &Cli, file: FileConfig) -> Result<(SuiteConfig, Format, u8), String> {
    let suite = match cli.target {
        Target::Suite(s) => s,
        Target::List => unreachable!("handled before"),
    };
    if let Some(s) = &file.suite {
        let from_file: SuiteName = s.parse().map_err(|e: ncgeo::error::Error| e.to_string())?;
        if from_file != suite {
            return Err(format!("config names suite `{from_file}` but `{suite}` was requested"));
        }
    }
    let fp = file.params;
    let mut params = SuiteParams::default();
    params.n = cli.n.or(fp.n).unwrap_or(params.n);
    params.big_n = cli.big_n.or(fp.big_n).unwrap_or(params.big_n);
    params.k_max = cli.k_max.or(fp.k_max).unwrap_or(params.k_max);
    params.seed = cli.seed.or(fp.seed).unwrap_or(params.seed);
    if let Some(m) = cli.m.clone().map(Ok).or_else(|| fp.m.as_deref().map(parse_scalar)) {
        params.m = m?;
    }
    if let Some(a) = cli.algebra.map(Ok).or_else(|| fp.algebra.as_deref().map(parse_algebra)) {
        params.algebra = a?;
    }
    let format = cli.format.or(file.format).unwrap_or(Format::Json);
    let timings = cli.timings || file.timings.unwrap_or(false);
    let verbosity = cli.verbosity.or(file.verbosity).unwrap_or(1);
    Ok((SuiteConfig { suite, params, timings }, format, verbosity))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Target::List = cli.target {
        print!("{}", list_suites());
        return ExitCode::SUCCESS;
    }
    let file = match &cli.config {
        Some(path) => match load_config(path) {
            Ok(f) => f,
            Err(e) => return usage_error(&e),
        },
        None => FileConfig::default(),
    };
    let (config, format, verbosity) = match build(&cli, file) {
        Ok(x) => x,
        Err(e) => return usage_error(&e),
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize")),
        Format::Text => print!("{}", report.to_text_at(verbosity)),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
