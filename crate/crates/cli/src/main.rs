//! `icc check FILE`: decides whether the described extension is icc.

mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use icc_core::analyzer::{analyze, AnalyzeError, SearchCaps};
use icc_core::dsl::{parse_extension, Diagnostic};
use icc_core::matgroup::DEFAULT_ORBIT_CAP;
use icc_core::oracle::{crosscheck, OracleError, DEFAULT_SIZE_CAP};

const EXIT_ASSERT: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "icc",
    version,
    about = "Decide whether a group extension has infinite conjugacy classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one extension description file.
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Icc,
    NotIcc,
}

impl Expect {
    fn tag(self) -> &'static str {
        match self {
            Expect::Icc => "icc",
            Expect::NotIcc => "not_icc",
        }
    }
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Extension description file.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Conjugacy-ball radius for the brute-force cross-check; 0 disables it.
    #[arg(long, default_value_t = 0)]
    oracle_radius: usize,
    /// Class-size cap for the cross-check.
    #[arg(long, default_value_t = DEFAULT_SIZE_CAP)]
    oracle_cap: usize,
    /// Number of sampled elements probed when the verdict is not `not_icc`.
    #[arg(long, default_value_t = 20)]
    oracle_samples: usize,
    /// Largest witness orbit listed explicitly.
    #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
    orbit_cap: usize,
    /// Largest power tried when deciding whether an outer action has finite order.
    #[arg(long, default_value_t = SearchCaps::default().out_order_cap)]
    out_order_cap: u64,
    /// Max-norm of exponent vectors tried for several infinite quotient directions.
    #[arg(long, default_value_t = SearchCaps::default().relation_bound)]
    relation_bound: i64,
    /// Write the growth curve of the first cross-check probe as CSV.
    #[arg(long, value_name = "PATH.csv")]
    emit_growth: Option<PathBuf>,
    /// Exit with status 1 unless the verdict matches.
    #[arg(long = "assert", value_enum)]
    expect: Option<Expect>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check(args) => check(&args),
    }
}

fn print_diagnostic(path: &std::path::Path, text: &str, d: &Diagnostic) {
    eprintln!("{}:{d}", path.display());
    if let Some(src) = text.lines().nth(d.line.saturating_sub(1)) {
        eprintln!("  {src}");
        eprintln!("  {}^", " ".repeat(d.column.saturating_sub(1)));
    }
}

fn check(args: &CheckArgs) -> ExitCode {
    if args.emit_growth.is_some() && args.oracle_radius == 0 {
        eprintln!("--emit-growth needs the cross-check: pass --oracle-radius R with R > 0");
        return ExitCode::from(EXIT_INPUT);
    }
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", args.file.display());
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let spec = match parse_extension(&text) {
        Ok(s) => s,
        Err(d) => {
            print_diagnostic(&args.file, &text, &d);
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let caps = SearchCaps {
        out_order_cap: args.out_order_cap,
        relation_bound: args.relation_bound,
        orbit_cap: args.orbit_cap,
    };
    let analysis = match analyze(&spec, caps) {
        Ok(r) => r,
        Err(AnalyzeError::Unsupported(msg)) => {
            eprintln!("{}: unsupported: {msg}", args.file.display());
            return ExitCode::from(EXIT_UNSUPPORTED);
        }
    };

    let oracle = if args.oracle_radius == 0 {
        None
    } else {
        match crosscheck(
            &spec,
            &analysis,
            args.oracle_samples,
            args.oracle_radius,
            args.oracle_cap,
        ) {
            Ok(x) => {
                if let Some(path) = &args.emit_growth {
                    let probe = x.witness_probes.first().or(x.sample_probes.first());
                    let csv = probe.map_or_else(|| "radius,size,status\n".to_string(), |p| p.curve.to_csv());
                    if let Err(e) = std::fs::write(path, csv) {
                        eprintln!("{}: {e}", path.display());
                        return ExitCode::from(EXIT_INPUT);
                    }
                }
                Some(report::crosscheck_json(&x))
            }
            Err(e @ (OracleError::Unsupported(_) | OracleError::NonAbelianKernel)) => Some(
                report::unsupported_crosscheck(e.to_string(), args.oracle_radius, args.oracle_cap),
            ),
        }
    };

    let json = report::report_json(&spec, &analysis, oracle);
    let out = match args.format {
        Format::Json => serde_json::to_string_pretty(&json).expect("report serializes") + "\n",
        Format::Text => report::report_text(&json),
    };
    // a closed pipe downstream is not an analysis failure
    let _ = std::io::stdout().lock().write_all(out.as_bytes());

    match args.expect {
        Some(e) if e.tag() != json.verdict => {
            eprintln!("assertion failed: expected {}, verdict is {}", e.tag(), json.verdict);
            ExitCode::from(EXIT_ASSERT)
        }
        _ => ExitCode::SUCCESS,
    }
}
