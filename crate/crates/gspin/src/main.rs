use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gspin::report::{arthur_report, elliptic_report, load, rgroup_report, validate_report};
use gspin::sweep::{run_sweep, Check, SweepConfig};
use gspin::{exit, render, CliError};
use gspin_core::Family;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
enum FamilyArg {
    B,
    D,
    #[value(name = "both")]
    Both,
}

#[derive(Parser)]
#[command(name = "gspin", version, about = "R-groups and elliptic data for induced representations of GSpin groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Knapp–Stein R-group of an instance.
    Rgroup {
        /// Instance file, or `-` for standard input.
        input: PathBuf,
        /// Cross-check the closed form against the brute-force stabilizer.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Elliptic components, a_R and the sign table.
    Elliptic {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Parameter-side R-group and its match with the Knapp–Stein side.
    Arthur {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Property sweep over enumerated instances.
    Sweep {
        #[arg(long, value_enum, default_value = "both")]
        family: FamilyArg,
        #[arg(long, default_value_t = 3)]
        max_r: usize,
        #[arg(long, default_value_t = 2)]
        max_block: usize,
        #[arg(long, default_value_t = 4)]
        alphabet: usize,
        /// Largest `a` on the parameter side.
        #[arg(long, default_value_t = 3)]
        max_a: usize,
        /// Comma-separated checks; defaults to every instance-level check.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<Check>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        count: Option<usize>,
        /// Worker threads, 0 for the default.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Consistency check of an instance file.
    Validate {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(vec![format!("cannot read {}: {e}", path.display())]))
    }
}

fn emit<T: Serialize>(format: Format, report: &T, table: impl Fn(&T) -> String) -> Result<(), CliError> {
    match format {
        Format::Table => print!("{}", table(report)),
        Format::Json => {
            let s = serde_json::to_string_pretty(report).map_err(|e| CliError::Failure(e.to_string()))?;
            println!("{s}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Rgroup { input, oracle, format } => {
            let inst = load(&read_input(&input)?)?;
            let report = rgroup_report(&inst, oracle)?;
            emit(format, &report, render::rgroup_table)?;
            Ok(match &report.oracle {
                Some(o) if !o.agrees => exit::FAILURE,
                _ => exit::OK,
            })
        }
        Command::Elliptic { input, format } => {
            let inst = load(&read_input(&input)?)?;
            let report = elliptic_report(&inst)?;
            emit(format, &report, render::elliptic_table)?;
            Ok(if report.closed_form.agrees { exit::OK } else { exit::FAILURE })
        }
        Command::Arthur { input, format } => {
            let inst = load(&read_input(&input)?)?;
            let report = arthur_report(&inst)?;
            emit(format, &report, render::arthur_table)?;
            let consistent = report.siegel.as_ref().is_none_or(|s| s.tables_agree);
            Ok(if report.matches && consistent { exit::OK } else { exit::FAILURE })
        }
        Command::Sweep { family, max_r, max_block, alphabet, max_a, checks, seed, count, threads, format } => {
            let mut cfg = SweepConfig {
                families: match family {
                    FamilyArg::B => vec![Family::B],
                    FamilyArg::D => vec![Family::D],
                    FamilyArg::Both => vec![Family::B, Family::D],
                },
                max_r,
                max_block,
                alphabet,
                seed,
                count,
                threads,
                max_a,
                ..SweepConfig::default()
            };
            if !checks.is_empty() {
                cfg.checks = checks;
            }
            let report = run_sweep(&cfg)?;
            emit(format, &report, render::sweep_table)?;
            Ok(if report.failures.is_empty() { exit::OK } else { exit::FAILURE })
        }
        Command::Validate { input, format } => {
            let report = validate_report(&read_input(&input)?)?;
            emit(format, &report, render::validate_table)?;
            Ok(if report.valid { exit::OK } else { exit::INVALID })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::INVALID } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gspin: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
