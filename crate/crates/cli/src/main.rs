mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::CommonArgs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fieldmatch", version, about = "Match equivalent fields across tables with Bayesian string models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every field of table A against every field of table B
    Match {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Self-match the first and last n rows of one table and report AUCs
    Eval {
        table: Option<PathBuf>,
        /// Use the built-in synthetic registry table instead of a file
        #[arg(long, conflicts_with = "table")]
        synthetic: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Report character patterns and outlier values of one field
    Inspect {
        table: PathBuf,
        field: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dump a table after character normalization
    Normalize {
        table: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a seeded synthetic table
    Generate {
        /// JSON list of field specs (default: the built-in registry fixture)
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Match { a, b, common } => commands::run_match(&a, &b, &common.resolve()?),
        Command::Eval { table, synthetic, common } => {
            commands::run_eval(table.as_deref(), synthetic, &common.resolve()?)
        }
        Command::Inspect { table, field, common } => commands::run_inspect(&table, &field, &common.resolve()?),
        Command::Normalize { table, common } => commands::run_normalize(&table, &common.resolve()?),
        Command::Generate { spec, common } => commands::run_generate(spec.as_deref(), &common.resolve()?),
    }
}

/// 2 for problems in the input data, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    let data = err
        .chain()
        .find_map(|e| e.downcast_ref::<fieldmatch::Error>())
        .is_some_and(fieldmatch::Error::is_data_error);
    if data {
        2
    } else {
        1
    }
}

/// The error chain joined by ": ", skipping causes that the message above
/// them already quotes.
fn describe(err: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in err.chain() {
        let text = cause.to_string();
        if !out.ends_with(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn broken_pipe(err: &anyhow::Error) -> bool {
    err.chain()
        .filter_map(|e| e.downcast_ref::<std::io::Error>())
        .any(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
