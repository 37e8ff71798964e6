use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use cf_forge_cli::commands::{
    cmd_batch, cmd_prove, cmd_recognize, cmd_sum, RecognizeInput, Settings, DEFAULT_MAX_DEGREE,
    DEFAULT_MAX_TERMS,
};
use cf_forge_cli::{load_corpus, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cf-forge", version, about = "Continued-fraction identities: verify, prove, recognize")]
struct Cli {
    /// Working precision in decimal digits.
    #[arg(long, global = true, env = "CF_FORGE_PRECISION", default_value_t = 50)]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check every fixture of a corpus file.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
        /// Largest number of series terms.
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        terms: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Add wall-clock timings to each report.
        #[arg(long)]
        timings: bool,
    },
    /// Recover f and g from a_n and b_n.
    Prove {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// Express a value as a combination of known constants.
    #[command(group(ArgGroup::new("input").required(true).args(["value", "f"])))]
    Recognize {
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
        #[arg(long, requires = "g", allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, requires = "f", allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
        basis: u8,
    },
    /// Sum the series of a spec and evaluate its convergent.
    Sum {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        terms: u64,
    },
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let precision = cli.precision;
    match cli.command {
        Command::Verify { corpus, terms, format, timings } => {
            let fixtures = match load_corpus(&corpus) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return Ok(EXIT_USAGE);
                }
            };
            let settings =
                Settings { precision_digits: precision, max_terms: terms, max_degree: DEFAULT_MAX_DEGREE, timings };
            let outcome = cmd_batch(&fixtures, &settings);
            let text = match format {
                Format::Json => outcome.to_json_lines(),
                Format::Text => outcome.to_text(),
            };
            std::io::stdout().lock().write_all(text.as_bytes())?;
            eprintln!("{}", outcome.summary());
            Ok(outcome.exit_code)
        }
        Command::Prove { a, b, max_degree } => {
            let report = cmd_prove(&a, &b, max_degree, precision)?;
            print_json(&report)?;
            Ok(if report.solver_status == "failed" { EXIT_MISMATCH } else { EXIT_OK })
        }
        Command::Recognize { value, f, g, basis } => {
            let input = match (value, f, g) {
                (Some(v), _, _) => RecognizeInput::Value(v),
                (None, Some(f), Some(g)) => RecognizeInput::Spec { f, g },
                _ => unreachable!("clap enforces the input group"),
            };
            let report = cmd_recognize(&input, basis, precision)?;
            print_json(&report)?;
            Ok(if report.closed_form.is_some() { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Sum { f, g, terms } => {
            print_json(&cmd_sum(&f, &g, precision, terms)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
