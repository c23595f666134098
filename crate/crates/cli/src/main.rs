use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use foxh_cli::{run_source, CliError, Command, Format, Overrides};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

/// Evaluate delta-neutral Fox H functions near their singular point.
#[derive(Debug, Parser)]
#[command(name = "foxh", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Job document (JSON).
    #[arg(long)]
    job: PathBuf,
    /// Output file, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Working precision in decimal digits, overriding the job.
    #[arg(long)]
    digits: Option<u32>,
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let source = std::fs::read_to_string(&cli.job)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", cli.job.display())))?;
    let overrides = Overrides {
        digits: cli.digits,
        format: cli.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Jsonl => Format::Jsonl,
        }),
        threads: cli.threads,
    };
    let text = run_source(cli.command, &source, &overrides)?;
    let written = if cli.out == "-" {
        std::io::stdout().lock().write_all(text.as_bytes())
    } else {
        std::fs::write(&cli.out, text.as_bytes())
    };
    written.map_err(|e| CliError::io(format!("cannot write {}: {e}", cli.out)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.code as u8)
        }
    }
}
