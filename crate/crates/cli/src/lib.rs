//! Batch front-end for the `foxh` evaluators: one JSON job in, one CSV or
//! JSON-lines table out.

pub mod commands;
pub mod job;
pub mod table;

use std::fmt;

use foxh::scalar::{bits_for_digits, Mp};
use foxh::FoxError;

pub use job::{Format, JobSpec};
pub use table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Domain,
    Coeffs,
    Eval,
    Oracle,
    Compare,
    Abscissa,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn job(message: impl Into<String>) -> Self {
        CliError { code: EXIT_VALIDATION, kind: "InvalidJob".into(), message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, kind: "Io".into(), message: message.into() }
    }

    pub fn context(mut self, field: &str) -> Self {
        self.message = format!("{field}: {}", self.message);
        self
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        serde_json::json!({ "error": self.kind, "exit_code": self.code, "message": self.message }).to_string()
    }
}

impl From<FoxError> for CliError {
    fn from(e: FoxError) -> Self {
        let code = match e {
            FoxError::PrecisionExhausted { .. } => EXIT_PRECISION,
            _ => EXIT_VALIDATION,
        };
        CliError { code, kind: e.kind().into(), message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

/// Runs a job at the narrowest precision tier holding `job.digits` digits.
pub fn execute(command: Command, job: &JobSpec) -> Result<Table, CliError> {
    job.check_digits()?;
    match bits_for_digits(job.digits) {
        128 => commands::run::<Mp<128>>(command, job),
        256 => commands::run::<Mp<256>>(command, job),
        512 => commands::run::<Mp<512>>(command, job),
        1024 => commands::run::<Mp<1024>>(command, job),
        2048 => commands::run::<Mp<2048>>(command, job),
        4096 => commands::run::<Mp<4096>>(command, job),
        _ => commands::run::<Mp<8192>>(command, job),
    }
}

/// Overrides applied on top of the job document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub digits: Option<u32>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

/// Parses the job, applies overrides, and renders the output.
pub fn run_source(command: Command, source: &str, overrides: &Overrides) -> Result<String, CliError> {
    let mut job = JobSpec::parse(source)?;
    if let Some(d) = overrides.digits {
        job.digits = d;
    }
    if let Some(f) = overrides.format {
        job.output = f;
    }
    let work = || execute(command, &job).map(|t| t.render(job.output));
    match overrides.threads {
        None => work(),
        Some(0) => Err(CliError::job("--threads must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::io(format!("cannot start {n} threads: {e}")))?
            .install(work),
    }
}
