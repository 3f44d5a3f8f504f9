//! Batch front end: job files in, verification reports out.

pub mod jobspec;
pub mod report;
pub mod run;

pub use jobspec::{parse_jobspec, Command, ErrorCode, JobSpec, SchemaError};
pub use report::{Report, SuiteLine, SCHEMA_VERSION};
pub use run::{run, RunOptions};

/// Exit code when every suite passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code when some suite produced a witness.
pub const EXIT_WITNESS: i32 = 1;
/// Exit code for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 2;

/// Bounds the rayon pool by `MLK_THREADS` when it is set to a positive integer.
pub fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("MLK_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("MLK_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

/// Parses and runs a job; returns the report or the input errors.
pub fn run_text(text: &str, opts: &RunOptions) -> Result<Report, Vec<SchemaError>> {
    let job = parse_jobspec(text)?;
    run(&job, opts)
}

/// Failures that stop the binary before a report exists.
#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("E_IO: cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("E_IO: cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{}", render_errors(.0))]
    Input(Vec<SchemaError>),
    #[error("E_BAD_VALUE: {0}")]
    Threads(String),
}

fn render_errors(errors: &[SchemaError]) -> String {
    errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}
