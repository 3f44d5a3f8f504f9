use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use mlk_cli::{configure_threads, run_text, CliError, Command, RunOptions, EXIT_INPUT, EXIT_PASS, EXIT_WITNESS};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Modify,
    Bisector,
    Tetractor,
    Verify,
    Symbols,
    Params,
    Unramified,
    Report,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Command {
        match c {
            CommandArg::Modify => Command::Modify,
            CommandArg::Bisector => Command::Bisector,
            CommandArg::Tetractor => Command::Tetractor,
            CommandArg::Verify => Command::Verify,
            CommandArg::Symbols => Command::Symbols,
            CommandArg::Params => Command::Params,
            CommandArg::Unramified => Command::Unramified,
            CommandArg::Report => Command::Report,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

/// Metaplectic dual data: modification, bisectors, cocycle sweeps and torus parameters.
#[derive(Parser, Debug)]
#[command(name = "mlk", version)]
struct Args {
    /// Command to run; falls back to the job's "command" key.
    command: Option<CommandArg>,
    /// Job file (JSON).
    #[arg(long)]
    job: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Half-width of the lattice window for cocycle sweeps.
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..=8))]
    window: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<bool, CliError> {
    configure_threads().map_err(CliError::Threads)?;
    let text = fs::read_to_string(&args.job)
        .map_err(|source| CliError::Read { path: args.job.display().to_string(), source })?;
    let opts = RunOptions { command: args.command.map(Command::from), window: args.window };
    let report = run_text(&text, &opts).map_err(CliError::Input)?;
    let rendered = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &args.out {
        Some(path) => {
            fs::write(path, rendered).map_err(|source| CliError::Write { path: path.display().to_string(), source })?
        }
        None => print!("{rendered}"),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match execute(&args) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_WITNESS,
        Err(e) => {
            eprintln!("{e}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code as u8)
}
