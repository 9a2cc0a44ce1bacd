//! Command-line front end for `loccgate`: the JSON state-file format,
//! report documents and the subcommands.

pub mod commands;
pub mod error;
pub mod format;
pub mod parse;
pub mod report;

pub use commands::{run, Cli, Command, Outcome};
pub use error::CliError;
pub use format::{StateEntry, StateFile};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "LOCCGATE_THREADS";

/// Builds the worker pool from `LOCCGATE_THREADS` (unset means rayon's
/// default) and runs `cli` inside it. A `--out` path receives the report.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return Err(CliError::Input(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => None,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Numeric(format!("cannot start worker pool: {e}")))?;
    let outcome = pool.install(|| run(&cli.command))?;
    if let Some(path) = &cli.out {
        std::fs::write(path, &outcome.report)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(outcome)
}
