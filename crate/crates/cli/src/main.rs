use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use loccgate_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if cli.out.is_none() {
                let _ = stdout.write_all(outcome.report.as_bytes());
            }
            for line in &outcome.summary {
                let _ = writeln!(stdout, "{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
