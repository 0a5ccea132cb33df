//! `flagvertex` command-line front end.
//!
//! One command per process. Results are written as JSON to `--out` (atomically)
//! or to standard output. Exit codes: 0 PASS or success, 1 FAIL, 2 configuration
//! error, 3 pole or genericity failure, 4 solver non-convergence.

mod config;
mod run;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, CliError};

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("FLAGVERTEX_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("FLAGVERTEX_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CliError::config("FLAGVERTEX_THREADS must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = init_threads().and_then(|_| run::execute(&cli));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
