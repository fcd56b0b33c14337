//! `parsssp`: generate graphs, run and verify shortest-path policies, and
//! report per-step statistics, k_ρ estimates and bound checks.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// A verification or bound check failed (status 1).
    Check(String),
    /// Bad flags or parameters (status 2).
    Usage(String),
    /// Files could not be read, written or decoded (status 3).
    Io(String),
}

impl From<parsssp::Error> for CliError {
    fn from(e: parsssp::Error) -> Self {
        use parsssp::Error as E;
        match e {
            E::Config(_) | E::Domain(_) | E::Infeasible(_) => CliError::Usage(e.to_string()),
            _ => CliError::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))
            .and_then(|pool| pool.install(|| commands::dispatch(cli.cmd))),
        None => commands::dispatch(cli.cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
