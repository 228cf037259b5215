mod args;
mod error;
mod io;
mod run;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.threads {
        None => run::execute(cli.command),
        Some(0) => Err(CliError::Invalid("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run::execute(cli.command)),
            Err(e) => Err(CliError::Invalid(format!("cannot start thread pool: {e}"))),
        },
    };
    match result {
        Ok(manifest) => {
            eprintln!(
                "sgft {}: wrote {}",
                manifest.run.name(),
                manifest.run.out().display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
