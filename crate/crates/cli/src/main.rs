use std::process::ExitCode;

use clap::Parser;

use mzv_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    if outcome.status == EXIT_USAGE {
        eprint!("{}", outcome.report);
        return ExitCode::from(EXIT_USAGE as u8);
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.report) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{}", outcome.report),
    }
    ExitCode::from(outcome.status as u8)
}
