use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gauge_mps::app::SIZE_LIMIT_VAR;
use gauge_mps::{run, Cli, Env};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Env::from_var(std::env::var(SIZE_LIMIT_VAR).ok().as_deref()).and_then(|env| run(&cli, &env));
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
