use std::process::ExitCode;

use clap::Parser;
use eplan_cli::{run, RunOptions, ERROR_EXIT};

fn main() -> ExitCode {
    let opts = RunOptions::parse();
    let level = if opts.trace { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let stdout = std::io::stdout();
    match run(&opts, &mut stdout.lock()) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR_EXIT as u8)
        }
    }
}
