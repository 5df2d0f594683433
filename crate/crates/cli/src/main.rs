use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use log::LevelFilter;

use qec_blueprint_cli::{execute, exit_code, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    // logging level comes from flags only; no environment variables are read
    env_logger::Builder::new()
        .filter_level(if cli.quiet { LevelFilter::Warn } else { LevelFilter::Info })
        .format_timestamp(None)
        .format_target(false)
        .init();

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = execute(&cli, &mut out).and_then(|()| out.flush().map_err(Into::into));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
