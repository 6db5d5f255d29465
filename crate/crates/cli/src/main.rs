use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use seccache_cli::{execute, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli.resolve().and_then(|config| {
        let mut stdout = std::io::stdout().lock();
        let status = execute(&config, &mut stdout)?;
        stdout.flush()?;
        Ok(status)
    });
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
