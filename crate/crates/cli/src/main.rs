use std::io;
use std::process::ExitCode;

use clap::Parser;
use theta_forge_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli, &mut io::stdout().lock(), &mut io::stderr().lock()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(theta_forge_cli::app::EXIT_FAIL)
        }
    }
}
