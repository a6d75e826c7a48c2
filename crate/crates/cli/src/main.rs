use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ellsurf_cli::commands::{error_output, run, Cli};

fn main() -> ExitCode {
    // clap prints usage errors itself and exits with status 2.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = std::io::stdout().write_all(error_output(cli.command.name(), &e, cli.format).as_bytes());
            eprintln!("ellsurf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
