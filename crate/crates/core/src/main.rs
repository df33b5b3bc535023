use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use permwold::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli);
    // failures that carry no report go to stderr
    if outcome.output.starts_with("error: ") {
        let _ = std::io::stderr().lock().write_all(outcome.output.as_bytes());
    } else {
        let _ = std::io::stdout().lock().write_all(outcome.output.as_bytes());
    }
    ExitCode::from(outcome.code as u8)
}
