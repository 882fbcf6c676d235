use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wco::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &out.path {
                Some(path) => std::fs::write(path, &out.body),
                None => std::io::stdout().lock().write_all(out.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("wco: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if let Some(s) = &out.summary {
                eprintln!("{s}");
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("wco: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
