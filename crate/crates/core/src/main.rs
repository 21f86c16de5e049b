use std::process::ExitCode;

use clap::Parser;
use isosym::cli::{exit_code_for, run, CliConfig};

fn main() -> ExitCode {
    let cfg = CliConfig::parse();
    let stdout = std::io::stdout();
    match run(&cfg, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("isosym: error [{}]: {e}", e.code());
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
