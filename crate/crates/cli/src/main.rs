use std::process::ExitCode;

use clap::Parser;

use ctxdim_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
