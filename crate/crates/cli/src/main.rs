mod args;
mod commands;
mod error;
mod output;
mod parse;

use std::process::ExitCode;

use clap::Parser;
use hodge_core::real::DoubleDouble;
use hodge_core::HodgeError;

use args::{Cli, Command, Format};
use error::{CliError, EXIT_IO};

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        return Err(CliError::invalid("--tol must be positive"));
    }
    let result = match cli.precision {
        53 => commands::run::<f64>(cli)?,
        106 => commands::run::<DoubleDouble>(cli)?,
        p => return Err(HodgeError::UnsupportedPrecision(p).into()),
    };
    // example documents are always JSON
    let format = if matches!(cli.command, Command::Example { .. }) { Format::Json } else { cli.format };
    output::emit(&result.render(format)?, cli.out.as_deref())?;
    Ok(result.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
