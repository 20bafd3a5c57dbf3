mod args;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command, Format};
use commands::Report;
use error::CliError;

/// Every value-taking flag accepts a leading minus, so `--kappa -1` reaches
/// validation instead of being read as an unknown flag.
fn command() -> clap::Command {
    fn relax(cmd: clap::Command) -> clap::Command {
        cmd.mut_args(|a| {
            if a.get_action().takes_values() {
                a.allow_negative_numbers(true)
            } else {
                a
            }
        })
        .mut_subcommands(relax)
    }
    relax(Cli::command())
}

fn config_path(argv: &[String]) -> Option<&str> {
    argv.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            argv.get(i + 1).map(String::as_str)
        } else {
            a.strip_prefix("--config=")
        }
    })
}

fn parse() -> Result<Cli, clap::Error> {
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(path) = config_path(&argv) {
        let text = std::fs::read_to_string(path)
            .map_err(|e| command().error(clap::error::ErrorKind::Io, format!("cannot read {path}: {e}")))?;
        argv =
            args::merge_config(&argv, &text).map_err(|e| command().error(clap::error::ErrorKind::InvalidValue, e))?;
    }
    Cli::from_arg_matches(&command().try_get_matches_from(&argv)?)
}

fn emit(cli: &Cli, report: &Report, default: Format) -> Result<(), CliError> {
    let text = report.render(cli.format.unwrap_or(default))?;
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let (report, default) = match &cli.command {
        Command::Scatter(a) => (commands::scatter(a)?, Format::Json),
        Command::Ideal(a) => (commands::ideal(a)?, Format::Json),
        Command::Bogoliubov(a) => (commands::bogoliubov(a)?, Format::Json),
        Command::Condensate(a) => (commands::condensate(a)?, Format::Json),
        Command::Bound(a) => (commands::bound(a)?, Format::Json),
        Command::Sweep(a) => (commands::sweep(a)?, Format::Csv),
        Command::Verify(a) => {
            let (report, failed) = commands::verify_suites(a)?;
            emit(cli, &report, Format::Json)?;
            return if failed == 0 {
                Ok(())
            } else {
                Err(CliError::Verification { failed })
            };
        }
    };
    emit(cli, &report, default)
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprint!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
