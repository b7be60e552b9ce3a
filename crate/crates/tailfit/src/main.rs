use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};
use tailfit::cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let matches = Cli::command().try_get_matches().unwrap_or_else(|e| exit_with_usage(e));
    let cli = Cli::from_arg_matches(&matches).unwrap_or_else(|e| e.exit());
    let subcommand = matches.subcommand_name().map(str::to_owned);
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            // Report against the subcommand so the usage line is the relevant one.
            let mut cmd = Cli::command();
            cmd.build();
            let mut target = subcommand
                .and_then(|name| cmd.find_subcommand(&name).cloned())
                .unwrap_or(cmd);
            target.error(ErrorKind::InvalidValue, msg).exit()
        }
        Err(e) => {
            eprintln!("tailfit: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// clap omits the usage line for some value errors; add the relevant one.
fn exit_with_usage(err: clap::Error) -> ! {
    let rendered = err.render().to_string();
    if !err.use_stderr() || rendered.contains("Usage:") {
        err.exit()
    }
    let mut cmd = Cli::command();
    cmd.build();
    let mut target = std::env::args()
        .nth(1)
        .and_then(|name| cmd.find_subcommand(&name).cloned())
        .unwrap_or(cmd);
    eprint!("{}", rendered.trim_end_matches('\n').trim_end_matches("For more information, try '--help'.").trim_end());
    eprintln!("\n\n{}\n\nFor more information, try '--help'.", target.render_usage());
    std::process::exit(err.exit_code())
}
