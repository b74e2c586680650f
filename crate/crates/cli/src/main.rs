mod args;
mod commands;
mod error;
mod io;
mod table;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => commands::generate(a, cli.threads),
        Command::Discrepancy(a) => commands::discrepancy(a, cli.threads),
        Command::Table(a) => commands::table(a, cli.threads),
        Command::Scan(a) => commands::scan(a, cli.threads),
        Command::Check(a) => commands::check(a, cli.threads),
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {t} workers: {e}"))),
        },
        None => run(&cli),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
