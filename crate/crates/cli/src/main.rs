mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use carlitz_core::{Fq, RankMode};

use args::{Cli, Command, RankModeArg};

fn run(cli: &Cli) -> anyhow::Result<i32> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global()?;
    }
    let field = Fq::new(cli.p, cli.nu)?;
    let mode = match cli.rank_mode {
        RankModeArg::Exact => RankMode::Exact,
        RankModeArg::Probabilistic => RankMode::Probabilistic { trials: 3, seed: cli.seed },
    };
    let out = match &cli.command {
        Command::Compute(a) => commands::compute(&field, a)?,
        Command::Verify(a) => commands::verify(&field, a, cli.seed)?,
        Command::Gkdim(a) => commands::gkdim(&field, a, mode)?,
        Command::Table(a) => commands::table(&field, a)?,
    };
    out.emit(cli.format, cli.out.as_deref())?;
    Ok(out.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
