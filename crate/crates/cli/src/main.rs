mod args;
mod commands;
mod config;
mod plot;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{CommandFactory, Parser};

use args::Cli;
use commands::{Ctx, Outcome};
use config::FileConfig;

/// Bad flags, config keys or parameter values: exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn is_usage(e: &anyhow::Error) -> bool {
    use kreisslab_core::Error as E;
    if e.downcast_ref::<UsageError>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<E>(),
        Some(
            E::InvalidParameter { .. }
                | E::Parse { .. }
                | E::NonSquare { .. }
                | E::NonFinite { .. }
                | E::Domain(_)
                | E::Precondition(_)
        )
    )
}

fn setup_threads(threads: usize) -> Result<()> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = match cli.threads {
        Some(t) => t,
        None => file.threads()?.unwrap_or(0),
    };
    setup_threads(threads)?;
    let out = match cli.out {
        Some(o) => o,
        None => file.out()?.unwrap_or_else(|| PathBuf::from("out")),
    };
    let seed = match cli.seed {
        Some(s) => Some(s),
        None => file.seed()?,
    };
    let ctx = Ctx {
        command: cli.command.name(),
        out,
        seed,
        file,
    };
    commands::dispatch(&ctx, cli.command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Falsified) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                let mut cmd = Cli::command();
                if let Some(sub) = cmd.find_subcommand_mut(name) {
                    eprintln!();
                    eprintln!("{}", sub.render_help());
                }
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
