//! `recmeth`: command-line front end for the recmeth engines.
//!
//! Exit codes: 0 success, 1 domain error (bad input data, failed check,
//! exhausted work budget), 2 usage error.

mod cyc;
mod envelope;
mod lrc;
mod rep;
mod repro;

use clap::{Parser, Subcommand};
use serde::Serialize;
use std::process::ExitCode;

use envelope::{Ctx, Output};
use recmeth_core::budget::BUDGET_ENV;
use recmeth_core::Budget;

#[derive(Parser, Debug)]
#[command(name = "recmeth", version, about = "Distance bounds for partially local codes, lattice representative codes, and permutation cycle moments")]
struct Cli {
    /// Work budget for exhaustive enumerations (overrides RECMETH_WORK_BUDGET).
    #[arg(long, global = true, value_name = "CHECKS")]
    budget: Option<u64>,
    /// Add wall-clock timing to JSON reports (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Codes with partial locality.
    #[command(subcommand)]
    Lrc(lrc::LrcCommand),
    /// Representative codes on weighted lattices.
    #[command(subcommand)]
    Rep(rep::RepCommand),
    /// Cycle counts of random permutations.
    #[command(subcommand)]
    Cyc(cyc::CycCommand),
    /// Run the acceptance criteria and print a pass/fail report.
    Reproduce(repro::ReproduceArgs),
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Lrc(c) => format!("lrc {}", c.name()),
            Command::Rep(c) => format!("rep {}", c.name()),
            Command::Cyc(c) => format!("cyc {}", c.name()),
            Command::Reproduce(_) => "reproduce".into(),
        }
    }
}

/// Bad flag combinations found after parsing; exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn budget(cli: &Cli) -> anyhow::Result<(Budget, &'static str)> {
    if let Some(n) = cli.budget {
        return Ok((Budget::new(n)?, "flag"));
    }
    if std::env::var_os(BUDGET_ENV).is_some() {
        return Ok((Budget::from_env()?, "env"));
    }
    Ok((Budget::default(), "default"))
}

fn run(cli: &Cli) -> anyhow::Result<(Output, Ctx)> {
    let (budget, source) = budget(cli)?;
    let ctx = Ctx::new(budget, source, cli.timing);
    let out = match &cli.command {
        Command::Lrc(c) => lrc::run(c, &ctx)?,
        Command::Rep(c) => rep::run(c, &ctx)?,
        Command::Cyc(c) => cyc::run(c, &ctx)?,
        Command::Reproduce(a) => repro::run(a, &ctx)?,
    };
    Ok((out, ctx))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match run(&cli) {
        Ok((out, ctx)) => {
            let failed = out.failed;
            print!("{}", out.render(&ctx, &name, &cli.command));
            if let Some(msg) = &out.failure_message {
                eprintln!("error: {msg}");
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            if err.downcast_ref::<UsageError>().is_some() {
                eprintln!("error: {err}");
                return ExitCode::from(2);
            }
            if let Some(recmeth_core::Error::BudgetExceeded { .. }) = err.downcast_ref::<recmeth_core::Error>() {
                let (budget, source) = budget(&cli).unwrap_or((Budget::default(), "default"));
                let ctx = Ctx::new(budget, source, false);
                print!("{}", envelope::exhausted(&ctx, &name, &cli.command, &err.to_string()));
                eprintln!("error: {err} (raise it with --budget or {BUDGET_ENV})");
                return ExitCode::from(1);
            }
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
