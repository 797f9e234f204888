use clap::Args;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::envelope::{Ctx, Output};
use recmeth_core::reproduce::{run as run_suite, Golden, Group, ReproduceConfig, DEFAULT_SEED};

#[derive(Args, Debug, Serialize)]
pub struct ReproduceArgs {
    /// Run one group only: thm1, thm2 or thm3.
    #[arg(long)]
    pub only: Option<String>,
    /// Reference values to compare against (defaults to the built-in copy).
    #[arg(long)]
    pub golden: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Print one pass/fail line per criterion instead of JSON.
    #[arg(long)]
    pub text: bool,
}

pub fn run(a: &ReproduceArgs, ctx: &Ctx) -> anyhow::Result<Output> {
    let only = match &a.only {
        Some(g) => Some(g.parse::<Group>().map_err(|e| crate::UsageError(e.to_string()))?),
        None => None,
    };
    let golden = match &a.golden {
        Some(path) => Golden::read(path)?,
        None => Golden::embedded(),
    };
    let report = run_suite(&ReproduceConfig {
        only,
        golden,
        seed: a.seed,
        budget: ctx.budget,
        timing: ctx.timing(),
    });
    let failed: Vec<String> = report.failures().map(|c| format!("{} ({})", c.id, c.key)).collect();
    let out = if a.text {
        let mut t = String::new();
        for c in &report.criteria {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(t, "{status} {:>2} {:<6} {:<28} {} checks", c.id, format!("{:?}", c.group).to_lowercase(), c.key, c.checks)?;
            if let Some(secs) = c.seconds {
                write!(t, " in {secs:.2}s")?;
            }
            if !c.passed {
                write!(t, ", {} violations: {}", c.violations, c.detail)?;
            }
            t.push('\n');
        }
        Output::text(t)
    } else {
        Output::json(&report)?
    };
    Ok(if failed.is_empty() {
        out
    } else {
        out.fail(format!("failing criteria: {}", failed.join(", ")))
    })
}
