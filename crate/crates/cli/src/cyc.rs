use clap::{Args, Subcommand};
use num::{BigRational, One};
use serde::Serialize;
use std::fmt::Write as _;

use crate::envelope::{Ctx, Output};
use recmeth_core::perm::{mean, moment_table, propagate_mean, sample_cycles, variance};
use recmeth_core::Ratio;

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CycCommand {
    /// Exact moments E N_n^s from the recursion.
    Moments(MomentsArgs),
    /// Exact mean of the cycle count, H_n.
    Mean(ScalarArgs),
    /// Exact variance of the cycle count, H_n - sum 1/i^2.
    Var(ScalarArgs),
    /// Monte Carlo cycle statistics of uniform random permutations.
    Sample(SampleArgs),
}

impl CycCommand {
    pub fn name(&self) -> &'static str {
        match self {
            CycCommand::Moments(_) => "moments",
            CycCommand::Mean(_) => "mean",
            CycCommand::Var(_) => "var",
            CycCommand::Sample(_) => "sample",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct MomentsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ScalarArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

/// Above this `n` the closed forms are reported without re-deriving them
/// from the table and the recursion.
const CROSS_CHECK_MAX_N: usize = 2000;

pub fn run(cmd: &CycCommand, _ctx: &Ctx) -> anyhow::Result<Output> {
    match cmd {
        CycCommand::Moments(a) => moments(a),
        CycCommand::Mean(a) => scalar(a, false),
        CycCommand::Var(a) => scalar(a, true),
        CycCommand::Sample(a) => sample(a),
    }
}

fn moments(a: &MomentsArgs) -> anyhow::Result<Output> {
    let table = moment_table(a.n, a.s)?;
    if a.json {
        return Output::json(&table);
    }
    if a.csv {
        return Ok(Output::text(table.to_csv()));
    }
    let mut out = String::new();
    for (n, row) in table.rows() {
        let cells: Vec<String> = row.iter().map(|v| Ratio(v.clone()).to_string()).collect();
        writeln!(out, "{n}\t{}", cells.join("\t"))?;
    }
    Ok(Output::text(out))
}

#[derive(Serialize)]
struct ScalarResult {
    n: usize,
    value: Ratio,
    approx: f64,
    /// Agreement with the moment table and with the defining recursion.
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_table: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matches_recursion: Option<bool>,
}

fn scalar(a: &ScalarArgs, var: bool) -> anyhow::Result<Output> {
    let value = if var { variance(a.n)? } else { mean(a.n)? };
    let (table_ok, recursion_ok) = if a.n <= CROSS_CHECK_MAX_N {
        let t = moment_table(a.n, if var { 2 } else { 1 })?;
        let from_table = if var {
            t.get(a.n, 2) - t.get(a.n, 1) * t.get(a.n, 1)
        } else {
            t.get(a.n, 1).clone()
        };
        let from_recursion = if var {
            variance_by_recursion(a.n)
        } else {
            propagate_mean(BigRational::one(), a.n).pop().expect("n >= 1")
        };
        (Some(from_table == value), Some(from_recursion == value))
    } else {
        (None, None)
    };
    let ok = table_ok != Some(false) && recursion_ok != Some(false);
    let out = if a.json {
        let value = Ratio(value);
        Output::json(&ScalarResult {
            n: a.n,
            approx: value.to_f64(),
            value,
            matches_table: table_ok,
            matches_recursion: recursion_ok,
        })?
    } else {
        Output::text(Ratio(value).to_string())
    };
    Ok(if ok { out } else { out.fail("closed form disagrees with the recursion") })
}

/// `v_n = 1 + (1/n)(Σ_{i<n} v_i - H_n)`, from `v_1 = 0`.
fn variance_by_recursion(n: usize) -> BigRational {
    let mut h = BigRational::from_integer(0.into());
    let mut sum = h.clone();
    let mut v = h.clone();
    for i in 1..=n {
        let idx = BigRational::from_integer(i.into());
        h += BigRational::one() / &idx;
        v = BigRational::one() + (&sum - &h) / idx;
        sum += &v;
    }
    v
}

fn sample(a: &SampleArgs) -> anyhow::Result<Output> {
    let s = sample_cycles(a.n, a.trials, a.seed)?;
    if a.json {
        return Output::json(&s);
    }
    let exact_mean = Ratio(mean(a.n)?);
    let exact_var = Ratio(variance(a.n)?);
    let mut out = String::new();
    writeln!(out, "n={} trials={} seed={}", s.n, s.trials, s.seed)?;
    writeln!(out, "mean     {:.6}  (exact {} = {:.6})", s.mean, exact_mean, exact_mean.to_f64())?;
    writeln!(out, "variance {:.6}  (exact {} = {:.6})", s.variance, exact_var, exact_var.to_f64())?;
    writeln!(out, "P(L_1 = k), exact 1/{}:", a.n)?;
    for (k, c) in s.first_cycle_hist.iter().enumerate() {
        writeln!(out, "  {:>3}  {:.6}", k + 1, *c as f64 / s.trials as f64)?;
    }
    Ok(Output::text(out))
}
