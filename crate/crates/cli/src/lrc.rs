use anyhow::Context;
use clap::{Args, Subcommand};
use serde::Serialize;
use std::path::PathBuf;

use crate::envelope::{write_json, Ctx, Output};
use recmeth_core::code::{min_distance_by_weight, CodeFile};
use recmeth_core::lrc::{
    build_example_code, compute_t, shorten, verify_capability, BoundParams, Capability, LocalityFile,
    LocalityStructure,
};
use recmeth_core::{Code, PositionSet};

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LrcCommand {
    /// Compute T and the distance bound n - k + 1 - T·tau.
    Bound(BoundArgs),
    /// Check the (theta, tau, r) capability of a code exhaustively.
    Verify(VerifyArgs),
    /// Run the shortening procedure and certify a distance bound.
    Shorten(ShortenArgs),
    /// Write the binary example code with triple parities.
    Example(ExampleArgs),
}

impl LrcCommand {
    pub fn name(&self) -> &'static str {
        match self {
            LrcCommand::Bound(_) => "bound",
            LrcCommand::Verify(_) => "verify",
            LrcCommand::Shorten(_) => "shorten",
            LrcCommand::Example(_) => "example",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Size of theta.
    #[arg(long)]
    pub theta: usize,
    #[arg(long)]
    pub tau: usize,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Use the general reach bound q^(q^w) instead of q^w.
    #[arg(long)]
    pub nonlinear: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub loc: PathBuf,
    /// Write the complete locality map (supplied and found entries) here.
    #[arg(long)]
    pub map_out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ShortenArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub loc: PathBuf,
    /// Write the full trace here and print only a summary.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct ExampleArgs {
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the locality structure (theta = all but the last position).
    #[arg(long)]
    pub loc_out: Option<PathBuf>,
}

pub fn run(cmd: &LrcCommand, ctx: &Ctx) -> anyhow::Result<Output> {
    match cmd {
        LrcCommand::Bound(a) => bound(a),
        LrcCommand::Verify(a) => verify(a, ctx),
        LrcCommand::Shorten(a) => shorten_cmd(a, ctx),
        LrcCommand::Example(a) => example(a),
    }
}

fn bound(a: &BoundArgs) -> anyhow::Result<Output> {
    let report = compute_t(BoundParams {
        n: a.n,
        k: a.k,
        theta: a.theta,
        tau: a.tau,
        r: a.r,
        q: a.q,
        linear: !a.nonlinear,
    })?;
    Output::json(&report)
}

fn load(code: &PathBuf, loc: &PathBuf) -> anyhow::Result<(Code, LocalityStructure)> {
    let code = CodeFile::read(code).with_context(|| format!("reading code {}", code.display()))?;
    let loc = LocalityStructure::read(loc, code.n()).with_context(|| format!("reading locality {}", loc.display()))?;
    Ok((code, loc))
}

#[derive(Serialize)]
struct VerifyResult {
    holds: bool,
    theta_size: usize,
    tau: usize,
    r: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    uncovered: Option<PositionSet>,
    supplied_entries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    map_entries: Option<usize>,
}

fn verify(a: &VerifyArgs, ctx: &Ctx) -> anyhow::Result<Output> {
    let (code, loc) = load(&a.code, &a.loc)?;
    let supplied = loc.map.as_ref().map_or(0, |m| m.len());
    let outcome = verify_capability(&code, &loc, &ctx.budget)?;
    let result = match &outcome {
        Capability::Holds { map } => {
            if let Some(path) = &a.map_out {
                let full = LocalityStructure {
                    map: Some(map.clone()),
                    ..loc.clone()
                };
                write_json(path, &LocalityFile::from_structure(&full))?;
            }
            VerifyResult {
                holds: true,
                theta_size: loc.theta_size(),
                tau: loc.tau,
                r: loc.r,
                uncovered: None,
                supplied_entries: supplied,
                map_entries: Some(map.len()),
            }
        }
        Capability::Fails { uncovered } => VerifyResult {
            holds: false,
            theta_size: loc.theta_size(),
            tau: loc.tau,
            r: loc.r,
            uncovered: Some(uncovered.clone()),
            supplied_entries: supplied,
            map_entries: None,
        },
    };
    Ok(Output::json(&result)?.with_warnings(loc.warnings()))
}

#[derive(Serialize)]
struct ShortenSummary {
    iterations: usize,
    stop_reason: recmeth_core::lrc::StopReason,
    certified_bound: i64,
    distance_bound: i64,
    reduced_min_distance: usize,
    invariants_hold: bool,
    trace_file: PathBuf,
}

fn shorten_cmd(a: &ShortenArgs, ctx: &Ctx) -> anyhow::Result<Output> {
    let (code, mut loc) = load(&a.code, &a.loc)?;
    let mut warnings = loc.warnings();
    if loc.map.is_none() {
        match verify_capability(&code, &loc, &ctx.budget)? {
            Capability::Holds { map } => {
                warnings.push("no locality map supplied; using the one found by search".into());
                loc.map = Some(map);
            }
            Capability::Fails { uncovered } => {
                anyhow::bail!("capability fails: no locality set of size <= {} for {uncovered}", loc.r)
            }
        }
    }
    let trace = shorten(&code, &loc)?;
    let out = match &a.trace {
        Some(path) => {
            write_json(path, &trace)?;
            Output::json(&ShortenSummary {
                iterations: trace.iterations.len(),
                stop_reason: trace.stop_reason,
                certified_bound: trace.certified_bound,
                distance_bound: trace.distance_bound,
                reduced_min_distance: trace.reduced_min_distance,
                invariants_hold: trace.invariants_hold(),
                trace_file: path.clone(),
            })?
        }
        None => Output::json(&trace)?,
    };
    let out = out.with_warnings(warnings);
    Ok(if trace.invariants_hold() {
        out
    } else {
        out.fail("a shortening invariant failed; see the trace")
    })
}

#[derive(Serialize)]
struct ExampleResult {
    k: usize,
    n: usize,
    words: usize,
    min_distance: usize,
    theta_size: usize,
    tau: usize,
    r: usize,
    code_file: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    loc_file: Option<PathBuf>,
}

fn example(a: &ExampleArgs) -> anyhow::Result<Output> {
    let ex = build_example_code(a.k)?;
    write_json(&a.out, &CodeFile::from_code(&ex.code))?;
    if let Some(path) = &a.loc_out {
        write_json(path, &LocalityFile::from_structure(&ex.locality))?;
    }
    let result = ExampleResult {
        k: a.k,
        n: ex.code.n(),
        words: ex.code.len(),
        min_distance: min_distance_by_weight(&ex.code)?,
        theta_size: ex.locality.theta_size(),
        tau: ex.locality.tau,
        r: ex.locality.r,
        code_file: a.out.clone(),
        loc_file: a.loc_out.clone(),
    };
    Ok(Output::json(&result)?.with_warnings(ex.warnings))
}
