use clap::{Args, Subcommand};
use num::{BigInt, BigRational, One};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::envelope::{Ctx, Output};
use recmeth_core::lattice::oracle::brute_force_min_rep;
use recmeth_core::lattice::{
    compose, compose_minimal, critical_set, min_rep_size, subadditive_sweep, CriticalSet, Split, WeightSpec,
};
use recmeth_core::{Ratio, RepCode, FORMAT_VERSION};

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RepCommand {
    /// Exact minimum representative code size b_m.
    Min(MinArgs),
    /// b_m over several sizes, with the per-size bounds and ratio checks.
    Sweep(SweepArgs),
    /// Compose block codes of a split m = k·r + s (d = 2).
    Compose(ComposeArgs),
}

impl RepCommand {
    pub fn name(&self) -> &'static str {
        match self {
            RepCommand::Min(_) => "min",
            RepCommand::Sweep(_) => "sweep",
            RepCommand::Compose(_) => "compose",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct MinArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub d: usize,
    /// Rational level in (0, 1), as p/q.
    #[arg(long)]
    pub eps: Ratio,
    /// `uniform`, `shell`, or a weight spec file.
    #[arg(long, default_value = "uniform")]
    pub weights: String,
    /// Cross-check against exhaustive subset enumeration (at most 20 points).
    #[arg(long)]
    pub oracle: bool,
    /// Also report the critical set.
    #[arg(long)]
    pub critical: bool,
    /// Include the witness code's points.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    /// `uniform`, `shell`, or a weight spec file.
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub eps: Ratio,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Comma-separated side lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<usize>,
    /// Write the table as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Skip the ratio comparison between sizes r and k·r.
    #[arg(long)]
    pub no_multiples: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ComposeArgs {
    #[arg(long)]
    pub m: usize,
    /// Block side r; k = m / r, s = m mod r.
    #[arg(long)]
    pub r: usize,
    #[arg(long)]
    pub eps: Ratio,
    #[arg(long, default_value = "uniform")]
    pub weights: String,
    /// Four block codes in block-local coordinates
    /// (`{"format": 1, "blocks": [[[1,1], ...], [], [], []]}`). Without it,
    /// minimum codes are used, the first block tiled by translates.
    #[arg(long)]
    pub codes: Option<PathBuf>,
}

#[derive(Deserialize)]
struct BlockCodes {
    #[serde(default = "default_format")]
    format: u32,
    blocks: [Vec<Vec<usize>>; 4],
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

pub fn run(cmd: &RepCommand, _ctx: &Ctx) -> anyhow::Result<Output> {
    match cmd {
        RepCommand::Min(a) => min(a),
        RepCommand::Sweep(a) => sweep(a),
        RepCommand::Compose(a) => compose_cmd(a),
    }
}

#[derive(Serialize)]
struct OracleResult {
    b_m: usize,
    agrees: bool,
}

#[derive(Serialize)]
struct MinResult {
    m: usize,
    d: usize,
    epsilon: Ratio,
    weights: &'static str,
    beta: Ratio,
    monotone: bool,
    b_m: usize,
    threshold: Ratio,
    complement_weight: Ratio,
    lower_bound: Ratio,
    upper_bound: Ratio,
    lower_ok: bool,
    upper_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_set: Option<CriticalSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    code: Option<RepCode>,
}

fn min(a: &MinArgs) -> anyhow::Result<Output> {
    let spec = WeightSpec::resolve(&a.weights)?;
    let lat = spec.lattice(a.m, a.d)?;
    let eps = a.eps.inner();
    let rep = min_rep_size(&lat, eps)?;
    let vol = BigRational::from_integer(BigInt::from(lat.size()));
    let one = BigRational::one();
    let lower = (&one - eps) * &vol;
    let upper = (&one - eps / lat.beta()) * &vol + &one;
    let b = BigRational::from_integer(BigInt::from(rep.size));
    let oracle = if a.oracle {
        let brute = brute_force_min_rep(&lat, eps)?;
        Some(OracleResult {
            b_m: brute,
            agrees: brute == rep.size,
        })
    } else {
        None
    };
    let disagreement = oracle.as_ref().is_some_and(|o| !o.agrees);
    let result = MinResult {
        m: a.m,
        d: a.d,
        epsilon: a.eps.clone(),
        weights: spec.name(),
        beta: Ratio(lat.beta().clone()),
        monotone: lat.is_monotone(),
        b_m: rep.size,
        threshold: rep.threshold,
        complement_weight: rep.complement_weight,
        lower_ok: lower <= b,
        upper_ok: b <= upper,
        lower_bound: Ratio(lower),
        upper_bound: Ratio(upper),
        oracle,
        critical_set: if a.critical { Some(critical_set(&lat, eps)?) } else { None },
        code: a.witness.then_some(rep.code),
    };
    let out = Output::json(&result)?;
    Ok(if disagreement {
        out.fail("greedy size disagrees with the subset oracle")
    } else {
        out
    })
}

fn sweep(a: &SweepArgs) -> anyhow::Result<Output> {
    let spec = WeightSpec::resolve(&a.spec)?;
    let table = subadditive_sweep(&spec, a.eps.inner(), a.d, &a.m, !a.no_multiples)?;
    if let Some(path) = &a.csv {
        std::fs::write(path, table.to_csv())?;
    }
    let ok = table.all_ok;
    let out = Output::json(&table)?;
    Ok(if ok { out } else { out.fail("a sweep check failed") })
}

fn compose_cmd(a: &ComposeArgs) -> anyhow::Result<Output> {
    let spec = WeightSpec::resolve(&a.weights)?;
    let lat = spec.lattice(a.m, 2)?;
    let eps = a.eps.inner();
    let comp = match &a.codes {
        None => compose_minimal(&lat, a.r, eps)?,
        Some(path) => {
            let raw = std::fs::read_to_string(path)?;
            let file: BlockCodes = serde_json::from_str(&raw)?;
            if file.format != FORMAT_VERSION {
                anyhow::bail!("unsupported block code format {}", file.format);
            }
            let codes = file.blocks.map(|pts| RepCode::new(a.eps.clone(), pts));
            compose(&lat, &Split::new(a.m, a.r)?, eps, &codes)?
        }
    };
    let ok = comp.representative && comp.within_bound != Some(false);
    let out = Output::json(&comp)?;
    Ok(if ok { out } else { out.fail("composed code check failed") })
}
