//! The acceptance suite as a library call: every criterion recomputes its
//! quantities from scratch and compares them against exact expectations,
//! independent oracles, and a small golden file of reference values.

use num::{BigInt, BigRational, One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use crate::budget::Budget;
use crate::code::{min_distance, min_distance_by_weight, PositionSet};
use crate::error::{Error, Result};
use crate::lattice::oracle::{brute_force_min_rep, mask_code, representative_table};
use crate::lattice::{compose_minimal, is_representative, min_rep_size, random_monotone_spec, subadditive_sweep, WeightSpec};
use crate::lrc::random::{random_local_code, RandomCodeParams};
use crate::lrc::{build_example_code, compute_t, shorten, verify_capability, BoundParams, Capability, LocalityStructure};
use crate::perm::{
    harmonic, mean, mean_recursion_failure, moment_table, moments_by_enumeration, propagate_mean, sample_cycles,
    shuffle_frequencies, stirling_moment, variance, variance_recursion_failure,
};
use crate::ratio::Ratio;
use crate::FORMAT_VERSION;

pub const DEFAULT_SEED: u64 = 42;
pub const RANDOM_CODES: usize = 50;
pub const RANDOM_SPECS: usize = 20;
pub const MC_TRIALS: u64 = 1_000_000;
/// Upper 0.9999 quantile of χ² with 23 degrees of freedom (24 cells).
pub const CHI2_23_9999: f64 = 57.07464313855563;

const EMBEDDED_GOLDEN: &str = include_str!("../golden/reference.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenExample {
    pub k: usize,
    pub n: usize,
    pub min_distance: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenMoments {
    pub mu_3_1: Ratio,
    pub mu_3_2: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenVariances {
    pub v_2: Ratio,
    pub v_3: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct GoldenHarmonic {
    pub H_8: Ratio,
    pub H_10: Ratio,
}

/// Reference values checked by the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub format: u32,
    pub example_code: GoldenExample,
    pub moments: GoldenMoments,
    pub variances: GoldenVariances,
    pub harmonic: GoldenHarmonic,
    pub variance_8: Ratio,
}

impl Golden {
    pub fn embedded() -> Self {
        Self::parse(EMBEDDED_GOLDEN).expect("embedded golden file parses")
    }

    pub fn parse(raw: &str) -> Result<Self> {
        let g: Golden = serde_json::from_str(raw)?;
        if g.format != FORMAT_VERSION {
            return Err(Error::InvalidArgument(format!("golden file has format {}", g.format)));
        }
        Ok(g)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
            .map_err(|e| Error::InvalidArgument(format!("golden file {}: {e}", path.display())))
    }
}

/// Criterion groups, one per result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Thm1,
    Thm2,
    Thm3,
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm1" => Ok(Group::Thm1),
            "thm2" => Ok(Group::Thm2),
            "thm3" => Ok(Group::Thm3),
            other => Err(Error::InvalidArgument(format!("unknown group {other:?}, expected thm1, thm2 or thm3"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceConfig {
    pub only: Option<Group>,
    pub golden: Golden,
    pub seed: u64,
    pub budget: Budget,
    pub timing: bool,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        Self {
            only: None,
            golden: Golden::embedded(),
            seed: DEFAULT_SEED,
            budget: Budget::default(),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub group: Group,
    pub key: &'static str,
    pub passed: bool,
    pub checks: u64,
    pub violations: u64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproduceReport {
    pub format: u32,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub all_passed: bool,
}

impl ReproduceReport {
    pub fn failures(&self) -> impl Iterator<Item = &CriterionResult> {
        self.criteria.iter().filter(|c| !c.passed)
    }
}

/// Tally of one criterion. The first few failure messages are kept.
#[derive(Default)]
struct Tally {
    checks: u64,
    violations: u64,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            if self.notes.len() < 5 {
                self.notes.push(what());
            }
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }
}

type Criterion = fn(&ReproduceConfig, &mut Tally) -> Result<()>;

const CRITERIA: [(u8, Group, &str, Criterion); 9] = [
    (1, Group::Thm1, "distance-bound-random-codes", random_code_bound),
    (2, Group::Thm1, "example-code", example_code),
    (3, Group::Thm1, "shortening-invariants", shortening_invariants),
    (4, Group::Thm2, "size-bounds", size_bounds),
    (5, Group::Thm2, "oracle-equivalence", oracle_equivalence),
    (6, Group::Thm2, "subadditivity", subadditivity),
    (7, Group::Thm3, "moment-recursion", moment_recursion),
    (8, Group::Thm3, "closed-forms", closed_forms),
    (9, Group::Thm3, "monte-carlo", monte_carlo),
];

/// Run the selected criteria in order. A criterion that hits an error is
/// recorded as failed with the error text rather than aborting the run.
pub fn run(config: &ReproduceConfig) -> ReproduceReport {
    let criteria: Vec<CriterionResult> = CRITERIA
        .iter()
        .filter(|(_, g, _, _)| config.only.is_none_or(|o| o == *g))
        .map(|&(id, group, key, f)| {
            let start = Instant::now();
            let mut tally = Tally::default();
            let outcome = f(config, &mut tally);
            let seconds = config.timing.then(|| start.elapsed().as_secs_f64());
            let passed = outcome.is_ok() && tally.violations == 0;
            if let Err(e) = outcome {
                tally.notes.insert(0, format!("error: {e}"));
            }
            CriterionResult {
                id,
                group,
                key,
                passed,
                checks: tally.checks,
                violations: tally.violations,
                detail: tally.notes.join("; "),
                seconds,
            }
        })
        .collect();
    ReproduceReport {
        format: FORMAT_VERSION,
        seed: config.seed,
        all_passed: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Upper limit on generator draws when filling the two halves of the
/// random-code sample.
const MAX_CODE_DRAWS: usize = 20_000;

fn bound_for(code: &crate::Code, loc: &LocalityStructure) -> Result<crate::BoundReport> {
    compute_t(BoundParams {
        n: code.n(),
        k: code.dimension().expect("systematic codes have q^k words") as usize,
        theta: loc.theta_size(),
        tau: loc.tau,
        r: loc.r,
        q: code.q(),
        linear: code.is_linear(),
    })
}

/// Seeded random codes with exhaustively verified capability, each with the
/// locality map the verification found. Half of them have `T > 0`, so the
/// bound is checked beyond plain Singleton.
fn random_codes(config: &ReproduceConfig) -> Result<Vec<(crate::Code, LocalityStructure)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let half = RANDOM_CODES / 2;
    let (mut penalised, mut plain) = (Vec::new(), Vec::new());
    for _ in 0..MAX_CODE_DRAWS {
        if penalised.len() >= RANDOM_CODES - half && plain.len() >= half {
            break;
        }
        let (code, loc) = random_local_code(&mut rng, RandomCodeParams::default())?;
        let (bucket, cap) = if bound_for(&code, &loc)?.t > 0 {
            (&mut penalised, RANDOM_CODES - half)
        } else {
            (&mut plain, half)
        };
        if bucket.len() >= cap {
            continue;
        }
        match verify_capability(&code, &loc, &config.budget)? {
            Capability::Holds { map } => bucket.push((code, LocalityStructure { map: Some(map), ..loc })),
            Capability::Fails { uncovered } => {
                return Err(Error::InvalidLocality(format!("generated structure fails at {uncovered}")))
            }
        }
    }
    if penalised.len() + plain.len() < RANDOM_CODES {
        return Err(Error::InvalidArgument(format!(
            "only {} codes with T > 0 in {MAX_CODE_DRAWS} draws",
            penalised.len()
        )));
    }
    penalised.extend(plain);
    Ok(penalised)
}

fn random_code_bound(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let mut penalised = 0;
    let mut tight = 0;
    for (code, loc) in random_codes(config)? {
        let k = code.dimension().expect("q^k words") as usize;
        let report = bound_for(&code, &loc)?;
        let d = min_distance(&code)? as i64;
        t.check(d <= report.bound, || {
            format!("n={} k={k} T={}: distance {d} > bound {}", code.n(), report.t, report.bound)
        });
        penalised += usize::from(report.t > 0);
        tight += usize::from(report.t > 0 && d == report.bound);
    }
    t.note(format!("{penalised} codes with T > 0, {tight} of them meeting the bound"));
    Ok(())
}

fn example_code(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let g = &config.golden.example_code;
    let ex = build_example_code(g.k)?;
    let n = ex.code.n();
    t.check(n == g.n, || format!("length {n}, expected {}", g.n));
    let d = min_distance_by_weight(&ex.code)?;
    t.check(d == g.min_distance, || format!("distance {d}, expected {}", g.min_distance));

    let holds = verify_capability(&ex.code, &ex.locality, &config.budget)?;
    t.check(holds.holds(), || "capability fails on positions 1..n-1".into());
    let all = LocalityStructure::new(
        n,
        PositionSet::range(0, n),
        ex.locality.tau,
        ex.locality.r,
        ex.locality.map.clone(),
    )?;
    match verify_capability(&ex.code, &all, &config.budget)? {
        Capability::Fails { uncovered } => t.check(uncovered == PositionSet::new(vec![n - 1]), || {
            format!("counterexample {uncovered}, expected {{{n}}}")
        }),
        Capability::Holds { .. } => t.check(false, || "capability holds on all positions".into()),
    }

    let report = compute_t(BoundParams {
        n,
        k: g.k,
        theta: n - 1,
        tau: ex.locality.tau,
        r: ex.locality.r,
        q: 2,
        linear: true,
    })?;
    t.check(report.t == g.t, || format!("T = {}, expected {}", report.t, g.t));
    t.check(report.bound == g.bound, || format!("bound {}, expected {}", report.bound, g.bound));
    t.check(d as i64 <= report.bound, || format!("distance {d} above bound {}", report.bound));
    Ok(())
}

fn shortening_invariants(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let ex = build_example_code(config.golden.example_code.k)?;
    let mut cases = vec![(ex.code, ex.locality)];
    cases.extend(random_codes(config)?);
    for (i, (code, loc)) in cases.iter().enumerate() {
        let trace = shorten(code, loc)?;
        let k = code.dimension().expect("q^k words") as usize;
        for step in &trace.iterations {
            t.check(step.size_floor_ok, || {
                format!("case {i} iteration {}: {} words < q^(k - j r)", step.iteration, step.subcode_size)
            });
            t.check(step.reach_floor_ok, || {
                format!("case {i} iteration {}: reach {} < j tau", step.iteration, step.reach.len())
            });
            t.check(step.fiber_floor_ok, || format!("case {i} iteration {}: fiber too small", step.iteration));
        }
        t.check(trace.fixed_positions_constant, || format!("case {i}: pinned positions vary"));
        let d = min_distance(code)? as i64;
        t.check(trace.certified_bound >= d, || {
            format!("case {i} (k={k}): certified {} below distance {d}", trace.certified_bound)
        });
    }
    Ok(())
}

/// Uniform, shell and the seeded random monotone specs for dimension `d`,
/// random grids generated at side 16.
fn lattice_specs(seed: u64, d: usize) -> Result<Vec<WeightSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((d as u64) << 32));
    let mut specs = vec![WeightSpec::Uniform, WeightSpec::Shell];
    for _ in 0..RANDOM_SPECS {
        specs.push(random_monotone_spec(&mut rng, 16, d)?);
    }
    Ok(specs)
}

fn epsilons() -> [BigRational; 3] {
    [rat(1, 4), rat(1, 2), rat(3, 4)]
}

fn size_bounds(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let ms: Vec<usize> = (1..=16).collect();
    for d in 1..=2 {
        for (si, spec) in lattice_specs(config.seed, d)?.iter().enumerate() {
            for eps in epsilons() {
                let table = subadditive_sweep(spec, &eps, d, &ms, false)?;
                for row in &table.rows {
                    t.check(row.lower_ok && row.upper_ok, || {
                        format!("spec {si} d={d} eps={} m={}: b_m={} out of bounds", Ratio(eps.clone()), row.m, row.b_m)
                    });
                }
            }
        }
    }
    Ok(())
}

/// Lattices up to this many points are compared against the definition
/// for every candidate code.
const DEFINITION_TABLE_POINTS: usize = 12;

fn oracle_equivalence(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    for d in 1..=2usize {
        for (si, spec) in lattice_specs(config.seed, d)?.iter().enumerate() {
            for m in (1..=16usize).take_while(|m| m.pow(d as u32) <= 16) {
                let lat = spec.lattice(m, d)?;
                for eps in epsilons() {
                    let greedy = min_rep_size(&lat, &eps)?.size;
                    let brute = brute_force_min_rep(&lat, &eps)?;
                    t.check(greedy == brute, || {
                        format!("spec {si} m={m} d={d}: greedy {greedy} vs oracle {brute}")
                    });
                    if lat.size() > DEFINITION_TABLE_POINTS {
                        continue;
                    }
                    let table = representative_table(&lat, &eps)?;
                    let disagreements = table
                        .iter()
                        .enumerate()
                        .filter(|&(mask, &ok)| {
                            is_representative(&lat, &mask_code(&lat, &eps, mask)).map_or(true, |r| r != ok)
                        })
                        .count();
                    t.check(disagreements == 0, || {
                        format!("spec {si} m={m} d={d}: {disagreements} codes disagree with the definition")
                    });
                }
            }
        }
    }
    Ok(())
}

fn subadditivity(_: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let half = rat(1, 2);
    let table = subadditive_sweep(&WeightSpec::Shell, &half, 2, &[2, 4, 8, 16], true)?;
    for c in table.multiples.iter().filter(|c| c.m == 2 * c.r) {
        t.check(c.ok, || format!("b_{}/{}^2 = {} above b_{}/{}^2 = {}", c.m, c.m, c.ratio_m, c.r, c.r, c.ratio_r));
    }
    for m in 2..=16 {
        let lat = WeightSpec::Shell.lattice(m, 2)?;
        for r in 1..=m {
            let comp = compose_minimal(&lat, r, &half)?;
            t.check(comp.representative, || format!("m={m} r={r}: composed code not representative"));
            t.check(comp.within_bound == Some(true), || {
                format!("m={m} r={r}: {} points above {:?}", comp.code.len(), comp.size_bound)
            });
        }
    }
    Ok(())
}

fn moment_recursion(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let table = moment_table(12, 4)?;
    for n in 1..=12 {
        for s in 1..=4 {
            let oracle = stirling_moment(n, s as u32)?;
            t.check(table.get(n, s) == &oracle, || format!("mu_({n},{s}) differs from the Stirling oracle"));
        }
    }
    for n in 1..=7 {
        let brute = moments_by_enumeration(n, 4)?;
        for s in 1..=4 {
            t.check(table.get(n, s) == &brute[s - 1], || format!("mu_({n},{s}) differs from enumeration"));
        }
    }
    let g = &config.golden;
    let v = |n: usize| table.get(n, 2) - table.get(n, 1) * table.get(n, 1);
    let stir_v = |n: usize| -> Result<BigRational> {
        let m1 = stirling_moment(n, 1)?;
        Ok(stirling_moment(n, 2)? - &m1 * &m1)
    };
    for (name, got, oracle, want) in [
        ("mu_(3,1)", table.get(3, 1).clone(), stirling_moment(3, 1)?, &g.moments.mu_3_1),
        ("mu_(3,2)", table.get(3, 2).clone(), stirling_moment(3, 2)?, &g.moments.mu_3_2),
        ("v_2", v(2), stir_v(2)?, &g.variances.v_2),
        ("v_3", v(3), stir_v(3)?, &g.variances.v_3),
    ] {
        t.check(&got == want.inner() && &oracle == want.inner(), || {
            format!("{name} = {} (oracle {}), reference {want}", Ratio(got.clone()), Ratio(oracle.clone()))
        });
    }
    Ok(())
}

const RECURSION_N: usize = 1000;

fn closed_forms(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let failure = mean_recursion_failure(RECURSION_N);
    t.check(failure.is_none(), || format!("mean recursion fails at n={failure:?}"));
    let failure = variance_recursion_failure(RECURSION_N);
    t.check(failure.is_none(), || format!("variance recursion fails at n={failure:?}"));

    let from_one = propagate_mean(BigRational::one(), RECURSION_N);
    let from_two = propagate_mean(rat(2, 1), RECURSION_N);
    let mut h = BigRational::zero();
    let (mut same, mut apart) = (0usize, 0usize);
    for n in 1..=RECURSION_N {
        h += BigRational::new(BigInt::one(), BigInt::from(n));
        same += usize::from(from_one[n - 1] == h);
        apart += usize::from(from_two[n - 1] != h);
    }
    t.check(same == RECURSION_N, || format!("b_1 = 1 matches H_n at {same} of {RECURSION_N}"));
    t.check(apart == RECURSION_N, || format!("b_1 = 2 differs from H_n at {apart} of {RECURSION_N}"));

    let g = &config.golden;
    for (name, got, want) in [
        ("H_8", mean(8)?, &g.harmonic.H_8),
        ("H_10", mean(10)?, &g.harmonic.H_10),
        ("M_8", variance(8)?, &g.variance_8),
    ] {
        t.check(&got == want.inner(), || format!("{name} = {}, reference {want}", Ratio(got.clone())));
    }
    t.check(harmonic(1) == BigRational::one() && variance(1)?.is_zero(), || "n = 1 start values".into());
    Ok(())
}

fn monte_carlo(config: &ReproduceConfig, t: &mut Tally) -> Result<()> {
    let trials = MC_TRIALS as f64;
    let s = sample_cycles(8, MC_TRIALS, config.seed)?;
    let h8 = config.golden.harmonic.H_8.to_f64();
    let m8 = config.golden.variance_8.to_f64();
    let window = 4.0 * (m8 / trials).sqrt();
    t.check((s.mean - h8).abs() <= window, || {
        format!("mean {} outside H_8 +- {window:.5}", s.mean)
    });
    let p_window = 4.0 * ((1.0 / 8.0) * (7.0 / 8.0) / trials).sqrt();
    for (k, &c) in s.first_cycle_hist.iter().enumerate() {
        let p = c as f64 / trials;
        t.check((p - 0.125).abs() <= p_window, || format!("P(L_1 = {}) = {p} outside 1/8 +- {p_window:.5}", k + 1));
    }

    let freq = shuffle_frequencies(4, MC_TRIALS, config.seed)?;
    let expected = trials / 24.0;
    let chi2: f64 = freq.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    t.check(chi2 <= CHI2_23_9999, || format!("shuffle chi-square {chi2:.3} above {CHI2_23_9999:.3}"));
    t.note(format!("chi2={chi2:.3}"));

    // given L_1 = 2 on n = 4, both relabelled survivors are equally likely
    let s4 = sample_cycles(4, MC_TRIALS, config.seed.wrapping_add(1))?;
    let given = s4.first_cycle_hist[1] as f64;
    let counts = &s4.induced.as_ref().expect("n = 4 tallies induced permutations")[1];
    let se = (0.25 / given).sqrt();
    for (rank, &c) in counts.iter().enumerate() {
        let f = c as f64 / given;
        t.check((f - 0.5).abs() <= 4.0 * se, || format!("sigma rank {rank} given L_1 = 2: frequency {f}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_golden_parses() {
        let g = Golden::embedded();
        assert_eq!(g.example_code.n, 131);
        assert_eq!(g.moments.mu_3_2, Ratio::new(23, 6));
        assert!(Golden::parse("{\"format\": 1}").is_err());
    }

    #[test]
    fn groups_parse() {
        assert_eq!("thm3".parse::<Group>().unwrap(), Group::Thm3);
        assert!("thm4".parse::<Group>().is_err());
    }

    #[test]
    fn thm3_filter_and_corrupted_reference() {
        let mut cfg = ReproduceConfig {
            only: Some(Group::Thm3),
            ..Default::default()
        };
        cfg.golden.moments.mu_3_2 = Ratio::new(7, 2);
        let report = run(&cfg);
        assert_eq!(report.criteria.iter().map(|c| c.id).collect::<Vec<_>>(), vec![7, 8, 9]);
        let failed: Vec<u8> = report.failures().map(|c| c.id).collect();
        assert_eq!(failed, vec![7]);
        assert!(report.criteria[0].detail.contains("mu_(3,2)"));
    }
}
