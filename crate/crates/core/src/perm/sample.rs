use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{cycle_count_and_first, Permutation};
use crate::error::{Error, Result};

/// Trials per independent sub-stream. Chunk `c` draws from the ChaCha8
/// stream `c` of the seed, so results do not depend on the thread count.
pub const SAMPLE_CHUNK: u64 = 1 << 16;
/// Largest `n` for which the induced permutations are tallied.
pub const INDUCED_MAX_N: usize = 6;

/// Integer tallies of a sampling run; floating point appears only in the
/// derived `mean` and `variance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSummary {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub count_sum: u64,
    pub count_sq_sum: u64,
    /// `count_hist[k-1]`: trials with `N_n = k`.
    pub count_hist: Vec<u64>,
    /// `first_cycle_hist[k-1]`: trials with `L_1 = k`.
    pub first_cycle_hist: Vec<u64>,
    /// `induced[k-1][rank σ]` given `L_1 = k`, for `n <= INDUCED_MAX_N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub induced: Option<Vec<Vec<u64>>>,
}

impl SampleSummary {
    fn empty(n: usize, seed: u64) -> Self {
        let induced = (n <= INDUCED_MAX_N).then(|| (1..=n).map(|k| vec![0; factorial(n - k)]).collect());
        Self {
            n,
            trials: 0,
            seed,
            mean: 0.0,
            variance: 0.0,
            count_sum: 0,
            count_sq_sum: 0,
            count_hist: vec![0; n],
            first_cycle_hist: vec![0; n],
            induced,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.count_sum += other.count_sum;
        self.count_sq_sum += other.count_sq_sum;
        add_into(&mut self.count_hist, &other.count_hist);
        add_into(&mut self.first_cycle_hist, &other.first_cycle_hist);
        if let (Some(a), Some(b)) = (self.induced.as_mut(), other.induced.as_ref()) {
            for (x, y) in a.iter_mut().zip(b) {
                add_into(x, y);
            }
        }
        self
    }

    fn finish(mut self) -> Self {
        let t = self.trials as f64;
        self.mean = self.count_sum as f64 / t;
        self.variance = self.count_sq_sum as f64 / t - self.mean * self.mean;
        self
    }
}

fn add_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn chunks(trials: u64) -> Vec<(u64, u64)> {
    let count = trials.div_ceil(SAMPLE_CHUNK);
    (0..count)
        .map(|c| (c, SAMPLE_CHUNK.min(trials - c * SAMPLE_CHUNK)))
        .collect()
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Uniform permutations by Fisher–Yates shuffles of the identity.
pub fn sample_cycles(n: usize, trials: u64, seed: u64) -> Result<SampleSummary> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let merged = chunks(trials)
        .into_par_iter()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut acc = SampleSummary::empty(n, seed);
            let mut perm: Vec<usize> = Vec::with_capacity(n);
            let mut seen = Vec::with_capacity(n);
            for _ in 0..count {
                perm.clear();
                perm.extend(0..n);
                perm.shuffle(&mut rng);
                let (cycles, first) = cycle_count_and_first(&perm, &mut seen);
                acc.trials += 1;
                acc.count_sum += cycles as u64;
                acc.count_sq_sum += (cycles * cycles) as u64;
                acc.count_hist[cycles - 1] += 1;
                acc.first_cycle_hist[first - 1] += 1;
                if let Some(ind) = acc.induced.as_mut() {
                    let (_, sigma) = Permutation { map: perm.clone() }.induced();
                    ind[first - 1][sigma.rank()] += 1;
                }
            }
            acc
        })
        .reduce(|| SampleSummary::empty(n, seed), SampleSummary::merge);
    Ok(merged.finish())
}

/// How often each of the `n!` permutations (by lexicographic rank) comes
/// out of the shuffle.
pub fn shuffle_frequencies(n: usize, trials: u64, seed: u64) -> Result<Vec<u64>> {
    if n == 0 || n > 8 {
        return Err(Error::InvalidArgument(format!("frequency table needs 1 <= n <= 8, got {n}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let slots = factorial(n);
    Ok(chunks(trials)
        .into_par_iter()
        .map(|(chunk, count)| {
            let mut rng = chunk_rng(seed, chunk);
            let mut freq = vec![0u64; slots];
            let mut perm = Permutation::identity(n);
            for _ in 0..count {
                perm.map.clear();
                perm.map.extend(0..n);
                perm.map.shuffle(&mut rng);
                freq[perm.rank()] += 1;
            }
            freq
        })
        .reduce(
            || vec![0u64; slots],
            |mut a, b| {
                add_into(&mut a, &b);
                a
            },
        ))
}
