//! Cycle structure of uniform random permutations: exact moments of the
//! cycle count, their closed forms, a Stirling-number oracle and a seeded
//! sampler.

mod moments;
mod sample;
mod stirling;

pub use moments::{
    harmonic, mean, mean_recursion_failure, moment_table, moments_by_enumeration, propagate_mean, variance,
    variance_recursion_failure, MomentTable,
};
pub use sample::{sample_cycles, shuffle_frequencies, SampleSummary, INDUCED_MAX_N, SAMPLE_CHUNK};
pub use stirling::{stirling_distribution, stirling_first, stirling_moment, MAX_STIRLING_N};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{1..n}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Entry `i` (0-based) holds `π(i+1)` as a 1-based value.
    pub fn new(one_based: &[usize]) -> Result<Self> {
        let n = one_based.len();
        if one_based.iter().any(|&v| v == 0 || v > n) {
            return Err(Error::InvalidArgument(format!("values must lie in 1..={n}")));
        }
        Self::from_zero_based(one_based.iter().map(|v| v - 1).collect())
    }

    pub fn from_zero_based(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= map.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument("mapping is not a bijection".into()));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// 0-based image.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.map.iter().map(|v| v + 1).collect()
    }

    /// Position in lexicographic order of all `n!` permutations (Lehmer code).
    pub fn rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        for i in 0..n {
            let smaller = self.map[i + 1..].iter().filter(|&&v| v < self.map[i]).count();
            rank = rank * (n - i) + smaller;
        }
        rank
    }

    pub fn cycles(&self) -> CycleDecomposition {
        cycle_decompose(self)
    }

    /// `σ` on `{1..n-L_1}`: the survivors `j_1 < .. < j_{n-L_1}` outside the
    /// cycle of 1 are relabelled in increasing order, so `π(j_l) = j_{σ(l)}`.
    /// Returns `L_1` and `σ`.
    pub fn induced(&self) -> (usize, Permutation) {
        let n = self.n();
        let mut in_first = vec![false; n];
        let mut len = 0;
        if n > 0 {
            let mut x = 0;
            loop {
                in_first[x] = true;
                len += 1;
                x = self.map[x];
                if x == 0 {
                    break;
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let survivors: Vec<usize> = (0..n).filter(|&j| !in_first[j]).collect();
        for (l, &j) in survivors.iter().enumerate() {
            label[j] = l;
        }
        let sigma = survivors.iter().map(|&j| label[self.map[j]]).collect();
        (len, Permutation { map: sigma })
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Cycles in canonical order, 1-based. The cycle of 1 comes first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleDecomposition {
    pub cycles: Vec<Vec<usize>>,
    pub count: usize,
    pub first_cycle_length: usize,
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let body: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// Each cycle starts at its smallest element; cycles ordered by that start.
pub fn cycle_decompose(p: &Permutation) -> CycleDecomposition {
    let n = p.n();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x + 1);
            x = p.apply(x);
        }
        cycles.push(cycle);
    }
    CycleDecomposition {
        count: cycles.len(),
        first_cycle_length: cycles.first().map_or(0, Vec::len),
        cycles,
    }
}

/// Cycle count only, without allocating the cycles.
pub(crate) fn cycle_count_and_first(map: &[usize], seen: &mut Vec<bool>) -> (usize, usize) {
    seen.clear();
    seen.resize(map.len(), false);
    let mut count = 0;
    let mut first = 0;
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut x = start;
        let mut len = 0;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = map[x];
        }
        if start == 0 {
            first = len;
        }
    }
    (count, first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn example() -> Permutation {
        // π(1)=3, π(3)=4, π(4)=5, π(5)=1, π(2)=6, π(6)=7, π(7)=2, π(8)=9, π(9)=8
        Permutation::new(&[3, 6, 4, 5, 1, 7, 2, 9, 8]).unwrap()
    }

    #[test]
    fn decomposes_worked_example() {
        let c = example().cycles();
        assert_eq!(c.to_string(), "(1 3 4 5)(2 6 7)(8 9)");
        assert_eq!((c.count, c.first_cycle_length), (3, 4));
    }

    #[test]
    fn identity_and_long_cycle() {
        let id = Permutation::identity(5).cycles();
        assert_eq!((id.count, id.first_cycle_length), (5, 1));
        let long = Permutation::new(&[2, 3, 4, 5, 1]).unwrap().cycles();
        assert_eq!((long.count, long.first_cycle_length), (1, 5));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(&[1, 1]).is_err());
        assert!(Permutation::new(&[0, 1]).is_err());
        assert!(Permutation::new(&[1, 3]).is_err());
        assert!(serde_json::from_str::<Permutation>("[2,2]").is_err());
    }

    #[test]
    fn induced_relabelling() {
        // survivors 2,6,7,8,9 map to 6,7,2,9,8
        let (len, sigma) = example().induced();
        assert_eq!(len, 4);
        assert_eq!(sigma.to_one_based(), vec![2, 3, 1, 5, 4]);
        let (len, sigma) = Permutation::new(&[2, 3, 1]).unwrap().induced();
        assert_eq!((len, sigma.n()), (3, 0));
    }

    #[test]
    fn induced_is_uniform_exactly() {
        // over all of S_5: for fixed L_1 = k every σ occurs equally often
        let n = 5;
        for k in 1..=n {
            let mut counts = std::collections::HashMap::new();
            for p in (0..n).permutations(n) {
                let (len, sigma) = Permutation::from_zero_based(p).unwrap().induced();
                if len == k {
                    *counts.entry(sigma.rank()).or_insert(0usize) += 1;
                }
            }
            let m: usize = (1..=n - k).product();
            assert_eq!(counts.len(), m);
            assert!(counts.values().all_equal());
        }
    }

    #[test]
    fn rank_is_lexicographic() {
        for (i, p) in (0..4).permutations(4).enumerate() {
            assert_eq!(Permutation::from_zero_based(p).unwrap().rank(), i);
        }
    }

    #[test]
    fn fast_count_matches() {
        let mut seen = Vec::new();
        for p in (0..5).permutations(5) {
            let c = Permutation::from_zero_based(p.clone()).unwrap().cycles();
            assert_eq!(cycle_count_and_first(&p, &mut seen), (c.count, c.first_cycle_length));
        }
    }
}
