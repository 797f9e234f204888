use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

use crate::budget::{binomial_saturating, Budget};
use crate::code::{Code, ColumnIndex, PositionSet};
use crate::error::{Error, Result};
use crate::FORMAT_VERSION;

/// `(Θ, τ, r)`: every `τ`-subset `P` of `Θ` should have a locality set
/// `T_P`, disjoint from `P` and of size at most `r`, that determines all of
/// `P`. The map, when present, lists those sets explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityStructure {
    pub theta: PositionSet,
    pub tau: usize,
    pub r: usize,
    pub map: Option<BTreeMap<PositionSet, PositionSet>>,
}

impl LocalityStructure {
    /// Validates shapes against block length `n`. Whether the map entries
    /// actually determine anything is [`verify_capability`]'s job.
    pub fn new(
        n: usize,
        theta: PositionSet,
        tau: usize,
        r: usize,
        map: Option<BTreeMap<PositionSet, PositionSet>>,
    ) -> Result<Self> {
        theta.check_bounds(n)?;
        if tau == 0 || r == 0 {
            return Err(Error::InvalidLocality("tau and r must be at least 1".into()));
        }
        if tau > theta.len() {
            return Err(Error::InvalidLocality(format!(
                "tau={tau} exceeds #theta={}",
                theta.len()
            )));
        }
        if let Some(map) = &map {
            for (p, t) in map {
                t.check_bounds(n)?;
                if p.len() != tau || !p.is_subset(&theta) {
                    return Err(Error::InvalidLocality(format!("map key {p} is not a {tau}-subset of theta")));
                }
                if t.len() > r {
                    return Err(Error::InvalidLocality(format!("locality set {t} for {p} exceeds r={r}")));
                }
                if !t.is_disjoint(p) {
                    return Err(Error::InvalidLocality(format!("locality set {t} intersects {p}")));
                }
            }
        }
        Ok(Self { theta, tau, r, map })
    }

    pub fn theta_size(&self) -> usize {
        self.theta.len()
    }

    /// Parameter choices that are accepted but fall outside the `τ, r >= 2`
    /// regime of the general definition.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.tau < 2 {
            out.push(format!("tau={} is below 2; accepted as in the binary example code", self.tau));
        }
        if self.r < 2 {
            out.push(format!("r={} is below 2", self.r));
        }
        out
    }

    pub fn read(path: &Path, n: usize) -> Result<Self> {
        let raw = std::fs::read_to_string(path)?;
        serde_json::from_str::<LocalityFile>(&raw)?.into_structure(n)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalityEntry {
    pub p: PositionSet,
    pub t: PositionSet,
}

/// On-disk locality structure, positions 1-based:
/// `{"format": 1, "theta": [..], "tau": 1, "r": 3, "map": [{"p": [..], "t": [..]}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalityFile {
    #[serde(default = "default_format")]
    pub format: u32,
    pub theta: PositionSet,
    pub tau: usize,
    pub r: usize,
    #[serde(default)]
    pub map: Option<Vec<LocalityEntry>>,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

impl LocalityFile {
    pub fn from_structure(loc: &LocalityStructure) -> Self {
        Self {
            format: FORMAT_VERSION,
            theta: loc.theta.clone(),
            tau: loc.tau,
            r: loc.r,
            map: loc.map.as_ref().map(|m| {
                m.iter()
                    .map(|(p, t)| LocalityEntry {
                        p: p.clone(),
                        t: t.clone(),
                    })
                    .collect()
            }),
        }
    }

    pub fn into_structure(self, n: usize) -> Result<LocalityStructure> {
        if self.format != FORMAT_VERSION {
            return Err(Error::InvalidLocality(format!("unsupported format {}", self.format)));
        }
        let map = match self.map {
            None => None,
            Some(entries) => {
                let mut m = BTreeMap::new();
                for e in entries {
                    if m.insert(e.p.clone(), e.t).is_some() {
                        return Err(Error::InvalidLocality(format!("duplicate map key {}", e.p)));
                    }
                }
                Some(m)
            }
        };
        LocalityStructure::new(n, self.theta, self.tau, self.r, map)
    }
}

/// Outcome of [`verify_capability`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capability {
    /// A locality set for every `τ`-subset of `Θ` (supplied or found).
    Holds { map: BTreeMap<PositionSet, PositionSet> },
    /// The lexicographically first `τ`-subset with no valid locality set.
    Fails { uncovered: PositionSet },
}

impl Capability {
    pub fn holds(&self) -> bool {
        matches!(self, Capability::Holds { .. })
    }
}

fn entry_valid(index: &ColumnIndex, p: &PositionSet, t: &PositionSet, r: usize) -> bool {
    t.len() <= r && t.is_disjoint(p) && index.determines(t.as_slice(), p.as_slice())
}

/// First locality set of size `<= r` (smallest size, then lexicographic)
/// that determines all of `p`.
fn search_locality(index: &ColumnIndex, n: usize, p: &PositionSet, r: usize) -> Option<PositionSet> {
    let pool: Vec<usize> = (0..n).filter(|&x| !p.contains(x)).collect();
    (0..=r.min(pool.len())).find_map(|size| {
        pool.iter()
            .copied()
            .combinations(size)
            .find(|t| index.determines(t, p.as_slice()))
            .map(PositionSet::new)
    })
}

/// Check the `(Θ, τ, r)` capability extensionally.
///
/// Supplied map entries are checked directly. Any `τ`-subset without a
/// valid supplied entry is searched exhaustively over all candidate sets of
/// size `<= r`; one budget check is one candidate tested against one
/// 64-word block of the code.
pub fn verify_capability(code: &Code, loc: &LocalityStructure, budget: &Budget) -> Result<Capability> {
    let n = code.n();
    loc.theta.check_bounds(n)?;
    let index = ColumnIndex::new(code);
    let blocks = index.blocks() as u128;

    let subsets: Vec<PositionSet> = loc
        .theta
        .iter()
        .combinations(loc.tau)
        .map(PositionSet::new)
        .collect();

    let supplied = |p: &PositionSet| -> Option<PositionSet> {
        let t = loc.map.as_ref()?.get(p)?;
        entry_valid(&index, p, t, loc.r).then(|| t.clone())
    };
    let checked: Vec<Option<PositionSet>> = subsets.par_iter().map(|p| supplied(p)).collect();

    let to_search = checked.iter().filter(|c| c.is_none()).count() as u128;
    if to_search > 0 {
        let per_subset: u128 = (0..=loc.r)
            .map(|s| binomial_saturating(n - loc.tau, s))
            .fold(0u128, |a, b| a.saturating_add(b));
        let needed = to_search.saturating_mul(per_subset).saturating_mul(blocks);
        budget.check("locality set search (supply an explicit locality map)", needed)?;
    }

    let resolved: Vec<Option<PositionSet>> = subsets
        .par_iter()
        .zip(checked)
        .map(|(p, c)| c.or_else(|| search_locality(&index, n, p, loc.r)))
        .collect();

    let mut map = BTreeMap::new();
    for (p, t) in subsets.into_iter().zip(resolved) {
        match t {
            Some(t) => {
                map.insert(p, t);
            }
            None => return Ok(Capability::Fails { uncovered: p }),
        }
    }
    Ok(Capability::Holds { map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::is_determined;

    fn repetition3() -> Code {
        Code::binary(3, vec![vec![0, 0, 0], vec![1, 1, 1]], None).unwrap()
    }

    #[test]
    fn repetition_code_has_unit_locality() {
        let code = repetition3();
        let loc = LocalityStructure::new(3, PositionSet::range(0, 3), 1, 1, None).unwrap();
        let Capability::Holds { map } = verify_capability(&code, &loc, &Budget::default()).unwrap() else {
            panic!("repetition code is locally recoverable");
        };
        assert_eq!(map.len(), 3);
        for (p, t) in &map {
            assert_eq!(t.len(), 1);
            assert!(is_determined(&code, t, p.as_slice()[0]).unwrap());
        }
    }

    #[test]
    fn free_positions_fail() {
        // position 3 is free
        let words = vec![vec![0, 0, 0], vec![0, 0, 1], vec![1, 1, 0], vec![1, 1, 1]];
        let code = Code::binary(3, words, None).unwrap();
        let loc = LocalityStructure::new(3, PositionSet::range(0, 3), 1, 2, None).unwrap();
        let cap = verify_capability(&code, &loc, &Budget::default()).unwrap();
        assert_eq!(
            cap,
            Capability::Fails {
                uncovered: PositionSet::new(vec![2])
            }
        );
        let loc = LocalityStructure::new(3, PositionSet::range(0, 2), 1, 1, None).unwrap();
        assert!(verify_capability(&code, &loc, &Budget::default()).unwrap().holds());
    }

    #[test]
    fn invalid_supplied_entries_are_searched() {
        let code = repetition3();
        // the empty set determines no position of the repetition code
        let mut map = BTreeMap::new();
        map.insert(PositionSet::new(vec![0]), PositionSet::empty());
        let loc = LocalityStructure::new(3, PositionSet::new(vec![0]), 1, 1, Some(map)).unwrap();
        let Capability::Holds { map } = verify_capability(&code, &loc, &Budget::default()).unwrap() else {
            panic!()
        };
        assert_eq!(map[&PositionSet::new(vec![0])], PositionSet::new(vec![1]));
    }

    #[test]
    fn budget_applies_only_to_searches() {
        let code = repetition3();
        let tiny = Budget::new(1).unwrap();
        let loc = LocalityStructure::new(3, PositionSet::range(0, 3), 1, 1, None).unwrap();
        assert!(matches!(
            verify_capability(&code, &loc, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
        let map: BTreeMap<_, _> = (0..3)
            .map(|j| (PositionSet::new(vec![j]), PositionSet::new(vec![(j + 1) % 3])))
            .collect();
        let loc = LocalityStructure::new(3, PositionSet::range(0, 3), 1, 1, Some(map)).unwrap();
        assert!(verify_capability(&code, &loc, &tiny).unwrap().holds());
    }

    #[test]
    fn structure_validation() {
        let theta = PositionSet::range(0, 3);
        assert!(LocalityStructure::new(3, theta.clone(), 0, 1, None).is_err());
        assert!(LocalityStructure::new(3, theta.clone(), 4, 1, None).is_err());
        assert!(LocalityStructure::new(2, theta.clone(), 1, 1, None).is_err());
        let mut bad = BTreeMap::new();
        bad.insert(PositionSet::new(vec![0]), PositionSet::new(vec![0, 1]));
        assert!(LocalityStructure::new(3, theta.clone(), 1, 2, Some(bad)).is_err());
        let loc = LocalityStructure::new(3, theta, 1, 1, None).unwrap();
        assert_eq!(loc.warnings().len(), 2);
    }

    #[test]
    fn file_round_trip() {
        let mut map = BTreeMap::new();
        map.insert(PositionSet::new(vec![0]), PositionSet::new(vec![1, 2]));
        let loc = LocalityStructure::new(3, PositionSet::new(vec![0]), 1, 2, Some(map)).unwrap();
        let json = serde_json::to_string(&LocalityFile::from_structure(&loc)).unwrap();
        assert_eq!(json, r#"{"format":1,"theta":[1],"tau":1,"r":2,"map":[{"p":[1],"t":[2,3]}]}"#);
        let back: LocalityFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_structure(3).unwrap(), loc);
    }
}
