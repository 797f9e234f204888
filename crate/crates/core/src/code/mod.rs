//! Block codes over finite alphabets: Hamming distance, minimum distance,
//! and the determination / reach machinery used by the locality bounds.
//!
//! Positions are 0-based throughout the library API. Everything that crosses
//! a file or terminal boundary ([`PositionSet`]'s serde form, [`Display`]
//! impls, the CLI) is 1-based.
//!
//! [`Display`]: std::fmt::Display

mod columns;
mod delta;
mod io;

pub use columns::ColumnIndex;
pub use delta::{delta_bound, delta_fits, ExtCount, DELTA_CEILING};
pub use io::CodeFile;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::budget::{binomial_saturating, Budget};
use crate::error::{Error, Result};

/// One alphabet symbol as it appears in files.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Token {
    Int(i64),
    Str(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(v) => write!(f, "{v}"),
            Token::Str(s) => f.write_str(s),
        }
    }
}

/// Ordered set of distinct symbols. Words store symbol indices into it, so
/// the order here is the order used for every lexicographic tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<Token>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Token>) -> Result<Self> {
        if symbols.len() < 2 {
            return Err(Error::InvalidCode(format!(
                "alphabet needs at least 2 symbols, got {}",
                symbols.len()
            )));
        }
        if symbols.len() > u8::MAX as usize + 1 {
            return Err(Error::InvalidCode("alphabets are limited to 256 symbols".into()));
        }
        let distinct: HashSet<_> = symbols.iter().collect();
        if distinct.len() != symbols.len() {
            return Err(Error::InvalidCode("alphabet symbols must be distinct".into()));
        }
        Ok(Self { symbols })
    }

    /// `{0, 1, ..., q-1}` as integer tokens.
    pub fn numeric(q: usize) -> Result<Self> {
        Self::new((0..q as i64).map(Token::Int).collect())
    }

    pub fn binary() -> Self {
        Self::numeric(2).expect("binary alphabet is valid")
    }

    pub fn q(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Token] {
        &self.symbols
    }

    pub fn index_of(&self, t: &Token) -> Option<u8> {
        self.symbols.iter().position(|s| s == t).map(|i| i as u8)
    }
}

/// Sorted, duplicate-free set of 0-based positions. Serializes 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionSet(Vec<usize>);

impl PositionSet {
    pub fn new(mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        Self(positions)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Build from 1-based indices, rejecting 0 and anything above `n`.
    pub fn from_one_based(n: usize, positions: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(positions.len());
        for &p in positions {
            if p == 0 || p > n {
                return Err(Error::PositionOutOfRange { pos: p, n });
            }
            out.push(p - 1);
        }
        Ok(Self::new(out))
    }

    /// `{lo, ..., hi-1}`, 0-based.
    pub fn range(lo: usize, hi: usize) -> Self {
        Self((lo..hi).collect())
    }

    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&p) if p >= n => Err(Error::PositionOutOfRange { pos: p + 1, n }),
            _ => Ok(()),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &PositionSet) -> PositionSet {
        Self::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    pub fn difference(&self, other: &PositionSet) -> PositionSet {
        Self(self.iter().filter(|&p| !other.contains(p)).collect())
    }

    pub fn intersection(&self, other: &PositionSet) -> PositionSet {
        Self(self.iter().filter(|&p| other.contains(p)).collect())
    }

    pub fn is_subset(&self, other: &PositionSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn is_disjoint(&self, other: &PositionSet) -> bool {
        self.iter().all(|p| !other.contains(p))
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|p| p + 1).collect()
    }
}

impl fmt::Display for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_one_based().iter().join(","))
    }
}

impl FromIterator<usize> for PositionSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

impl Serialize for PositionSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PositionSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<usize>::deserialize(d)?;
        if raw.contains(&0) {
            return Err(serde::de::Error::custom("positions are 1-based"));
        }
        Ok(Self::new(raw.into_iter().map(|p| p - 1).collect()))
    }
}

/// A block code: a set of distinct length-`n` words over an [`Alphabet`].
///
/// Words hold symbol indices. The linearity flag is only ever `true` after
/// the word set has been checked for closure under componentwise addition
/// modulo a prime `q`.
#[derive(Debug, Clone)]
pub struct Code {
    alphabet: Alphabet,
    n: usize,
    words: Vec<Vec<u8>>,
    linear: bool,
}

impl Code {
    /// `linear`: `Some(true)` is verified and rejected if false, `Some(false)`
    /// is taken at face value, `None` runs the closure check for prime `q`.
    pub fn new(alphabet: Alphabet, n: usize, words: Vec<Vec<u8>>, linear: Option<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidCode("block length must be positive".into()));
        }
        if words.is_empty() {
            return Err(Error::InvalidCode("code has no words".into()));
        }
        let q = alphabet.q();
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::InvalidCode(format!(
                    "word {} has length {}, expected {n}",
                    i + 1,
                    w.len()
                )));
            }
            if let Some(&s) = w.iter().find(|&&s| s as usize >= q) {
                return Err(Error::InvalidCode(format!("word {} uses symbol index {s} >= q={q}", i + 1)));
            }
        }
        let distinct: HashSet<&[u8]> = words.iter().map(|w| w.as_slice()).collect();
        if distinct.len() != words.len() {
            return Err(Error::InvalidCode("words must be distinct".into()));
        }
        let mut code = Self {
            alphabet,
            n,
            words,
            linear: false,
        };
        code.linear = match linear {
            Some(true) => {
                if !is_prime(q) {
                    return Err(Error::InvalidCode(format!(
                        "linearity can only be verified for prime q, got q={q}"
                    )));
                }
                if !code.closed_under_addition() {
                    return Err(Error::InvalidCode(
                        "declared linear but not closed under addition".into(),
                    ));
                }
                true
            }
            Some(false) => false,
            None => is_prime(q) && code.closed_under_addition(),
        };
        Ok(code)
    }

    pub fn binary(n: usize, words: Vec<Vec<u8>>, linear: Option<bool>) -> Result<Self> {
        Self::new(Alphabet::binary(), n, words, linear)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn q(&self) -> usize {
        self.alphabet.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// True only when closure under addition mod prime `q` has been verified.
    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// `k` when the code has exactly `q^k` words.
    pub fn dimension(&self) -> Option<u32> {
        let q = self.q() as u128;
        let target = self.words.len() as u128;
        let mut p: u128 = 1;
        let mut k = 0;
        while p < target {
            p *= q;
            k += 1;
        }
        (p == target).then_some(k)
    }

    /// `log_q(#words)`.
    pub fn log_size(&self) -> f64 {
        (self.words.len() as f64).ln() / (self.q() as f64).ln()
    }

    /// Keep only the words at `indices` (in that order).
    pub fn subcode(&self, indices: &[usize]) -> Result<Code> {
        let words = indices.iter().map(|&i| self.words[i].clone()).collect();
        Code::new(self.alphabet.clone(), self.n, words, Some(false))
    }

    /// Restrict every word to `positions`.
    pub fn puncture_to(&self, positions: &PositionSet) -> Result<Code> {
        positions.check_bounds(self.n)?;
        if positions.is_empty() {
            return Err(Error::InvalidCode("cannot restrict to zero positions".into()));
        }
        let words = self
            .words
            .iter()
            .map(|w| positions.iter().map(|p| w[p]).collect())
            .collect();
        Code::new(self.alphabet.clone(), positions.len(), words, Some(false))
    }

    /// Greedy span construction: fold each word outside the current span into
    /// it. The span can never exceed the word count of a linear code.
    fn closed_under_addition(&self) -> bool {
        let q = self.q() as u8;
        let zero = vec![0u8; self.n];
        let words: HashSet<&[u8]> = self.words.iter().map(|w| w.as_slice()).collect();
        if !words.contains(zero.as_slice()) {
            return false;
        }
        let mut span: HashSet<Vec<u8>> = HashSet::from([zero]);
        for w in &self.words {
            if span.contains(w) {
                continue;
            }
            let mut grown: Vec<Vec<u8>> = Vec::with_capacity(span.len() * q as usize);
            for s in &span {
                let mut acc = s.clone();
                for _ in 1..q {
                    for (a, b) in acc.iter_mut().zip(w) {
                        *a = (*a + b) % q;
                    }
                    grown.push(acc.clone());
                }
            }
            span.extend(grown);
            if span.len() > words.len() {
                return false;
            }
        }
        span.len() == words.len() && span.iter().all(|s| words.contains(s.as_slice()))
    }
}

pub(crate) fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// Number of positions where `x` and `y` differ.
pub fn hamming_distance<T: PartialEq>(x: &[T], y: &[T]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

fn distance_unchecked(x: &[u8], y: &[u8]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// Minimum pairwise Hamming distance, by scanning all pairs.
pub fn min_distance(code: &Code) -> Result<usize> {
    let words = code.words();
    if words.len() < 2 {
        return Err(Error::TooFewWords(words.len()));
    }
    Ok((0..words.len() - 1)
        .into_par_iter()
        .map(|i| {
            words[i + 1..]
                .iter()
                .map(|y| distance_unchecked(&words[i], y))
                .min()
                .expect("non-empty tail")
        })
        .min()
        .expect("at least one pair"))
}

/// Minimum weight of a nonzero word. Equals [`min_distance`] for linear
/// codes; errors if the code is not verified linear.
pub fn min_distance_by_weight(code: &Code) -> Result<usize> {
    if !code.is_linear() {
        return Err(Error::InvalidCode("weight route requires a verified linear code".into()));
    }
    if code.len() < 2 {
        return Err(Error::TooFewWords(code.len()));
    }
    Ok(code
        .words()
        .iter()
        .map(|w| w.iter().filter(|&&s| s != 0).count())
        .filter(|&wt| wt > 0)
        .min()
        .expect("a linear code with two words has a nonzero word"))
}

/// Group words by their projection onto `u`; returns one group id per word.
fn projection_groups(code: &Code, u: &PositionSet) -> (Vec<usize>, usize) {
    let mut ids: HashMap<Vec<u8>, usize> = HashMap::new();
    let groups = code
        .words()
        .iter()
        .map(|w| {
            let key: Vec<u8> = u.iter().map(|p| w[p]).collect();
            let next = ids.len();
            *ids.entry(key).or_insert(next)
        })
        .collect();
    (groups, ids.len())
}

/// Whether position `j` is a function of the positions in `u` across the
/// whole code: every group of words sharing a `u`-projection is constant at `j`.
pub fn is_determined(code: &Code, u: &PositionSet, j: usize) -> Result<bool> {
    u.check_bounds(code.n())?;
    if j >= code.n() {
        return Err(Error::PositionOutOfRange { pos: j + 1, n: code.n() });
    }
    if u.contains(j) {
        return Err(Error::PositionInSet(j + 1));
    }
    let (groups, count) = projection_groups(code, u);
    Ok(constant_on_groups(code, &groups, count, j))
}

fn constant_on_groups(code: &Code, groups: &[usize], count: usize, j: usize) -> bool {
    let mut seen: Vec<Option<u8>> = vec![None; count];
    for (w, &g) in code.words().iter().zip(groups) {
        match seen[g] {
            None => seen[g] = Some(w[j]),
            Some(s) if s != w[j] => return false,
            Some(_) => {}
        }
    }
    true
}

/// The reach of `u`: all positions outside `u` determined by `u`.
pub fn reach(code: &Code, u: &PositionSet) -> Result<PositionSet> {
    u.check_bounds(code.n())?;
    let (groups, count) = projection_groups(code, u);
    Ok((0..code.n())
        .filter(|&j| !u.contains(j) && constant_on_groups(code, &groups, count, j))
        .collect())
}

/// Largest reach over all `w`-subsets, plus the lexicographically first
/// subset attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxReach {
    pub value: usize,
    pub witness: PositionSet,
}

/// Exhaustive `L(w)`. One check is one word visited for one subset, so the
/// work is `C(n, w) * #words`; refused up front when over `budget`.
pub fn max_reach(code: &Code, w: usize, budget: &Budget) -> Result<MaxReach> {
    let n = code.n();
    if w == 0 || w > n {
        return Err(Error::InvalidArgument(format!("w must be in 1..={n}, got {w}")));
    }
    let subsets = binomial_saturating(n, w);
    budget.check("max_reach", subsets.saturating_mul(code.len() as u128))?;

    const CHUNK: usize = 4096;
    let mut best: Option<MaxReach> = None;
    for chunk in &(0..n).combinations(w).chunks(CHUNK) {
        let chunk: Vec<Vec<usize>> = chunk.collect();
        let local = chunk
            .par_iter()
            .enumerate()
            .map(|(i, u)| {
                let u = PositionSet::new(u.clone());
                let len = reach(code, &u).expect("in-bounds subset").len();
                (len, std::cmp::Reverse(i))
            })
            .max()
            .expect("non-empty chunk");
        let (value, std::cmp::Reverse(idx)) = local;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(MaxReach {
                value,
                witness: PositionSet::new(chunk[idx].clone()),
            });
        }
    }
    Ok(best.expect("n >= w >= 1 gives at least one subset"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<u8> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn bin(words: &[&str]) -> Code {
        let n = words[0].len();
        Code::binary(n, words.iter().map(|w| bits(w)).collect(), None).unwrap()
    }

    pub(crate) fn repetition3() -> Code {
        bin(&["000", "111"])
    }

    pub(crate) fn even_weight3() -> Code {
        bin(&["000", "011", "101", "110"])
    }

    pub(crate) fn cube3() -> Code {
        bin(&["000", "001", "010", "011", "100", "101", "110", "111"])
    }

    fn set(one_based: &[usize]) -> PositionSet {
        PositionSet::from_one_based(usize::MAX, one_based).unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&bits("0110"), &bits("0110")).unwrap(), 0);
        assert_eq!(hamming_distance(&bits("0110"), &bits("1110")).unwrap(), 1);
        assert_eq!(hamming_distance(b"abc", b"bca").unwrap(), 3);
        assert!(matches!(
            hamming_distance(&bits("01"), &bits("011")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance(&repetition3()).unwrap(), 3);
        assert_eq!(min_distance(&even_weight3()).unwrap(), 2);
        assert_eq!(min_distance_by_weight(&even_weight3()).unwrap(), 2);
        let single = Code::binary(3, vec![bits("010")], None).unwrap();
        assert!(matches!(min_distance(&single), Err(Error::TooFewWords(1))));
    }

    #[test]
    fn weight_route_refuses_nonlinear() {
        let c = bin(&["001", "110"]);
        assert!(!c.is_linear());
        assert!(min_distance_by_weight(&c).is_err());
    }

    #[test]
    fn linearity_detection() {
        assert!(repetition3().is_linear());
        assert!(even_weight3().is_linear());
        assert!(cube3().is_linear());
        assert!(!bin(&["000", "011", "101"]).is_linear());
        let err = Code::binary(3, vec![bits("000"), bits("011"), bits("101")], Some(true));
        assert!(err.is_err());
        // ternary repetition code is linear over GF(3)
        let t = Code::new(
            Alphabet::numeric(3).unwrap(),
            2,
            vec![vec![0, 0], vec![1, 1], vec![2, 2]],
            Some(true),
        )
        .unwrap();
        assert!(t.is_linear());
        assert!(Code::new(Alphabet::numeric(4).unwrap(), 1, vec![vec![0], vec![1]], Some(true)).is_err());
    }

    #[test]
    fn code_validation() {
        assert!(Code::binary(3, vec![bits("000"), bits("000")], None).is_err());
        assert!(Code::binary(3, vec![bits("000"), bits("01")], None).is_err());
        assert!(Code::binary(1, vec![vec![2]], None).is_err());
        assert!(Alphabet::new(vec![Token::Int(1), Token::Int(1)]).is_err());
        assert!(Alphabet::new(vec![Token::Int(1)]).is_err());
    }

    #[test]
    fn dimension() {
        assert_eq!(even_weight3().dimension(), Some(2));
        assert_eq!(repetition3().dimension(), Some(1));
        assert_eq!(bin(&["000", "011", "101"]).dimension(), None);
    }

    #[test]
    fn determination_examples() {
        let spc = even_weight3();
        assert!(is_determined(&spc, &set(&[1, 2]), 2).unwrap());
        assert!(!is_determined(&cube3(), &set(&[1, 2]), 2).unwrap());
        assert!(matches!(
            is_determined(&spc, &set(&[1, 3]), 2),
            Err(Error::PositionInSet(3))
        ));
    }

    #[test]
    fn reach_examples() {
        assert_eq!(reach(&repetition3(), &set(&[1])).unwrap(), set(&[2, 3]));
        for u in [vec![], vec![1], vec![1, 3], vec![1, 2, 3]] {
            assert!(reach(&cube3(), &set(&u)).unwrap().is_empty());
        }
        // the empty set determines exactly the constant positions
        let c = bin(&["010", "011"]);
        assert_eq!(reach(&c, &PositionSet::empty()).unwrap(), set(&[1, 2]));
    }

    #[test]
    fn max_reach_examples() {
        let b = Budget::default();
        assert_eq!(max_reach(&repetition3(), 1, &b).unwrap().value, 2);
        assert_eq!(max_reach(&cube3(), 2, &b).unwrap().value, 0);
        // oracle: the three 2-subsets of the even-weight code each determine the third bit
        let spc = even_weight3();
        for pair in [[1, 2], [1, 3], [2, 3]] {
            assert_eq!(reach(&spc, &set(&pair)).unwrap().len(), 1);
        }
        let m = max_reach(&spc, 2, &b).unwrap();
        assert_eq!(m.value, 1);
        assert_eq!(m.witness, set(&[1, 2]));
    }

    #[test]
    fn max_reach_respects_budget() {
        let tight = Budget::new(5).unwrap();
        let err = max_reach(&cube3(), 2, &tight).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 24, .. }));
        assert!(max_reach(&cube3(), 0, &Budget::default()).is_err());
    }

    #[test]
    fn position_set_io_is_one_based() {
        let s = set(&[3, 1, 3]);
        assert_eq!(s.as_slice(), &[0, 2]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[1,3]");
        assert_eq!(s.to_string(), "{1,3}");
        assert!(serde_json::from_str::<PositionSet>("[0,1]").is_err());
        assert!(PositionSet::from_one_based(3, &[4]).is_err());
    }
}
