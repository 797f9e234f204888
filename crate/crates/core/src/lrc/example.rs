//! Binary example code with partial locality: `k` information bits, one
//! parity bit `c_a ⊕ c_b ⊕ c_c` per 3-subset of them, and a final overall
//! parity bit. Every information bit is the XOR of three triple parities,
//! every triple parity is the XOR of its three information bits, but the
//! overall parity has no locality set of size 3 once `k >= 10`.

use itertools::Itertools;
use std::collections::BTreeMap;

use super::LocalityStructure;
use crate::code::{Code, PositionSet};
use crate::error::{Error, Result};

/// Largest `k` we are willing to enumerate (`2^k` words).
pub const MAX_EXAMPLE_K: usize = 20;

#[derive(Debug, Clone)]
pub struct ExampleCode {
    pub code: Code,
    pub locality: LocalityStructure,
    pub warnings: Vec<String>,
}

/// Block length `k + C(k,3) + 1`.
pub fn example_length(k: usize) -> usize {
    k + k * (k.saturating_sub(1)) * (k.saturating_sub(2)) / 6 + 1
}

pub fn build_example_code(k: usize) -> Result<ExampleCode> {
    if !(4..=MAX_EXAMPLE_K).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "example code needs 4 <= k <= {MAX_EXAMPLE_K}, got {k}"
        )));
    }
    let mut warnings = Vec::new();
    if k < 10 {
        warnings.push(format!(
            "k={k} < 10: the last position may have a locality set of size 3, so excluding it from theta is not forced"
        ));
    }
    let triples: Vec<[usize; 3]> = (0..k).combinations(3).map(|t| [t[0], t[1], t[2]]).collect();
    let triple_pos: BTreeMap<[usize; 3], usize> = triples.iter().enumerate().map(|(i, t)| (*t, k + i)).collect();
    let n = example_length(k);
    debug_assert_eq!(n, k + triples.len() + 1);

    let words = (0u32..1 << k)
        .map(|msg| {
            let info: Vec<u8> = (0..k).map(|i| (msg >> i & 1) as u8).collect();
            let mut w = info.clone();
            w.extend(triples.iter().map(|t| info[t[0]] ^ info[t[1]] ^ info[t[2]]));
            w.push(info.iter().fold(0, |a, b| a ^ b));
            w
        })
        .collect();
    let code = Code::binary(n, words, Some(true))?;

    let pos_of = |mut t: [usize; 3]| {
        t.sort_unstable();
        triple_pos[&t]
    };
    let mut map = BTreeMap::new();
    for j in 0..k {
        // c_j = d_{j,a,b} ⊕ d_{j,a,c} ⊕ d_{j,b,c} with a < b < c the first other indices
        let o: Vec<usize> = (0..k).filter(|&i| i != j).take(3).collect();
        let t = PositionSet::new(vec![pos_of([j, o[0], o[1]]), pos_of([j, o[0], o[2]]), pos_of([j, o[1], o[2]])]);
        map.insert(PositionSet::new(vec![j]), t);
    }
    for (t, &pos) in &triple_pos {
        map.insert(PositionSet::new(vec![pos]), PositionSet::new(t.to_vec()));
    }
    let locality = LocalityStructure::new(n, PositionSet::range(0, n - 1), 1, 3, Some(map))?;
    Ok(ExampleCode {
        code,
        locality,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::is_determined;

    #[test]
    fn k10_shape() {
        let ex = build_example_code(10).unwrap();
        assert_eq!(ex.code.n(), 131);
        assert_eq!(ex.code.len(), 1024);
        assert_eq!(ex.code.dimension(), Some(10));
        assert!(ex.code.is_linear());
        assert!(ex.warnings.is_empty());
        assert_eq!(ex.locality.theta.len(), 130);
        assert_eq!(ex.locality.map.as_ref().unwrap().len(), 130);
    }

    #[test]
    fn zero_and_unit_messages() {
        let ex = build_example_code(10).unwrap();
        assert!(ex.code.words()[0].iter().all(|&b| b == 0));
        // e_1: C(9,2) = 36 triple parities contain index 1, plus the overall parity
        let e1 = &ex.code.words()[1];
        assert_eq!(e1[..10].iter().filter(|&&b| b == 1).count(), 1);
        assert_eq!(e1[10..130].iter().filter(|&&b| b == 1).count(), 36);
        assert_eq!(e1[130], 1);
        assert_eq!(e1.iter().filter(|&&b| b == 1).count(), 38);
    }

    #[test]
    fn first_bit_from_three_triples() {
        let ex = build_example_code(10).unwrap();
        // d_{1,2,3}, d_{1,2,4}, d_{1,3,4} are the triples 0, 1 and 8 in lex order
        let u = PositionSet::new(vec![10, 11, 18]);
        assert_eq!(ex.locality.map.as_ref().unwrap()[&PositionSet::new(vec![0])], u);
        assert!(is_determined(&ex.code, &u, 0).unwrap());
        assert!(crate::code::reach(&ex.code, &u).unwrap().contains(0));
    }

    #[test]
    fn small_k_warns_and_tiny_k_errors() {
        let ex = build_example_code(5).unwrap();
        assert_eq!(ex.code.n(), 5 + 10 + 1);
        assert_eq!(ex.warnings.len(), 1);
        assert!(build_example_code(3).is_err());
        assert!(build_example_code(21).is_err());
    }
}
