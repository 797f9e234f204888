//! Column-bitset view of a code for fast determination tests.
//!
//! For every position `p` and symbol `a` we keep the set of words with
//! `w[p] == a` as a bitset. A fiber of a position set `T` (the words sharing
//! one projection value) is then an AND of `|T|` bitsets, and a target
//! position is determined by `T` iff every nonempty fiber meets at most one
//! of the target's symbol bitsets.

use super::Code;

#[derive(Debug, Clone)]
pub struct ColumnIndex {
    q: usize,
    blocks: usize,
    full: Vec<u64>,
    cols: Vec<u64>,
}

impl ColumnIndex {
    pub fn new(code: &Code) -> Self {
        let q = code.q();
        let words = code.len();
        let blocks = words.div_ceil(64);
        let mut cols = vec![0u64; code.n() * q * blocks];
        for (i, w) in code.words().iter().enumerate() {
            for (p, &s) in w.iter().enumerate() {
                cols[(p * q + s as usize) * blocks + i / 64] |= 1 << (i % 64);
            }
        }
        let mut full = vec![u64::MAX; blocks];
        if words % 64 != 0 {
            full[blocks - 1] = (1u64 << (words % 64)) - 1;
        }
        Self { q, blocks, full, cols }
    }

    /// Number of 64-word blocks per bitset; the unit of work for budgets.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    fn col(&self, pos: usize, sym: usize) -> &[u64] {
        let start = (pos * self.q + sym) * self.blocks;
        &self.cols[start..start + self.blocks]
    }

    fn constant_on(&self, mask: &[u64], target: usize) -> bool {
        let mut hit = false;
        for a in 0..self.q {
            if self.col(target, a).iter().zip(mask).any(|(c, m)| c & m != 0) {
                if hit {
                    return false;
                }
                hit = true;
            }
        }
        true
    }

    /// Whether every position in `targets` is a function of `set`.
    /// `targets` must be disjoint from `set`.
    pub fn determines(&self, set: &[usize], targets: &[usize]) -> bool {
        let b = self.blocks;
        let mut stack = vec![0u64; (set.len() + 1) * b];
        stack[..b].copy_from_slice(&self.full);
        self.descend(set, targets, 0, &mut stack)
    }

    fn descend(&self, set: &[usize], targets: &[usize], depth: usize, stack: &mut [u64]) -> bool {
        let b = self.blocks;
        if depth == set.len() {
            let mask = &stack[depth * b..(depth + 1) * b];
            return targets.iter().all(|&t| self.constant_on(mask, t));
        }
        for a in 0..self.q {
            let (lo, hi) = stack.split_at_mut((depth + 1) * b);
            let parent = &lo[depth * b..];
            let child = &mut hi[..b];
            let mut any = 0u64;
            for ((c, p), col) in child.iter_mut().zip(parent).zip(self.col(set[depth], a)) {
                *c = p & col;
                any |= *c;
            }
            if any != 0 && !self.descend(set, targets, depth + 1, stack) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{is_determined, PositionSet};
    use proptest::prelude::*;

    fn arb_code() -> impl Strategy<Value = Code> {
        (2usize..4, 1usize..7).prop_flat_map(|(q, n)| {
            let word = proptest::collection::vec(0..q as u8, n);
            proptest::collection::hash_set(word, 1..70).prop_map(move |ws| {
                let alphabet = crate::code::Alphabet::numeric(q).unwrap();
                Code::new(alphabet, n, ws.into_iter().collect(), Some(false)).unwrap()
            })
        })
    }

    proptest! {
        // the bitset route must agree with projection grouping
        #[test]
        fn agrees_with_projection_grouping(code in arb_code(), mask in 0u32..128, j in 0usize..7) {
            let n = code.n();
            let j = j % n;
            let set: Vec<usize> = (0..n).filter(|&p| p != j && mask >> p & 1 == 1).collect();
            let idx = ColumnIndex::new(&code);
            let direct = is_determined(&code, &PositionSet::new(set.clone()), j).unwrap();
            prop_assert_eq!(idx.determines(&set, &[j]), direct);
        }
    }

    #[test]
    fn block_padding_is_masked() {
        // 65 words: the second block has a single live bit
        let words: Vec<Vec<u8>> = (0..65u32)
            .map(|i| {
                let mut w: Vec<u8> = (0..7).map(|b| (i >> b & 1) as u8).collect();
                w.push((i.count_ones() % 2) as u8);
                w
            })
            .collect();
        let code = Code::binary(8, words, Some(false)).unwrap();
        let idx = ColumnIndex::new(&code);
        assert_eq!(idx.blocks(), 2);
        assert!(idx.determines(&[0, 1, 2, 3, 4, 5, 6], &[7]));
        // words 0 and 64 agree on 0..6 but not on the parity
        assert!(!idx.determines(&[0, 1, 2, 3, 4, 5], &[7]));
    }
}
