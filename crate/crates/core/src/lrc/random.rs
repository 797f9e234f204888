//! Random small binary codes with partial locality, for exhaustive checks
//! of the distance bound.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use super::LocalityStructure;
use crate::code::{Code, ColumnIndex, PositionSet};
use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct RandomCodeParams {
    pub max_n: usize,
    pub max_k: usize,
    pub max_r: usize,
    pub max_tau: usize,
}

impl Default for RandomCodeParams {
    fn default() -> Self {
        Self {
            max_n: 14,
            max_k: 6,
            max_r: 3,
            max_tau: 2,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Gate {
    Xor,
    And,
    Or,
}

/// A systematic binary code whose check positions are small gates (XOR,
/// and with some probability AND/OR) of a few information bits, with its
/// columns shuffled. `Θ` is grown to every position that has a locality set
/// of size `<= r`, then trimmed until every `τ`-subset is covered. The map
/// is left empty: callers are expected to verify the capability
/// exhaustively.
pub fn random_local_code<R: Rng>(rng: &mut R, params: RandomCodeParams) -> Result<(Code, LocalityStructure)> {
    loop {
        let k = rng.random_range(2..=params.max_k);
        let n = rng.random_range(k + 2..=params.max_n.max(k + 2));
        let r = rng.random_range(1..=params.max_r);
        let tau = rng.random_range(1..=params.max_tau);
        let nonlinear = rng.random_bool(0.3);

        let checks: Vec<(Gate, Vec<usize>)> = (k..n)
            .map(|_| {
                let arity = rng.random_range(1..=params.max_r.min(k));
                let mut inputs: Vec<usize> = (0..k).collect();
                inputs.shuffle(rng);
                inputs.truncate(arity);
                let gate = match (nonlinear, rng.random_range(0..3)) {
                    (true, 1) => Gate::And,
                    (true, 2) => Gate::Or,
                    _ => Gate::Xor,
                };
                (gate, inputs)
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let words: Vec<Vec<u8>> = (0u32..1 << k)
            .map(|msg| {
                let info: Vec<u8> = (0..k).map(|i| (msg >> i & 1) as u8).collect();
                let mut w = info.clone();
                w.extend(checks.iter().map(|(g, ins)| {
                    let bits = ins.iter().map(|&i| info[i]);
                    match g {
                        Gate::Xor => bits.fold(0, |a, b| a ^ b),
                        Gate::And => bits.fold(1, |a, b| a & b),
                        Gate::Or => bits.fold(0, |a, b| a | b),
                    }
                }));
                order.iter().map(|&p| w[p]).collect()
            })
            .collect();
        let code = Code::binary(n, words, None)?;
        let index = ColumnIndex::new(&code);

        let locally_recoverable = |p: &[usize]| {
            let pool: Vec<usize> = (0..n).filter(|x| !p.contains(x)).collect();
            (0..=r.min(pool.len())).any(|s| pool.iter().copied().combinations(s).any(|t| index.determines(&t, p)))
        };
        let mut theta: Vec<usize> = (0..n).filter(|&j| locally_recoverable(&[j])).collect();
        while let Some(bad) = theta
            .iter()
            .copied()
            .combinations(tau)
            .find(|p| !locally_recoverable(p))
        {
            theta.retain(|&x| x != bad[tau - 1]);
        }
        if theta.len() < tau {
            continue;
        }
        let loc = LocalityStructure::new(n, PositionSet::new(theta), tau, r, None)?;
        return Ok((code, loc));
    }
}
