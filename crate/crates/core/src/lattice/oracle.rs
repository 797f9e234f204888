//! Independent checks of the complement-weight criterion. Weights are scaled
//! to integers and sets are bitmasks over row-major point indices.

use num::{BigInt, BigRational, Integer, One, ToPrimitive};

use super::{check_epsilon, RepCode, WeightedLattice};
use crate::error::{Error, Result};

/// `brute_force_min_rep` enumerates every subset of the lattice.
pub const MAX_BRUTE_POINTS: usize = 20;
/// `representative_table` walks every (B, U ⊆ S \ B) pair, 3^points in all.
pub const MAX_TABLE_POINTS: usize = 16;

struct Scaled {
    weights: Vec<u128>,
    /// `ε·m^d` on the same scale; exact, since the common denominator covers it.
    threshold: u128,
    points: usize,
}

fn scale(lat: &WeightedLattice, epsilon: &BigRational, cap: usize) -> Result<Scaled> {
    check_epsilon(epsilon)?;
    if lat.size() > cap {
        return Err(Error::BudgetExceeded {
            what: "subset enumeration",
            needed: lat.size() as u128,
            budget: cap as u64,
        });
    }
    let threshold = lat.threshold(epsilon);
    let lcm = lat
        .weights()
        .iter()
        .chain(std::iter::once(&threshold))
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let to_int = |x: &BigRational| -> Result<u128> {
        (x * BigRational::from_integer(lcm.clone()))
            .to_integer()
            .to_u128()
            .filter(|&v| v.checked_mul(cap as u128).is_some())
            .ok_or_else(|| Error::InvalidLattice("weights too large for the subset oracle".into()))
    };
    Ok(Scaled {
        weights: lat.weights().iter().map(to_int).collect::<Result<_>>()?,
        threshold: to_int(&threshold)?,
        points: lat.size(),
    })
}

/// Weight of every subset mask.
fn subset_sums(weights: &[u128]) -> Vec<u128> {
    let mut sums = vec![0u128; 1 << weights.len()];
    for mask in 1..sums.len() {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + weights[low];
    }
    sums
}

/// Minimum `#B` over all `B ⊆ S` that meet every `U` with `w(U) >= ε·m^d`.
/// For each `U` the heavy flag is computed from its own weight; "some heavy
/// `U` avoids `B`" is then closed over supersets so each `B` is answered
/// by one lookup of its complement.
pub fn brute_force_min_rep(lat: &WeightedLattice, epsilon: &BigRational) -> Result<usize> {
    let sc = scale(lat, epsilon, MAX_BRUTE_POINTS)?;
    let sums = subset_sums(&sc.weights);
    let full = (1usize << sc.points) - 1;
    // heavy_inside[X]: some U ⊆ X has w(U) >= threshold
    let mut heavy_inside: Vec<bool> = sums.iter().map(|&w| w >= sc.threshold).collect();
    drop(sums);
    for bit in 0..sc.points {
        for mask in 0..=full {
            if mask >> bit & 1 == 1 && heavy_inside[mask ^ (1 << bit)] {
                heavy_inside[mask] = true;
            }
        }
    }
    Ok((0..=full)
        .filter(|&b| !heavy_inside[full ^ b])
        .map(|b| b.count_ones() as usize)
        .min()
        .expect("B = S always qualifies"))
}

/// Literal definition for one code: no `U ⊆ S \ B` reaches the threshold.
pub fn represents_by_enumeration(lat: &WeightedLattice, code: &RepCode) -> Result<bool> {
    let sc = scale(lat, code.epsilon.inner(), MAX_BRUTE_POINTS)?;
    let mut b = 0usize;
    for i in code.indices(lat)? {
        b |= 1 << i;
    }
    let free = ((1usize << sc.points) - 1) ^ b;
    let mut u = free;
    loop {
        let w: u128 = (0..sc.points).filter(|i| u >> i & 1 == 1).map(|i| sc.weights[i]).sum();
        if w >= sc.threshold {
            return Ok(false);
        }
        if u == 0 {
            return Ok(true);
        }
        u = (u - 1) & free;
    }
}

/// For every mask `B`, whether it is representative by the definition,
/// enumerating each `U ⊆ S \ B` separately.
pub fn representative_table(lat: &WeightedLattice, epsilon: &BigRational) -> Result<Vec<bool>> {
    let sc = scale(lat, epsilon, MAX_TABLE_POINTS)?;
    let sums = subset_sums(&sc.weights);
    let full = (1usize << sc.points) - 1;
    Ok((0..=full)
        .map(|b| {
            let free = full ^ b;
            let mut u = free;
            loop {
                if sums[u] >= sc.threshold {
                    return false;
                }
                if u == 0 {
                    return true;
                }
                u = (u - 1) & free;
            }
        })
        .collect())
}

/// Points of a mask, as a code.
pub fn mask_code(lat: &WeightedLattice, epsilon: &BigRational, mask: usize) -> RepCode {
    let idx: Vec<usize> = (0..lat.size()).filter(|i| mask >> i & 1 == 1).collect();
    RepCode::from_indices(lat, epsilon, &idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{is_representative, min_rep_size, random_monotone_spec, WeightSpec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn eps(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn oracle_examples() {
        let half = eps(1, 2);
        assert_eq!(brute_force_min_rep(&WeightedLattice::uniform(2, 2).unwrap(), &half).unwrap(), 3);
        assert_eq!(brute_force_min_rep(&WeightedLattice::uniform(1, 2).unwrap(), &half).unwrap(), 1);
        assert_eq!(brute_force_min_rep(&WeightSpec::Shell.lattice(2, 2).unwrap(), &half).unwrap(), 4);
    }

    #[test]
    fn oracle_refuses_large_lattices() {
        let lat = WeightedLattice::uniform(5, 2).unwrap();
        assert!(matches!(brute_force_min_rep(&lat, &eps(1, 2)), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn table_matches_complement_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = random_monotone_spec(&mut rng, 3, 2).unwrap();
        for lat in [spec.lattice(3, 2).unwrap(), WeightSpec::Shell.lattice(3, 2).unwrap()] {
            for e in [eps(1, 4), eps(1, 2), eps(3, 4)] {
                let table = representative_table(&lat, &e).unwrap();
                for (mask, &ok) in table.iter().enumerate() {
                    assert_eq!(is_representative(&lat, &mask_code(&lat, &e, mask)).unwrap(), ok);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn greedy_is_optimal(seed in any::<u64>(), m in 1usize..=4, d in 1usize..=2, e in 1i64..=3) {
            let m = if d == 1 { m * 4 } else { m };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lat = random_monotone_spec(&mut rng, m, d).unwrap().lattice(m, d).unwrap();
            let e = eps(e, 4);
            prop_assert_eq!(min_rep_size(&lat, &e).unwrap().size, brute_force_min_rep(&lat, &e).unwrap());
        }

        #[test]
        fn literal_definition_agrees(seed in any::<u64>(), mask in 0usize..512) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lat = random_monotone_spec(&mut rng, 3, 2).unwrap().lattice(3, 2).unwrap();
            let code = mask_code(&lat, &eps(1, 2), mask);
            prop_assert_eq!(represents_by_enumeration(&lat, &code).unwrap(), is_representative(&lat, &code).unwrap());
        }
    }
}
