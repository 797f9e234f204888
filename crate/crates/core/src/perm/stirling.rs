use num::{BigInt, BigRational, BigUint, One, Zero};

use crate::error::{Error, Result};

pub const MAX_STIRLING_N: usize = 200;

/// Unsigned Stirling numbers of the first kind `c(n, k)`, `0 <= k <= n`,
/// from `c(n,k) = c(n-1,k-1) + (n-1)·c(n-1,k)`.
pub fn stirling_first(n: usize) -> Result<Vec<BigUint>> {
    if n > MAX_STIRLING_N {
        return Err(Error::InvalidArgument(format!("n = {n} exceeds {MAX_STIRLING_N}")));
    }
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for k in 1..=m {
            next[k] = &row[k - 1] + if k < m { &row[k] * BigUint::from(m - 1) } else { BigUint::zero() };
        }
        row = next;
    }
    Ok(row)
}

/// `P(N_n = k) = c(n,k)/n!` for `k = 1..=n` (index `k-1`).
pub fn stirling_distribution(n: usize) -> Result<Vec<BigRational>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let c = stirling_first(n)?;
    let fact: BigUint = (1..=n).map(BigUint::from).product();
    let fact = BigInt::from(fact);
    Ok(c.into_iter()
        .skip(1)
        .map(|v| BigRational::new(BigInt::from(v), fact.clone()))
        .collect())
}

/// `Σ_k k^s · P(N_n = k)`.
pub fn stirling_moment(n: usize, s: u32) -> Result<BigRational> {
    Ok(stirling_distribution(n)?
        .into_iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (i, p)| {
            acc + p * BigRational::from_integer(BigInt::from(i + 1).pow(s))
        }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rows() {
        let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        assert_eq!(stirling_distribution(1).unwrap(), vec![r(1, 1)]);
        assert_eq!(stirling_distribution(3).unwrap(), vec![r(2, 6), r(3, 6), r(1, 6)]);
        assert_eq!(stirling_moment(3, 2).unwrap(), r(23, 6));
    }

    #[test]
    fn row_identities() {
        for n in 1..=12usize {
            let c = stirling_first(n).unwrap();
            let fact: BigUint = (1..=n).map(BigUint::from).product();
            assert_eq!(c.iter().sum::<BigUint>(), fact);
            assert_eq!(c[n], BigUint::one());
            assert_eq!(c[1], (1..n).map(BigUint::from).product::<BigUint>());
        }
        let total: BigRational = stirling_distribution(MAX_STIRLING_N).unwrap().into_iter().sum();
        assert_eq!(total, BigRational::one());
        assert!(stirling_first(MAX_STIRLING_N + 1).is_err());
    }
}
