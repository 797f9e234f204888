use itertools::Itertools;
use num::{BigInt, BigRational, One, Zero};
use serde::Serialize;

use super::cycle_count_and_first;
use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// `μ_{n,s} = E N_n^s` for `0 <= n <= n_max`, `1 <= s <= s_max`, with
/// `μ_{0,s} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    n_max: usize,
    s_max: usize,
    values: Vec<Vec<BigRational>>,
}

impl MomentTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn get(&self, n: usize, s: usize) -> &BigRational {
        assert!(s >= 1 && s <= self.s_max && n <= self.n_max, "μ_({n},{s}) outside the table");
        &self.values[n][s - 1]
    }

    /// Rows `1..=n_max`, each `[μ_{n,1}, .., μ_{n,s_max}]`.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[BigRational])> {
        self.values.iter().enumerate().skip(1).map(|(n, r)| (n, r.as_slice()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n");
        for s in 1..=self.s_max {
            out.push_str(&format!(",mu_{s}"));
        }
        out.push('\n');
        for (n, row) in self.rows() {
            out.push_str(&n.to_string());
            for v in row {
                out.push(',');
                out.push_str(&Ratio(v.clone()).to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize)]
struct TableJson {
    n_max: usize,
    s_max: usize,
    /// `moments[n-1][s-1] = μ_{n,s}`
    moments: Vec<Vec<Ratio>>,
}

impl Serialize for MomentTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson {
            n_max: self.n_max,
            s_max: self.s_max,
            moments: self.rows().map(|(_, r)| r.iter().cloned().map(Ratio).collect()).collect(),
        }
        .serialize(s)
    }
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `μ_{n,s} = 1 + (1/n) Σ_{r=1}^{s} C(s,r) Σ_{j=1}^{n-1} μ_{j,r}`, with the
/// inner sums kept as running prefix sums per `r`.
pub fn moment_table(n_max: usize, s_max: usize) -> Result<MomentTable> {
    if n_max == 0 || s_max == 0 {
        return Err(Error::InvalidArgument("n_max and s_max must be at least 1".into()));
    }
    let binom: Vec<Vec<BigRational>> = (0..=s_max)
        .map(|s| (0..=s).map(|r| int(num::integer::binomial(s, r))).collect())
        .collect();
    let mut values = vec![vec![BigRational::zero(); s_max]];
    let mut prefix = vec![BigRational::zero(); s_max + 1];
    for n in 1..=n_max {
        let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
        let row: Vec<BigRational> = (1..=s_max)
            .map(|s| {
                let inner = (1..=s).fold(BigRational::zero(), |acc, r| acc + &binom[s][r] * &prefix[r]);
                BigRational::one() + inner * &inv_n
            })
            .collect();
        for (r, v) in row.iter().enumerate() {
            prefix[r + 1] += v;
        }
        values.push(row);
    }
    Ok(MomentTable { n_max, s_max, values })
}

/// `E N_n^s` by visiting all `n!` permutations.
pub fn moments_by_enumeration(n: usize, s_max: usize) -> Result<Vec<BigRational>> {
    if n == 0 || n > 9 {
        return Err(Error::InvalidArgument(format!("enumeration needs 1 <= n <= 9, got {n}")));
    }
    let mut power_sums = vec![BigInt::zero(); s_max];
    let mut total = BigInt::zero();
    let mut seen = Vec::new();
    for p in (0..n).permutations(n) {
        let (count, _) = cycle_count_and_first(&p, &mut seen);
        let mut pw = BigInt::one();
        for acc in power_sums.iter_mut() {
            pw *= count;
            *acc += &pw;
        }
        total += 1;
    }
    Ok(power_sums.into_iter().map(|s| BigRational::new(s, total.clone())).collect())
}

/// `H_n = Σ_{j<=n} 1/j`.
pub fn harmonic(n: usize) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, j| acc + BigRational::new(BigInt::one(), BigInt::from(j)))
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(())
}

/// `E N_n = H_n`.
pub fn mean(n: usize) -> Result<BigRational> {
    require_positive(n)?;
    Ok(harmonic(n))
}

/// `Var N_n = M_n = H_n - Σ_{i<=n} 1/i²`.
pub fn variance(n: usize) -> Result<BigRational> {
    require_positive(n)?;
    let squares = (1..=n).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::one(), BigInt::from(i) * BigInt::from(i))
    });
    Ok(harmonic(n) - squares)
}

/// First `n <= n_max` where `H_n != 1 + (1/n) Σ_{i<n} H_i`, if any.
pub fn mean_recursion_failure(n_max: usize) -> Option<usize> {
    let mut h = BigRational::zero();
    let mut sum = BigRational::zero();
    for n in 1..=n_max {
        h += BigRational::new(BigInt::one(), BigInt::from(n));
        if h != BigRational::one() + &sum / int(n) {
            return Some(n);
        }
        sum += &h;
    }
    None
}

/// First `n <= n_max` where `M_n != 1 + (1/n) Σ_{i<n} M_i - H_n/n`, if any.
pub fn variance_recursion_failure(n_max: usize) -> Option<usize> {
    let mut h = BigRational::zero();
    let mut sq = BigRational::zero();
    let mut sum = BigRational::zero();
    for n in 1..=n_max {
        let inv = BigRational::new(BigInt::one(), BigInt::from(n));
        h += &inv;
        sq += &inv * &inv;
        let v = &h - &sq;
        if v != BigRational::one() + (&sum - &h) / int(n) {
            return Some(n);
        }
        sum += v;
    }
    None
}

/// `b_1` given, then `b_n = 1 + (1/n) Σ_{i<n} b_i`. Returns `b_1..=b_{n_max}`.
pub fn propagate_mean(b1: BigRational, n_max: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n_max);
    let mut sum = BigRational::zero();
    for n in 1..=n_max {
        let b = if n == 1 { b1.clone() } else { BigRational::one() + &sum / int(n) };
        sum += &b;
        out.push(b);
    }
    out
}
