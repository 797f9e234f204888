use num::{BigInt, BigRational, One};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

use super::{min_rep_size, WeightSpec};
use crate::error::{Error, Result};
use crate::ratio::Ratio;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: usize,
    pub b_m: usize,
    pub ratio: Ratio,
    /// `1 - ε <= b_m/m^d`
    pub lower_ok: bool,
    /// `b_m/m^d <= 1 - ε/β + 1/m^d`
    pub upper_ok: bool,
}

/// `b_{kr}/(kr)^d <= b_r/r^d` for a pair of sizes in the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultipleCheck {
    pub r: usize,
    pub m: usize,
    pub ratio_r: Ratio,
    pub ratio_m: Ratio,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub spec: String,
    pub epsilon: Ratio,
    pub d: usize,
    pub beta: Ratio,
    pub monotone: bool,
    pub rows: Vec<SweepRow>,
    pub multiples: Vec<MultipleCheck>,
    pub all_ok: bool,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,b_m,ratio_num,ratio_den,lower_ok,upper_ok\n");
        for row in &self.rows {
            let r = row.ratio.inner();
            writeln!(out, "{},{},{},{},{},{}", row.m, row.b_m, r.numer(), r.denom(), row.lower_ok, row.upper_ok)
                .expect("writing to a String");
        }
        out
    }
}

/// `b_m` for each `m`, with the per-row bounds and, when `check_multiples`
/// is set, the ratio comparison for every pair `r | m` in the list. That
/// comparison relies on monotone weights, so a non-monotone spec is an error
/// in that mode.
pub fn subadditive_sweep(
    spec: &WeightSpec,
    epsilon: &BigRational,
    d: usize,
    ms: &[usize],
    check_multiples: bool,
) -> Result<SweepTable> {
    let monotone = spec.is_monotone()?;
    if check_multiples && !monotone {
        return Err(Error::InvalidLattice("ratio comparison across sizes needs monotone weights".into()));
    }
    let mut ms = ms.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let beta = spec.beta();
    let one = BigRational::one();
    let rows: Vec<SweepRow> = ms
        .par_iter()
        .map(|&m| {
            let lat = spec.lattice(m, d)?;
            let b_m = min_rep_size(&lat, epsilon)?.size;
            let vol = BigRational::from_integer(BigInt::from(lat.size()));
            let ratio = BigRational::from_integer(BigInt::from(b_m)) / &vol;
            Ok(SweepRow {
                m,
                b_m,
                lower_ok: &one - epsilon <= ratio,
                upper_ok: ratio <= &one - epsilon / &beta + &one / &vol,
                ratio: Ratio(ratio),
            })
        })
        .collect::<Result<_>>()?;
    let mut multiples = Vec::new();
    if check_multiples {
        for small in &rows {
            for big in rows.iter().filter(|b| b.m > small.m && b.m % small.m == 0) {
                multiples.push(MultipleCheck {
                    r: small.m,
                    m: big.m,
                    ratio_r: small.ratio.clone(),
                    ratio_m: big.ratio.clone(),
                    ok: big.ratio.inner() <= small.ratio.inner(),
                });
            }
        }
    }
    let all_ok = rows.iter().all(|r| r.lower_ok && r.upper_ok) && multiples.iter().all(|c| c.ok);
    Ok(SweepTable {
        spec: spec.name().to_string(),
        epsilon: Ratio(epsilon.clone()),
        d,
        beta: Ratio(beta),
        monotone,
        rows,
        multiples,
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn uniform_ratios() {
        let t = subadditive_sweep(&WeightSpec::Uniform, &half(), 2, &[2, 4, 8], true).unwrap();
        for row in &t.rows {
            let m2 = (row.m * row.m) as i64;
            // closed form 1 - (ceil(eps m^2) - 1)/m^2 with eps m^2 integral
            assert_eq!(row.ratio, Ratio::new(m2 - (m2 / 2 - 1), m2));
            assert!(row.lower_ok && row.upper_ok);
        }
        assert!(t.all_ok);
    }

    #[test]
    fn shell_doubling() {
        let t = subadditive_sweep(&WeightSpec::Shell, &half(), 2, &[2, 4, 8, 16], true).unwrap();
        assert!(t.all_ok);
        // every pair r | m, not only doublings
        assert_eq!(t.multiples.len(), 6);
        for row in &t.rows {
            let m2 = (row.m * row.m) as i64;
            assert!(row.ratio.inner() <= &BigRational::new((3 * m2 + 4).into(), (4 * m2).into()));
        }
    }

    #[test]
    fn csv_layout() {
        let t = subadditive_sweep(&WeightSpec::Uniform, &half(), 2, &[2], false).unwrap();
        assert_eq!(t.to_csv(), "m,b_m,ratio_num,ratio_den,lower_ok,upper_ok\n2,3,3,4,true,true\n");
    }

    #[test]
    fn non_monotone_rejected() {
        let spec = WeightSpec::Explicit {
            m: 2,
            d: 1,
            weights: vec![Ratio::new(1, 1), Ratio::new(2, 1)],
            beta: None,
        };
        assert!(subadditive_sweep(&spec, &half(), 1, &[1, 2], true).is_err());
        assert!(subadditive_sweep(&spec, &half(), 1, &[1, 2], false).is_ok());
    }
}
