use num::{BigInt, BigRational, Zero};
use serde::Serialize;
use std::collections::HashSet;

use super::{check_epsilon, sum, Region, RepCode, WeightedLattice};
use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// `points` (global indices) is representative for `region` at level `ε`
/// iff the region's weight outside `points` is strictly below `ε·|region|`.
pub fn is_representative_in(
    lat: &WeightedLattice,
    region: &Region,
    points: &[usize],
    epsilon: &BigRational,
) -> Result<bool> {
    check_epsilon(epsilon)?;
    if region.is_empty() {
        return Err(Error::InvalidArgument("empty region".into()));
    }
    let members = region.indices(lat)?;
    let chosen: HashSet<usize> = points.iter().copied().collect();
    let inside: HashSet<usize> = members.iter().copied().collect();
    if let Some(&p) = chosen.iter().find(|p| !inside.contains(p)) {
        return Err(Error::InvalidArgument(format!("point {:?} lies outside the region", lat.point(p))));
    }
    let complement = sum(members.iter().filter(|i| !chosen.contains(i)).map(|&i| lat.weight(i)));
    let threshold = epsilon * BigRational::from_integer(BigInt::from(region.volume()));
    Ok(complement < threshold)
}

pub fn is_representative(lat: &WeightedLattice, code: &RepCode) -> Result<bool> {
    let indices = code.indices(lat)?;
    is_representative_in(lat, &lat.region_all(), &indices, code.epsilon.inner())
}

/// Minimum representative code of a region: drop the longest weight-ascending
/// prefix whose total stays strictly below `ε·|region|`, keep the rest.
/// Ties in weight go by lattice (lexicographic) order. Returns the size and
/// the kept global indices.
pub fn min_rep_in(lat: &WeightedLattice, region: &Region, epsilon: &BigRational) -> Result<(usize, Vec<usize>)> {
    check_epsilon(epsilon)?;
    let mut members = region.indices(lat)?;
    members.sort_by(|&a, &b| lat.weight(a).cmp(lat.weight(b)).then(a.cmp(&b)));
    let threshold = epsilon * BigRational::from_integer(BigInt::from(region.volume()));
    let mut acc = BigRational::zero();
    let mut dropped = 0;
    for &i in &members {
        let next = &acc + lat.weight(i);
        if next >= threshold {
            break;
        }
        acc = next;
        dropped += 1;
    }
    let mut kept = members.split_off(dropped);
    kept.sort_unstable();
    Ok((kept.len(), kept))
}

#[derive(Debug, Clone, Serialize)]
pub struct MinRep {
    pub size: usize,
    pub code: RepCode,
    pub threshold: Ratio,
    pub complement_weight: Ratio,
}

/// Exact `b_m` with a witness code.
pub fn min_rep_size(lat: &WeightedLattice, epsilon: &BigRational) -> Result<MinRep> {
    let (size, kept) = min_rep_in(lat, &lat.region_all(), epsilon)?;
    let kept_set: HashSet<usize> = kept.iter().copied().collect();
    let complement = sum((0..lat.size()).filter(|i| !kept_set.contains(i)).map(|i| lat.weight(i)));
    Ok(MinRep {
        size,
        code: RepCode::from_indices(lat, epsilon, &kept),
        threshold: Ratio(lat.threshold(epsilon)),
        complement_weight: Ratio(complement),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalSet {
    pub points: Vec<Vec<usize>>,
    pub weight: Ratio,
    /// `w(T) <= ε·m^d - 1`, the margin the integer-threshold argument uses.
    pub meets_unit_margin: bool,
    /// `#T >= (ε/β)·m^d - 1`.
    pub size_floor_ok: bool,
}

/// Maximal set `T` with `w(T) < ε·m^d` such that adding any outside point
/// reaches the threshold, built lightest-first. `S \ T` is then
/// representative with at most `m^d(1 - ε/β) + 1` points.
pub fn critical_set(lat: &WeightedLattice, epsilon: &BigRational) -> Result<CriticalSet> {
    check_epsilon(epsilon)?;
    let threshold = lat.threshold(epsilon);
    let one = BigRational::from_integer(BigInt::from(1));
    if threshold < one {
        return Err(Error::InvalidArgument(format!(
            "critical sets need eps*m^d >= 1, got {}",
            Ratio(threshold)
        )));
    }
    let mut order: Vec<usize> = (0..lat.size()).collect();
    order.sort_by(|&a, &b| lat.weight(a).cmp(lat.weight(b)).then(a.cmp(&b)));
    let mut weight = BigRational::zero();
    let mut taken = Vec::new();
    for &i in &order {
        let next = &weight + lat.weight(i);
        if next >= threshold {
            break;
        }
        weight = next;
        taken.push(i);
    }
    taken.sort_unstable();
    let floor = epsilon / lat.beta() * BigRational::from_integer(BigInt::from(lat.size())) - &one;
    Ok(CriticalSet {
        meets_unit_margin: weight <= &threshold - &one,
        size_floor_ok: BigRational::from_integer(BigInt::from(taken.len())) >= floor,
        points: taken.iter().map(|&i| lat.point(i)).collect(),
        weight: Ratio(weight),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::WeightSpec;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn representative_examples() {
        let lat = WeightedLattice::uniform(2, 2).unwrap();
        let all: Vec<Vec<usize>> = (0..4).map(|i| lat.point(i)).collect();
        assert!(is_representative(&lat, &RepCode::new(Ratio::new(1, 2), all.clone())).unwrap());
        for p in &all {
            // complement weight 3 >= 2
            assert!(!is_representative(&lat, &RepCode::new(Ratio::new(1, 2), vec![p.clone()])).unwrap());
            // complement weight 1 < 2
            let three: Vec<_> = all.iter().filter(|q| q != &p).cloned().collect();
            assert!(is_representative(&lat, &RepCode::new(Ratio::new(1, 2), three)).unwrap());
        }
    }

    #[test]
    fn threshold_is_strict() {
        // uniform 2x2, eps = 1/2: two dropped points weigh exactly 2 = eps*m^2
        let lat = WeightedLattice::uniform(2, 2).unwrap();
        let code = RepCode::new(Ratio::new(1, 2), vec![vec![1, 1], vec![1, 2]]);
        assert!(!is_representative(&lat, &code).unwrap());
    }

    #[test]
    fn min_rep_examples() {
        let uni = min_rep_size(&WeightedLattice::uniform(2, 2).unwrap(), &half()).unwrap();
        assert_eq!(uni.size, 3);
        // lightest-first with lexicographic ties drops (1,1)
        assert_eq!(uni.code.points, vec![vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(uni.complement_weight, Ratio::new(1, 1));
        let shell = min_rep_size(&WeightSpec::Shell.lattice(2, 2).unwrap(), &half()).unwrap();
        assert_eq!(shell.size, 4);
        // eps*m^d <= 1: nothing can be dropped
        let tiny = BigRational::new(1.into(), 9.into());
        assert_eq!(min_rep_size(&WeightedLattice::uniform(3, 2).unwrap(), &tiny).unwrap().size, 9);
    }

    #[test]
    fn epsilon_must_be_proper() {
        let lat = WeightedLattice::uniform(2, 2).unwrap();
        for bad in [BigRational::zero(), BigRational::from_integer(1.into())] {
            assert!(min_rep_size(&lat, &bad).is_err());
        }
    }

    #[test]
    fn critical_set_examples() {
        let uni = critical_set(&WeightedLattice::uniform(2, 2).unwrap(), &half()).unwrap();
        assert_eq!(uni.points.len(), 1);
        assert!(uni.meets_unit_margin && uni.size_floor_ok);
        let shell = critical_set(&WeightSpec::Shell.lattice(2, 2).unwrap(), &half()).unwrap();
        assert!(shell.points.is_empty());
        // complement 4 = 4(1 - 1/4) + 1
        assert!(shell.size_floor_ok);
        let tiny = BigRational::new(1.into(), 5.into());
        assert!(critical_set(&WeightedLattice::uniform(2, 2).unwrap(), &tiny).is_err());
    }

    #[test]
    fn critical_set_uniform_count() {
        // beta = 1 and integral eps*m^d: #T = eps*m^d - 1
        for (m, num, den) in [(4, 1, 4), (4, 3, 4), (6, 1, 2), (5, 2, 5)] {
            let eps = BigRational::new(num.into(), den.into());
            let lat = WeightedLattice::uniform(m, 2).unwrap();
            let t = critical_set(&lat, &eps).unwrap();
            let target = (m * m * num as usize) / den as usize;
            assert_eq!(t.points.len(), target - 1);
            assert!(t.meets_unit_margin);
        }
    }

    #[test]
    fn region_variant_rejects_outside_points() {
        let lat = WeightedLattice::uniform(3, 2).unwrap();
        let region = Region::new(vec![1, 1], vec![2, 2]);
        let outside = lat.index(&[3, 3]).unwrap();
        assert!(is_representative_in(&lat, &region, &[outside], &half()).is_err());
    }
}
