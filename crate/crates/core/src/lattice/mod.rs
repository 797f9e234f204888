//! Representative codes on weighted lattices `{1..m}^d`.
//!
//! A point set `B` is ε-representative when it meets every subset of weight
//! at least `ε·m^d`. The heaviest set avoiding `B` is `S \ B` itself, so `B`
//! is representative iff `w(S \ B) < ε·m^d`; [`oracle`] re-derives this by
//! enumerating subsets instead of trusting it.

mod compose;
pub mod oracle;
mod rep;
mod sweep;
mod weights;

pub use compose::{compose, compose_minimal, tile_min_sizes, tile_translate, Composition, Split, Tile};
pub use rep::{critical_set, is_representative, is_representative_in, min_rep_in, min_rep_size, CriticalSet, MinRep};
pub use sweep::{subadditive_sweep, MultipleCheck, SweepRow, SweepTable};
pub use weights::{random_monotone_spec, WeightSpec, WeightSpecFile};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// Lattice `{1..m}^d` with a positive rational weight per point, stored
/// row-major (last coordinate fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedLattice {
    m: usize,
    d: usize,
    weights: Vec<BigRational>,
    beta: BigRational,
}

/// Points are rejected above this count; every exact operation is at least
/// linear in it.
pub const MAX_POINTS: usize = 1 << 24;

pub(crate) fn lattice_size(m: usize, d: usize) -> Result<usize> {
    if m == 0 || d == 0 {
        return Err(Error::InvalidLattice("m and d must be positive".into()));
    }
    let size = (m as u128)
        .checked_pow(d as u32)
        .filter(|&s| s <= MAX_POINTS as u128)
        .ok_or_else(|| Error::InvalidLattice(format!("{m}^{d} points is too many")))?;
    Ok(size as usize)
}

impl WeightedLattice {
    /// `beta` defaults to the largest weight. Every weight must lie in `[1, β]`.
    pub fn new(m: usize, d: usize, weights: Vec<BigRational>, beta: Option<BigRational>) -> Result<Self> {
        let size = lattice_size(m, d)?;
        if weights.len() != size {
            return Err(Error::InvalidLattice(format!(
                "expected {size} weights for {m}^{d}, got {}",
                weights.len()
            )));
        }
        let one = BigRational::one();
        if let Some(i) = weights.iter().position(|w| w < &one) {
            return Err(Error::InvalidLattice(format!(
                "weight {} at {:?} is below 1",
                Ratio(weights[i].clone()),
                point_of(m, d, i)
            )));
        }
        let max = weights.iter().max().cloned().expect("at least one point");
        let beta = beta.unwrap_or(max.clone());
        if max > beta {
            return Err(Error::InvalidLattice(format!(
                "weight {} exceeds beta {}",
                Ratio(max),
                Ratio(beta)
            )));
        }
        Ok(Self { m, d, weights, beta })
    }

    pub fn uniform(m: usize, d: usize) -> Result<Self> {
        WeightSpec::Uniform.lattice(m, d)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> &BigRational {
        &self.weights[index]
    }

    /// 1-based coordinates of a row-major index.
    pub fn point(&self, index: usize) -> Vec<usize> {
        point_of(self.m, self.d, index)
    }

    pub fn index(&self, point: &[usize]) -> Result<usize> {
        if point.len() != self.d || point.iter().any(|&c| c == 0 || c > self.m) {
            return Err(Error::InvalidLattice(format!(
                "point {point:?} is outside {{1..{}}}^{}",
                self.m, self.d
            )));
        }
        Ok(point.iter().fold(0, |acc, &c| acc * self.m + (c - 1)))
    }

    /// `w(u) <= w(v)` whenever `u` and `v` differ in one entry with `u_i > v_i`.
    /// Checking unit steps suffices by transitivity.
    pub fn is_monotone(&self) -> bool {
        let mut stride = 1;
        for _ in 0..self.d {
            for idx in 0..self.size() {
                if (idx / stride) % self.m > 0 && self.weights[idx] > self.weights[idx - stride] {
                    return false;
                }
            }
            stride *= self.m;
        }
        true
    }

    /// `ε · m^d`.
    pub fn threshold(&self, epsilon: &BigRational) -> BigRational {
        epsilon * BigRational::from_integer(BigInt::from(self.size()))
    }

    pub fn region_all(&self) -> Region {
        Region {
            lo: vec![1; self.d],
            len: vec![self.m; self.d],
        }
    }
}

pub(crate) fn point_of(m: usize, d: usize, mut index: usize) -> Vec<usize> {
    let mut p = vec![0; d];
    for c in p.iter_mut().rev() {
        *c = index % m + 1;
        index /= m;
    }
    p
}

pub(crate) fn check_epsilon(epsilon: &BigRational) -> Result<()> {
    if !epsilon.is_positive() || epsilon >= &BigRational::one() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie strictly between 0 and 1, got {}",
            Ratio(epsilon.clone())
        )));
    }
    Ok(())
}

/// Axis-aligned box of a lattice: 1-based lower corner and side lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Region {
    pub lo: Vec<usize>,
    pub len: Vec<usize>,
}

impl Region {
    pub fn new(lo: Vec<usize>, len: Vec<usize>) -> Self {
        Self { lo, len }
    }

    pub fn volume(&self) -> usize {
        self.len.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.volume() == 0
    }

    pub fn contains(&self, point: &[usize]) -> bool {
        point
            .iter()
            .zip(self.lo.iter().zip(&self.len))
            .all(|(&c, (&lo, &len))| c >= lo && c < lo + len)
    }

    /// Global lattice indices of every point, in row-major order.
    pub fn indices(&self, lat: &WeightedLattice) -> Result<Vec<usize>> {
        if self.lo.len() != lat.d() || self.len.len() != lat.d() {
            return Err(Error::InvalidLattice("region dimension mismatch".into()));
        }
        if self.lo.iter().zip(&self.len).any(|(&lo, &len)| lo == 0 || lo + len - 1 > lat.m()) {
            return Err(Error::InvalidLattice(format!("region {self:?} leaves the lattice")));
        }
        let vol = self.volume();
        let mut out = Vec::with_capacity(vol);
        for local in 0..vol {
            let mut rem = local;
            let mut p = vec![0; lat.d()];
            for axis in (0..lat.d()).rev() {
                p[axis] = self.lo[axis] + rem % self.len[axis];
                rem /= self.len[axis];
            }
            out.push(lat.index(&p)?);
        }
        Ok(out)
    }

    /// Shift local 1-based coordinates into lattice coordinates.
    pub fn to_global(&self, local: &[usize]) -> Result<Vec<usize>> {
        if local.len() != self.lo.len()
            || local.iter().zip(&self.len).any(|(&c, &len)| c == 0 || c > len)
        {
            return Err(Error::InvalidArgument(format!(
                "local point {local:?} outside a block of sides {:?}",
                self.len
            )));
        }
        Ok(local.iter().zip(&self.lo).map(|(&c, &lo)| c + lo - 1).collect())
    }
}

/// A candidate representative code: 1-based points plus its `ε`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepCode {
    pub epsilon: Ratio,
    pub points: Vec<Vec<usize>>,
}

impl RepCode {
    pub fn new(epsilon: Ratio, mut points: Vec<Vec<usize>>) -> Self {
        points.sort();
        points.dedup();
        Self { epsilon, points }
    }

    pub fn from_indices(lat: &WeightedLattice, epsilon: &BigRational, indices: &[usize]) -> Self {
        Self::new(Ratio(epsilon.clone()), indices.iter().map(|&i| lat.point(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub(crate) fn indices(&self, lat: &WeightedLattice) -> Result<Vec<usize>> {
        self.points.iter().map(|p| lat.index(p)).collect()
    }
}

pub(crate) fn sum<'a>(ws: impl Iterator<Item = &'a BigRational>) -> BigRational {
    ws.fold(BigRational::zero(), |acc, w| acc + w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_round_trips() {
        let lat = WeightedLattice::uniform(3, 2).unwrap();
        for i in 0..9 {
            assert_eq!(lat.index(&lat.point(i)).unwrap(), i);
        }
        assert_eq!(lat.point(5), vec![2, 3]);
        assert!(lat.index(&[0, 1]).is_err());
        assert!(lat.index(&[1, 4]).is_err());
    }

    #[test]
    fn rejects_out_of_range_weights() {
        let half = BigRational::new(1.into(), 2.into());
        assert!(WeightedLattice::new(1, 1, vec![half], None).is_err());
        let two = BigRational::from_integer(2.into());
        assert!(WeightedLattice::new(1, 1, vec![two.clone()], Some(BigRational::one())).is_err());
        assert!(WeightedLattice::new(2, 1, vec![two], None).is_err());
        assert!(WeightedLattice::new(0, 1, vec![], None).is_err());
    }

    #[test]
    fn monotonicity_checker() {
        let w = |v: &[i64]| v.iter().map(|&x| BigRational::from_integer(x.into())).collect::<Vec<_>>();
        // 2x2, row-major: (1,1)=3 (1,2)=2 (2,1)=2 (2,2)=1
        assert!(WeightedLattice::new(2, 2, w(&[3, 2, 2, 1]), None).unwrap().is_monotone());
        // (2,2) heavier than (1,2)
        assert!(!WeightedLattice::new(2, 2, w(&[3, 2, 2, 3]), None).unwrap().is_monotone());
        // increasing along the first axis only
        assert!(!WeightedLattice::new(2, 2, w(&[1, 1, 2, 1]), None).unwrap().is_monotone());
    }

    #[test]
    fn regions() {
        let lat = WeightedLattice::uniform(3, 2).unwrap();
        let r = Region::new(vec![2, 3], vec![2, 1]);
        assert_eq!(r.indices(&lat).unwrap(), vec![5, 8]);
        assert_eq!(r.to_global(&[2, 1]).unwrap(), vec![3, 3]);
        assert!(r.to_global(&[1, 2]).is_err());
        assert!(Region::new(vec![3, 3], vec![2, 1]).indices(&lat).is_err());
    }
}
