//! Subadditive composition on `{1..m}²` with `m = k·r + s`, and the tile
//! translation that bounds the first block by `k²·b_r`.

use num::BigRational;
use serde::Serialize;

use super::{is_representative_in, min_rep_in, Region, RepCode, WeightedLattice};
use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// `m = k·r + s` with `k >= 1`, `0 <= s < r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Split {
    pub m: usize,
    pub r: usize,
    pub k: usize,
    pub s: usize,
}

impl Split {
    pub fn new(m: usize, r: usize) -> Result<Self> {
        if r == 0 || r > m {
            return Err(Error::InvalidArgument(format!("need 1 <= r <= m, got r={r}, m={m}")));
        }
        Ok(Self { m, r, k: m / r, s: m % r })
    }

    /// `S_1 = [1,kr]²`, `S_2 = [1,kr]×[kr+1,m]`, `S_3 = [kr+1,m]×[1,kr]`,
    /// `S_4 = [kr+1,m]²`. The last three are empty when `s = 0`.
    pub fn blocks(&self) -> [Region; 4] {
        let kr = self.k * self.r;
        [
            Region::new(vec![1, 1], vec![kr, kr]),
            Region::new(vec![1, kr + 1], vec![kr, self.s]),
            Region::new(vec![kr + 1, 1], vec![self.s, kr]),
            Region::new(vec![kr + 1, kr + 1], vec![self.s, self.s]),
        ]
    }

    /// `k²·b_r + (2k+1)·r²`.
    pub fn size_bound(&self, b_r: usize) -> usize {
        self.k * self.k * b_r + (2 * self.k + 1) * self.r * self.r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Composition {
    pub split: Split,
    pub block_sizes: [usize; 4],
    pub code: RepCode,
    pub representative: bool,
    /// Filled by [`compose_minimal`]: `b_r`, the bound and whether it holds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_bound: Option<bool>,
}

fn require_plane(lat: &WeightedLattice, split: &Split) -> Result<()> {
    if lat.d() != 2 {
        return Err(Error::InvalidArgument(format!("composition needs d = 2, got {}", lat.d())));
    }
    if lat.m() != split.m {
        return Err(Error::InvalidArgument(format!("split is for m={}, lattice has m={}", split.m, lat.m())));
    }
    Ok(())
}

/// Union of four block codes given in block-local 1-based coordinates. Each
/// must be representative for its block at `ε` (against the lattice's own
/// weights there); codes for empty blocks must be empty.
pub fn compose(lat: &WeightedLattice, split: &Split, epsilon: &BigRational, codes: &[RepCode; 4]) -> Result<Composition> {
    require_plane(lat, split)?;
    let mut all = Vec::new();
    let mut block_sizes = [0; 4];
    for (i, (block, code)) in split.blocks().iter().zip(codes).enumerate() {
        if block.is_empty() {
            if !code.is_empty() {
                return Err(Error::InvalidArgument(format!("block S_{} is empty but got points", i + 1)));
            }
            continue;
        }
        let global: Vec<usize> = code
            .points
            .iter()
            .map(|p| block.to_global(p).and_then(|g| lat.index(&g)))
            .collect::<Result<_>>()?;
        if !is_representative_in(lat, block, &global, epsilon)? {
            return Err(Error::InvalidArgument(format!("code for S_{} is not representative", i + 1)));
        }
        block_sizes[i] = global.len();
        all.extend(global);
    }
    let code = RepCode::from_indices(lat, epsilon, &all);
    let representative = super::is_representative(lat, &code)?;
    Ok(Composition {
        split: *split,
        block_sizes,
        code,
        representative,
        b_r: None,
        size_bound: None,
        within_bound: None,
    })
}

/// `S_1` covered by the union of minimum codes of its `k²` tiles, the other
/// blocks by their own minimum codes.
pub fn compose_minimal(lat: &WeightedLattice, r: usize, epsilon: &BigRational) -> Result<Composition> {
    let split = Split::new(lat.m(), r)?;
    require_plane(lat, &split)?;
    let blocks = split.blocks();
    let mut codes: [RepCode; 4] = std::array::from_fn(|_| RepCode::new(Ratio(epsilon.clone()), vec![]));
    let mut s1 = Vec::new();
    for tile in tiles(2, split.r, split.k) {
        let (_, kept) = min_rep_in(lat, &tile, epsilon)?;
        s1.extend(kept.iter().map(|&i| lat.point(i)));
    }
    codes[0] = RepCode::new(Ratio(epsilon.clone()), s1);
    for (code, block) in codes.iter_mut().zip(&blocks).skip(1) {
        if block.is_empty() {
            continue;
        }
        let (_, kept) = min_rep_in(lat, block, epsilon)?;
        *code = RepCode::new(Ratio(epsilon.clone()), kept.iter().map(|&i| lat.point(i)).collect());
    }
    // codes are global so far; make them block-local
    for (code, block) in codes.iter_mut().zip(&blocks) {
        for p in code.points.iter_mut() {
            for (c, lo) in p.iter_mut().zip(&block.lo) {
                *c -= lo - 1;
            }
        }
    }
    let mut out = compose(lat, &split, epsilon, &codes)?;
    let b_r = tile_min_sizes(lat, r, 1, epsilon)?[0].min_size;
    let bound = split.size_bound(b_r);
    out.b_r = Some(b_r);
    out.size_bound = Some(bound);
    out.within_bound = Some(out.code.len() <= bound);
    Ok(out)
}

/// Tiles of side `r` covering `{1..k·r}^d`, row-major by tile.
fn tiles(d: usize, r: usize, k: usize) -> Vec<Region> {
    let count = k.pow(d as u32);
    (0..count)
        .map(|t| {
            let mut rem = t;
            let mut lo = vec![0; d];
            for c in lo.iter_mut().rev() {
                *c = (rem % k) * r + 1;
                rem /= k;
            }
            Region::new(lo, vec![r; d])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tile {
    pub lo: Vec<usize>,
    pub min_size: usize,
}

/// Minimum code size of every side-`r` tile of `{1..k·r}^d`. The first
/// entry is the corner tile `T_1`.
pub fn tile_min_sizes(lat: &WeightedLattice, r: usize, k: usize, epsilon: &BigRational) -> Result<Vec<Tile>> {
    if r == 0 || k == 0 || k * r > lat.m() {
        return Err(Error::InvalidArgument(format!("{k} tiles of side {r} do not fit in m={}", lat.m())));
    }
    tiles(lat.d(), r, k)
        .into_iter()
        .map(|tile| {
            let (size, _) = min_rep_in(lat, &tile, epsilon)?;
            Ok(Tile { lo: tile.lo, min_size: size })
        })
        .collect()
}

/// Shift every point by `offset` (0-based per axis).
pub fn tile_translate(code: &RepCode, offset: &[usize]) -> RepCode {
    RepCode::new(
        code.epsilon.clone(),
        code.points
            .iter()
            .map(|p| p.iter().zip(offset).map(|(c, o)| c + o).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{min_rep_size, random_monotone_spec, WeightSpec};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn split_blocks() {
        let sp = Split::new(7, 3).unwrap();
        assert_eq!((sp.k, sp.s), (2, 1));
        let vols: Vec<usize> = sp.blocks().iter().map(Region::volume).collect();
        assert_eq!(vols, vec![36, 6, 6, 1]);
        assert!(Split::new(3, 4).is_err());
        assert!(Split::new(3, 0).is_err());
    }

    #[test]
    fn degenerate_split_is_first_block() {
        let lat = WeightedLattice::uniform(4, 2).unwrap();
        let sp = Split::new(4, 2).unwrap();
        let b1 = min_rep_size(&lat, &half()).unwrap().code;
        let empty = RepCode::new(Ratio::new(1, 2), vec![]);
        let out = compose(&lat, &sp, &half(), &[b1.clone(), empty.clone(), empty.clone(), empty]).unwrap();
        assert_eq!(out.code, b1);
        assert!(out.representative);
    }

    #[test]
    fn uniform_three_by_two() {
        let lat = WeightedLattice::uniform(3, 2).unwrap();
        let out = compose_minimal(&lat, 2, &half()).unwrap();
        assert!(out.representative);
        let b3 = min_rep_size(&lat, &half()).unwrap().size;
        // b_3 <= b^(1) + 2·k·r·s + s²
        assert!(b3 <= out.block_sizes[0] + 2 * 2 + 1);
        assert_eq!(out.b_r, Some(3));
        assert_eq!(out.within_bound, Some(true));
    }

    #[test]
    fn rejects_bad_inputs() {
        let lat = WeightedLattice::uniform(3, 1).unwrap();
        assert!(compose_minimal(&lat, 2, &half()).is_err());
        let lat = WeightedLattice::uniform(3, 2).unwrap();
        let sp = Split::new(3, 2).unwrap();
        let e = RepCode::new(Ratio::new(1, 2), vec![]);
        // S_1 = 2x2 needs 3 points
        let thin = RepCode::new(Ratio::new(1, 2), vec![vec![1, 1]]);
        assert!(compose(&lat, &sp, &half(), &[thin, e.clone(), e.clone(), e]).is_err());
    }

    #[test]
    fn shell_translates_shrink() {
        let lat = WeightSpec::Shell.lattice(8, 2).unwrap();
        let sizes = tile_min_sizes(&lat, 2, 4, &half()).unwrap();
        assert_eq!(sizes.len(), 16);
        assert!(sizes.iter().all(|t| t.min_size <= sizes[0].min_size));
    }

    proptest! {
        #[test]
        fn composition_is_representative(seed in any::<u64>(), m in 2usize..=9, r in 1usize..=5, e in 1i64..=3) {
            let r = r.min(m);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lat = random_monotone_spec(&mut rng, m, 2).unwrap().lattice(m, 2).unwrap();
            let eps = BigRational::new(e.into(), 4.into());
            let out = compose_minimal(&lat, r, &eps).unwrap();
            prop_assert!(out.representative);
            prop_assert_eq!(out.within_bound, Some(true));
        }

        #[test]
        fn translated_corner_code_covers_tiles(seed in any::<u64>(), r in 1usize..=3, k in 1usize..=3, d in 1usize..=2) {
            let m = r * k;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lat = random_monotone_spec(&mut rng, m, d).unwrap().lattice(m, d).unwrap();
            let eps = half();
            let corner = Region::new(vec![1; d], vec![r; d]);
            let (c1, kept) = min_rep_in(&lat, &corner, &eps).unwrap();
            let w1 = RepCode::from_indices(&lat, &eps, &kept);
            for tile in tiles(d, r, k) {
                let offset: Vec<usize> = tile.lo.iter().map(|c| c - 1).collect();
                let moved = tile_translate(&w1, &offset).indices(&lat).unwrap();
                prop_assert!(is_representative_in(&lat, &tile, &moved, &eps).unwrap());
                prop_assert!(min_rep_in(&lat, &tile, &eps).unwrap().0 <= c1);
            }
        }
    }
}
