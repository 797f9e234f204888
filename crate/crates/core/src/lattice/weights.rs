use num::{BigInt, BigRational, One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

use super::{lattice_size, WeightedLattice};
use crate::error::{Error, Result};
use crate::ratio::Ratio;
use crate::FORMAT_VERSION;

/// A weight assignment for every lattice size of one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    /// Every point weighs 1 (`β = 1`).
    Uniform,
    /// `w(1,..,1) = 2`, and `1 + 1/i` on the shell `{1..i+1}^d \ {1..i}^d`
    /// (`β = 2`, monotone).
    Shell,
    /// A fixed grid of side `m`, row-major. Smaller lattices of the same `d`
    /// use the restriction to `{1..m'}^d`.
    Explicit {
        m: usize,
        d: usize,
        weights: Vec<Ratio>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<Ratio>,
    },
}

/// `{"format": 1, "kind": ...}` on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightSpecFile {
    #[serde(default = "default_format")]
    pub format: u32,
    #[serde(flatten)]
    pub spec: WeightSpec,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

impl WeightSpec {
    /// `uniform`, `shell`, or a path to a spec file.
    pub fn resolve(arg: &str) -> Result<Self> {
        match arg {
            "uniform" => Ok(WeightSpec::Uniform),
            "shell" => Ok(WeightSpec::Shell),
            path => Self::read(Path::new(path)),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let raw = std::fs::read_to_string(path)?;
        let file: WeightSpecFile = serde_json::from_str(&raw)?;
        if file.format != FORMAT_VERSION {
            return Err(Error::InvalidLattice(format!("unsupported format {}", file.format)));
        }
        Ok(file.spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightSpec::Uniform => "uniform",
            WeightSpec::Shell => "shell",
            WeightSpec::Explicit { .. } => "explicit",
        }
    }

    /// `β` of the family.
    pub fn beta(&self) -> BigRational {
        match self {
            WeightSpec::Uniform => BigRational::one(),
            WeightSpec::Shell => BigRational::from_integer(BigInt::from(2)),
            WeightSpec::Explicit { weights, beta, .. } => match beta {
                Some(b) => b.0.clone(),
                None => weights.iter().map(|w| w.0.clone()).max().unwrap_or_else(BigRational::zero),
            },
        }
    }

    pub fn lattice(&self, m: usize, d: usize) -> Result<WeightedLattice> {
        let size = lattice_size(m, d)?;
        let weights: Vec<BigRational> = match self {
            WeightSpec::Uniform => vec![BigRational::one(); size],
            WeightSpec::Shell => (0..size)
                .map(|i| {
                    let top = super::point_of(m, d, i).into_iter().max().expect("d >= 1");
                    if top == 1 {
                        BigRational::from_integer(BigInt::from(2))
                    } else {
                        BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(top - 1))
                    }
                })
                .collect(),
            WeightSpec::Explicit {
                m: full_m,
                d: full_d,
                weights,
                ..
            } => {
                if *full_d != d || m > *full_m {
                    return Err(Error::InvalidLattice(format!(
                        "explicit grid is {full_m}^{full_d}, cannot provide {m}^{d}"
                    )));
                }
                if weights.len() != lattice_size(*full_m, *full_d)? {
                    return Err(Error::InvalidLattice("explicit grid has the wrong number of weights".into()));
                }
                (0..size)
                    .map(|i| {
                        let p = super::point_of(m, d, i);
                        let j = p.iter().fold(0, |acc, &c| acc * full_m + (c - 1));
                        weights[j].0.clone()
                    })
                    .collect()
            }
        };
        WeightedLattice::new(m, d, weights, Some(self.beta()))
    }

    /// Whether the family is monotone (for explicit grids: on the full grid).
    pub fn is_monotone(&self) -> Result<bool> {
        match self {
            WeightSpec::Uniform | WeightSpec::Shell => Ok(true),
            WeightSpec::Explicit { m, d, .. } => Ok(self.lattice(*m, *d)?.is_monotone()),
        }
    }
}

/// Random monotone grid of side `m`: the far corner weighs 1 and every other
/// point weighs the largest of its forward neighbours plus a random small
/// rational increment (often zero).
pub fn random_monotone_spec<R: Rng>(rng: &mut R, m: usize, d: usize) -> Result<WeightSpec> {
    let size = lattice_size(m, d)?;
    let mut weights = vec![BigRational::zero(); size];
    for idx in (0..size).rev() {
        let p = super::point_of(m, d, idx);
        let mut stride = 1;
        let mut base = BigRational::one();
        for axis in (0..d).rev() {
            if p[axis] < m && weights[idx + stride] > base {
                base = weights[idx + stride].clone();
            }
            stride *= m;
        }
        let inc = if idx + 1 == size || rng.random_bool(0.6) {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(rng.random_range(1..=2)), BigInt::from(rng.random_range(2..=9)))
        };
        weights[idx] = base + inc;
    }
    Ok(WeightSpec::Explicit {
        m,
        d,
        weights: weights.into_iter().map(Ratio).collect(),
        beta: None,
    })
}
