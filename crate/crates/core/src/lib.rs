//! Executable machinery for three recursive results in coding and random
//! permutations:
//!
//! * [`lrc`]: minimum-distance bounds for codes where only part of the
//!   positions have small locality sets, together with the subcode
//!   shortening procedure that certifies them,
//! * [`lattice`]: exact minimum sizes of representative codes (hitting sets)
//!   on weighted lattices and their subadditive scaling,
//! * [`perm`]: the exact recursion for moments of the number of cycles of a
//!   uniform random permutation.
//!
//! Every exact quantity is computed with arbitrary-precision rationals and
//! cross-checked against an independent brute-force route.

pub mod budget;
pub mod code;
pub mod error;
pub mod lattice;
pub mod lrc;
pub mod perm;
pub mod ratio;
pub mod reproduce;

pub use budget::Budget;
pub use code::{Alphabet, Code, ExtCount, PositionSet, Token};
pub use error::{Error, Result};
pub use lattice::{RepCode, WeightSpec, WeightedLattice};
pub use lrc::{BoundReport, Capability, LocalityStructure, ShorteningTrace};
pub use perm::{CycleDecomposition, MomentTable, Permutation, SampleSummary};
pub use ratio::Ratio;

/// Format version written into every file this crate emits.
pub const FORMAT_VERSION: u32 = 1;
