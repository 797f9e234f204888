//! `Δ(w)`, the worst-case reach of a `w`-set: `q^w` for linear codes and
//! `q^(q^w)` (the number of maps `A^w -> A`) otherwise.
//!
//! The nonlinear value overflows any machine word for `w >= 3` at `q = 2`,
//! so it is never materialized. All arithmetic is checked and saturating,
//! which keeps every comparison exact.

use serde::{Serialize, Serializer};
use std::fmt;

/// Saturation ceiling used when a `Δ` value is reported rather than compared.
pub const DELTA_CEILING: u64 = 1_000_000_000;

/// A count that saturates to `+∞` above a ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtCount {
    Finite(u64),
    Infinite,
}

impl fmt::Display for ExtCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCount::Finite(v) => write!(f, "{v}"),
            ExtCount::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtCount::Finite(v) => s.serialize_u64(*v),
            ExtCount::Infinite => s.serialize_str("inf"),
        }
    }
}

/// `base^exp`, or `None` once it exceeds `u128::MAX`.
fn checked_pow(base: u128, exp: u128) -> Option<u128> {
    if base < 2 {
        return Some(if exp == 0 { 1 } else { base });
    }
    // 2^128 already overflows
    if exp >= 128 {
        return None;
    }
    base.checked_pow(exp as u32)
}

/// Exact `Δ(w)` if it fits in `u128`.
fn delta_exact(q: u64, w: u64, linear: bool) -> Option<u128> {
    let inner = checked_pow(q as u128, w as u128)?;
    if linear {
        Some(inner)
    } else {
        checked_pow(q as u128, inner)
    }
}

/// `Δ(w)`, saturating to [`ExtCount::Infinite`] above `ceiling`.
pub fn delta_bound(q: u64, w: u64, linear: bool, ceiling: u64) -> ExtCount {
    match delta_exact(q, w, linear) {
        Some(v) if v <= ceiling as u128 => ExtCount::Finite(v as u64),
        _ => ExtCount::Infinite,
    }
}

/// Exact test of `offset + Δ(w) <= limit`.
pub fn delta_fits(q: u64, w: u64, linear: bool, offset: u64, limit: i64) -> bool {
    if limit < 0 {
        return false;
    }
    match delta_exact(q, w, linear) {
        Some(d) => d.checked_add(offset as u128).is_some_and(|lhs| lhs <= limit as u128),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(delta_bound(2, 3, true, DELTA_CEILING), ExtCount::Finite(8));
        assert_eq!(delta_bound(2, 0, false, DELTA_CEILING), ExtCount::Finite(2));
        assert_eq!(delta_bound(2, 6, false, DELTA_CEILING), ExtCount::Infinite);
        assert!(!delta_fits(2, 6, false, 6, 1_000_000));
        assert_eq!(delta_bound(2, 4, false, DELTA_CEILING), ExtCount::Finite(65_536));
    }

    #[test]
    fn fits_is_exact_at_the_boundary() {
        // 6 + 2^6 = 70
        assert!(delta_fits(2, 6, true, 6, 70));
        assert!(!delta_fits(2, 6, true, 6, 69));
        // 4 + 2^16
        assert!(delta_fits(2, 4, false, 4, 65_540));
        assert!(!delta_fits(2, 4, false, 4, 65_539));
        assert!(!delta_fits(2, 0, true, 0, -1));
    }

    #[test]
    fn huge_exponents_never_fit() {
        assert!(!delta_fits(2, 200, true, 0, i64::MAX));
        assert!(!delta_fits(3, 5, false, 0, i64::MAX));
        assert_eq!(delta_bound(2, 200, true, u64::MAX), ExtCount::Infinite);
    }

    #[test]
    fn linear_never_exceeds_nonlinear() {
        for q in 2..6 {
            for w in 1..12 {
                assert!(delta_bound(q, w, true, u64::MAX) <= delta_bound(q, w, false, u64::MAX));
            }
        }
    }
}
