//! Work budgets for the exponential enumerations.

use crate::error::{Error, Result};

/// Environment variable that overrides [`Budget::DEFAULT_CHECKS`].
pub const BUDGET_ENV: &str = "RECMETH_WORK_BUDGET";

/// Upper bound on the number of elementary checks an enumeration may perform.
///
/// What counts as one check is documented on each operation that takes a
/// budget; callers get [`Error::BudgetExceeded`] *before* any work starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_checks: u64,
}

impl Budget {
    pub const DEFAULT_CHECKS: u64 = 100_000_000;

    pub fn new(max_checks: u64) -> Result<Self> {
        if max_checks == 0 {
            return Err(Error::InvalidArgument("work budget must be positive".into()));
        }
        Ok(Self { max_checks })
    }

    pub fn unlimited() -> Self {
        Self {
            max_checks: u64::MAX,
        }
    }

    /// Default budget, overridden by `RECMETH_WORK_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => {
                let n: u64 = raw.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("{BUDGET_ENV}={raw:?} is not a positive integer"))
                })?;
                Self::new(n)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.max_checks as u128 {
            Err(Error::BudgetExceeded {
                what,
                needed,
                budget: self.max_checks,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_checks: Self::DEFAULT_CHECKS,
        }
    }
}

/// Binomial coefficient saturating at `u128::MAX`.
pub fn binomial_saturating(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
