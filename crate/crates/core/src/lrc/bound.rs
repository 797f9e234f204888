use serde::Serialize;

use crate::code::{delta_bound, delta_fits, ExtCount, DELTA_CEILING};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    pub n: usize,
    pub k: usize,
    pub theta: usize,
    pub tau: usize,
    pub r: usize,
    pub q: usize,
    pub linear: bool,
}

/// Evaluation of both iteration conditions at one `t`:
/// `t·r <= k-1+θ-n` and `t·r + Δ(t·r) <= θ-τ+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionRow {
    pub t: usize,
    pub tr: usize,
    pub first_rhs: i64,
    pub first_ok: bool,
    pub delta: ExtCount,
    pub second_rhs: i64,
    pub second_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub params: BoundParams,
    #[serde(rename = "T")]
    pub t: usize,
    pub bound: i64,
    pub singleton: i64,
    pub conditions: Vec<ConditionRow>,
}

/// The distance bound `n - k + 1 - T·τ`, with `T` the largest `t` passing
/// both conditions (0 when `t = 1` already fails, leaving plain Singleton).
///
/// Both left-hand sides grow with `t`, so scanning upward from 1 and
/// stopping at the first failure finds the largest passing `t`.
pub fn compute_t(params: BoundParams) -> Result<BoundReport> {
    let BoundParams {
        n,
        k,
        theta,
        tau,
        r,
        q,
        linear,
    } = params;
    if k == 0 || k > n || theta > n || tau == 0 || r == 0 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "need n >= k >= 1, theta <= n, tau, r >= 1, q >= 2; got {params:?}"
        )));
    }
    let (n, k, theta, tau) = (n as i64, k as i64, theta as i64, tau as i64);
    let first_rhs = k - 1 + theta - n;
    let second_rhs = theta - tau + 1;

    let mut conditions = Vec::new();
    let mut best = 0;
    for t in 1usize.. {
        let tr = t * r;
        let first_ok = tr as i64 <= first_rhs;
        let second_ok = delta_fits(q as u64, tr as u64, linear, tr as u64, second_rhs);
        conditions.push(ConditionRow {
            t,
            tr,
            first_rhs,
            first_ok,
            delta: delta_bound(q as u64, tr as u64, linear, DELTA_CEILING),
            second_rhs,
            second_ok,
        });
        if !(first_ok && second_ok) {
            break;
        }
        best = t;
    }
    let singleton = n - k + 1;
    Ok(BoundReport {
        params,
        t: best,
        bound: singleton - best as i64 * tau,
        singleton,
        conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: usize, k: usize, theta: usize, tau: usize, r: usize, q: usize, linear: bool) -> BoundParams {
        BoundParams {
            n,
            k,
            theta,
            tau,
            r,
            q,
            linear,
        }
    }

    #[test]
    fn example_code_bound() {
        let rep = compute_t(params(131, 10, 130, 1, 3, 2, true)).unwrap();
        assert_eq!(rep.t, 2);
        assert_eq!(rep.bound, 120);
        assert_eq!(rep.singleton, 122);
        // t = 2: 6 <= 8 and 6 + 64 = 70 <= 130; t = 3: 9 > 8
        assert_eq!(rep.conditions.len(), 3);
        assert_eq!(rep.conditions[1].delta, ExtCount::Finite(64));
        assert!(rep.conditions[1].first_ok && rep.conditions[1].second_ok);
        assert!(!rep.conditions[2].first_ok);
    }

    #[test]
    fn singleton_fallback() {
        let rep = compute_t(params(20, 5, 20, 1, 6, 2, true)).unwrap();
        assert_eq!(rep.t, 0);
        assert_eq!(rep.bound, 16);
        assert_eq!(rep.bound, rep.singleton);
    }

    #[test]
    fn nonlinear_delta_enters_exactly() {
        // r = 2, t = 2: Δ(4) = 2^16 = 65536 and the second condition needs 4 + 65536 <= θ - τ + 1
        let at = |theta| compute_t(params(70_001, 70_000, theta, 1, 2, 2, false)).unwrap();
        let pass = at(65_540);
        assert_eq!(pass.conditions[1].delta, ExtCount::Finite(65_536));
        assert!(pass.conditions[1].second_ok);
        assert!(pass.t >= 2);
        let fail = at(65_539);
        assert!(!fail.conditions[1].second_ok);
        assert_eq!(fail.t, 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(compute_t(params(5, 6, 5, 1, 1, 2, true)).is_err());
        assert!(compute_t(params(5, 2, 6, 1, 1, 2, true)).is_err());
        assert!(compute_t(params(5, 2, 5, 1, 1, 1, true)).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_parameters(
            n in 1usize..300, k in 1usize..300, theta in 0usize..300,
            tau in 1usize..4, r in 1usize..6, linear: bool,
        ) {
            let k = k.min(n);
            let theta = theta.min(n);
            let base = compute_t(params(n, k, theta, tau, r, 2, linear)).unwrap();
            prop_assert!(base.bound <= base.singleton);
            if theta < n {
                let more = compute_t(params(n, k, theta + 1, tau, r, 2, linear)).unwrap();
                prop_assert!(more.t >= base.t);
            }
            if k < n {
                let more = compute_t(params(n, k + 1, theta, tau, r, 2, linear)).unwrap();
                prop_assert!(more.t >= base.t);
            }
            let wider = compute_t(params(n, k, theta, tau, r + 1, 2, linear)).unwrap();
            prop_assert!(wider.t <= base.t);
            let nonlinear = compute_t(params(n, k, theta, tau, r, 2, false)).unwrap();
            prop_assert!(nonlinear.t <= compute_t(params(n, k, theta, tau, r, 2, true)).unwrap().t);
        }
    }
}
