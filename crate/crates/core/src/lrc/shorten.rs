//! The subcode shortening procedure behind the partial-locality bound.
//!
//! Each iteration picks a `τ`-subset `P_j` of the still-unfixed part of `Θ`,
//! pins the fresh positions `I_j` of its locality set to their most popular
//! projection value (pigeonhole), and recomputes the reach `J_j` of
//! everything pinned so far. Words of the surviving subcode agree on all
//! pinned and determined positions, so dropping those positions leaves a
//! shorter code with at least the original minimum distance, and Singleton
//! on that shorter code bounds `d(C)`.

use itertools::Itertools;
use serde::Serialize;
use std::collections::HashMap;

use super::{compute_t, BoundParams, LocalityStructure};
use crate::code::{is_determined, min_distance, reach, Code, PositionSet, Token};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct ShorteningStep {
    pub iteration: usize,
    /// `P_j`
    pub chosen: PositionSet,
    /// `T_{P_j}`
    pub locality: PositionSet,
    /// `I_j`: the part of `T_{P_j}` not pinned or determined before.
    pub fresh: PositionSet,
    pub m: usize,
    /// `x_j`, the pinned values on `fresh`.
    pub projection: Vec<Token>,
    pub subcode_size: usize,
    /// `J_j`: the reach of all positions pinned so far, taken in the full code.
    pub reach: PositionSet,
    pub remaining: usize,
    /// `#C_j · q^(m_1 + ... + m_j) >= #C`
    pub fiber_floor_ok: bool,
    /// `#C_j >= q^(k - j·r)`
    pub size_floor_ok: bool,
    /// `#J_j >= j·τ`
    pub reach_floor_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The subcode is down to a single word.
    SubcodeExhausted,
    /// Fewer than `τ` positions of `Θ` remain unfixed.
    ThetaExhausted,
    /// No remaining `τ`-subset has a locality set with a fresh position.
    NoFreshLocality,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShorteningTrace {
    /// `T` from the iteration conditions: iterations guaranteed in the worst case.
    pub guaranteed_iterations: usize,
    /// Whether `r + n - θ < k`, the condition under which a fresh subset always exists.
    pub progress_guaranteed: bool,
    pub iterations: Vec<ShorteningStep>,
    pub stop_reason: StopReason,
    /// Iterations behind the certificate: the last state with at least two words.
    pub certified_iterations: usize,
    /// `Q_T`: positions kept in the reduced code.
    pub reduced_positions: PositionSet,
    pub reduced_size: usize,
    pub reduced_min_distance: usize,
    /// Singleton bound of the reduced code: `len + 1 - ceil(log_q #D)`.
    pub certified_bound: i64,
    /// `n - k + 1 - T·τ`.
    pub distance_bound: i64,
    pub singleton: i64,
    pub fixed_positions_constant: bool,
    #[serde(skip)]
    pub reduced_code: Option<Code>,
}

impl ShorteningTrace {
    /// Every per-iteration floor holds.
    pub fn invariants_hold(&self) -> bool {
        self.fixed_positions_constant
            && self
                .iterations
                .iter()
                .all(|s| s.fiber_floor_ok && s.size_floor_ok && s.reach_floor_ok)
            && self.iterations.windows(2).all(|w| w[1].subcode_size <= w[0].subcode_size)
    }
}

fn pow_saturating(q: usize, e: usize) -> u128 {
    (q as u128).checked_pow(e.min(u32::MAX as usize) as u32).unwrap_or(u128::MAX)
}

fn ceil_log(q: usize, size: usize) -> i64 {
    let mut p: u128 = 1;
    let mut e = 0;
    while p < size as u128 {
        p *= q as u128;
        e += 1;
    }
    e
}

struct State {
    pinned: PositionSet,
    reach: PositionSet,
    members: Vec<usize>,
}

/// Run the shortening procedure. Requires an explicit locality map (for
/// example the one returned by [`super::verify_capability`]); each map
/// entry is checked against the code when it is used.
pub fn shorten(code: &Code, loc: &LocalityStructure) -> Result<ShorteningTrace> {
    let map = loc.map.as_ref().ok_or(Error::MissingLocalityMap)?;
    let k = code
        .dimension()
        .ok_or_else(|| Error::InvalidCode(format!("{} words is not a power of q={}", code.len(), code.q())))?
        as usize;
    if code.len() < 2 {
        return Err(Error::TooFewWords(code.len()));
    }
    let (n, q) = (code.n(), code.q());
    loc.theta.check_bounds(n)?;
    let report = compute_t(BoundParams {
        n,
        k,
        theta: loc.theta_size(),
        tau: loc.tau,
        r: loc.r,
        q,
        linear: code.is_linear(),
    })?;

    let mut states = vec![State {
        pinned: PositionSet::empty(),
        reach: reach(code, &PositionSet::empty())?,
        members: (0..code.len()).collect(),
    }];
    let mut steps = Vec::new();
    let mut pinned_total = 0usize;

    let stop_reason = loop {
        let cur = states.last().expect("initial state");
        if cur.members.len() < 2 {
            break StopReason::SubcodeExhausted;
        }
        let settled = cur.pinned.union(&cur.reach);
        let remaining = loc.theta.difference(&settled);
        if remaining.len() < loc.tau {
            break StopReason::ThetaExhausted;
        }
        let mut pick = None;
        for p in remaining.iter().combinations(loc.tau) {
            let p = PositionSet::new(p);
            let t = map.get(&p).ok_or_else(|| {
                Error::InvalidLocality(format!("locality map has no entry for {p}"))
            })?;
            let fresh = t.difference(&settled);
            if !fresh.is_empty() {
                pick = Some((p, t.clone(), fresh));
                break;
            }
        }
        let Some((chosen, locality, fresh)) = pick else {
            break StopReason::NoFreshLocality;
        };
        for j in chosen.iter() {
            if !is_determined(code, &locality, j)? {
                return Err(Error::InvalidLocality(format!(
                    "{locality} does not determine position {}",
                    j + 1
                )));
            }
        }

        // pigeonhole: largest fiber, ties to the smallest projection value
        let words = code.words();
        let mut fibers: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
        for &i in &cur.members {
            let key = fresh.iter().map(|p| words[i][p]).collect();
            fibers.entry(key).or_default().push(i);
        }
        let (value, members) = fibers
            .into_iter()
            .max_by(|(ka, va), (kb, vb)| va.len().cmp(&vb.len()).then_with(|| kb.cmp(ka)))
            .expect("non-empty subcode");

        let pinned = cur.pinned.union(&fresh);
        let new_reach = reach(code, &pinned)?;
        pinned_total += fresh.len();
        let iteration = steps.len() + 1;
        let size = members.len() as u128;
        steps.push(ShorteningStep {
            iteration,
            fiber_floor_ok: size.saturating_mul(pow_saturating(q, pinned_total)) >= code.len() as u128,
            size_floor_ok: size.saturating_mul(pow_saturating(q, iteration * loc.r)) >= pow_saturating(q, k),
            reach_floor_ok: new_reach.len() >= iteration * loc.tau,
            remaining: loc.theta.difference(&pinned.union(&new_reach)).len(),
            chosen,
            locality,
            m: fresh.len(),
            projection: value
                .iter()
                .map(|&s| code.alphabet().symbols()[s as usize].clone())
                .collect(),
            fresh,
            subcode_size: members.len(),
            reach: new_reach.clone(),
        });
        states.push(State {
            pinned,
            reach: new_reach,
            members,
        });
    };

    let certified_iterations = states
        .iter()
        .rposition(|s| s.members.len() >= 2)
        .expect("the full code has at least two words");
    let cert = &states[certified_iterations];
    let settled = cert.pinned.union(&cert.reach);
    let words = code.words();
    let first = &words[cert.members[0]];
    let fixed_positions_constant = cert
        .members
        .iter()
        .all(|&i| settled.iter().all(|p| words[i][p] == first[p]));
    let kept = PositionSet::range(0, n).difference(&settled);
    let reduced = code.subcode(&cert.members)?.puncture_to(&kept)?;
    let reduced_min_distance = min_distance(&reduced)?;
    let certified_bound = kept.len() as i64 + 1 - ceil_log(q, reduced.len());

    Ok(ShorteningTrace {
        guaranteed_iterations: report.t,
        progress_guaranteed: loc.r + n < k + loc.theta_size(),
        iterations: steps,
        stop_reason,
        certified_iterations,
        reduced_size: reduced.len(),
        reduced_positions: kept,
        reduced_min_distance,
        certified_bound,
        distance_bound: report.bound,
        singleton: report.singleton,
        fixed_positions_constant,
        reduced_code: Some(reduced),
    })
}
