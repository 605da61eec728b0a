//! Cyclical monotonicity of plan supports.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::TransportPlan;
use crate::spaces::distance_unchecked;
use crate::{math, Error, Result};

/// A cost decrease below this is not reported as a violation.
pub const CYCLE_SLACK: f64 = 1e-9;

/// Largest cycle length accepted by [`is_cyclically_monotone`].
pub const MAX_CYCLE_GUARD: usize = 6;

/// A cyclic reassignment of plan entries that lowers the cost: the source of
/// `entries[k]` is sent to the target of `entries[k + 1]` (cyclically).
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    /// Indices into [`TransportPlan::entries`].
    pub entries: Vec<usize>,
    /// Cost decrease `sum c(x_k, y_k) - sum c(x_k, y_{k+1}) > 0`.
    pub gain: f64,
}

/// Checks `sum c(x_k, y_k) <= sum c(x_k, y_{sigma(k)})` over all cycles of
/// at most `max_cycle` support pairs, with `c = d^p`. Returns `None` when
/// the support passes, and a violating cycle otherwise.
///
/// Closed walks of bounded length are minimised by min-plus matrix powers,
/// and a negative walk is split into simple cycles, one of which is
/// negative; this avoids enumerating permutations.
pub fn is_cyclically_monotone(plan: &TransportPlan, max_cycle: usize) -> Result<Option<Cycle>> {
    if max_cycle > MAX_CYCLE_GUARD {
        return Err(Error::Precondition(format!("cycle length {max_cycle} exceeds the guard {MAX_CYCLE_GUARD}")));
    }
    let k = plan.entries().len();
    if max_cycle < 2 || k < 2 {
        return Ok(None);
    }
    let space = plan.space();
    let p = plan.p();
    let c = |e: usize, f: usize| {
        let x = plan.source().point(plan.entries()[e].0);
        let y = plan.target().point(plan.entries()[f].1);
        math::abs_pow(distance_unchecked(space, x, y), p)
    };
    // w[e][f]: change in cost when the source of e is sent to the target of f.
    let diag: Vec<f64> = (0..k).map(|e| c(e, e)).collect();
    let mut w = vec![0.0; k * k];
    for e in 0..k {
        for f in 0..k {
            w[e * k + f] = if e == f { 0.0 } else { c(e, f) - diag[e] };
        }
    }

    let mut layers: Vec<(Vec<f64>, Vec<usize>)> = Vec::with_capacity(max_cycle);
    let first_pred: Vec<usize> = (0..k * k).map(|ab| ab / k).collect();
    layers.push((w.clone(), first_pred));
    for len in 2..=max_cycle {
        let (prev, _) = &layers[len - 2];
        let mut next = vec![f64::INFINITY; k * k];
        let mut pred = vec![0usize; k * k];
        for a in 0..k {
            for mid in 0..k {
                let base = prev[a * k + mid];
                if !base.is_finite() {
                    continue;
                }
                for b in 0..k {
                    let v = base + w[mid * k + b];
                    if v < next[a * k + b] {
                        next[a * k + b] = v;
                        pred[a * k + b] = mid;
                    }
                }
            }
        }
        layers.push((next, pred));
        let (walks, _) = &layers[len - 1];
        for a in 0..k {
            if walks[a * k + a] < -CYCLE_SLACK {
                let walk = backtrack(&layers, k, a, len);
                if let Some(cycle) = most_negative_cycle(&walk, &w, k) {
                    return Ok(Some(cycle));
                }
            }
        }
    }
    Ok(None)
}

/// Nodes `v_0 = a, ..., v_{len-1}` of the minimal closed walk through `a`.
fn backtrack(layers: &[(Vec<f64>, Vec<usize>)], k: usize, a: usize, len: usize) -> Vec<usize> {
    let mut walk = vec![a; len + 1];
    for l in (1..=len).rev() {
        walk[l - 1] = layers[l - 1].1[a * k + walk[l]];
    }
    walk.pop();
    walk
}

fn most_negative_cycle(walk: &[usize], w: &[f64], k: usize) -> Option<Cycle> {
    let weight = |cyc: &[usize]| -> f64 { (0..cyc.len()).map(|i| w[cyc[i] * k + cyc[(i + 1) % cyc.len()]]).sum() };
    let mut stack: Vec<usize> = Vec::new();
    let mut best: Option<Cycle> = None;
    for &v in walk.iter().chain(core::iter::once(&walk[0])) {
        if let Some(pos) = stack.iter().position(|&u| u == v) {
            let cyc: Vec<usize> = stack.drain(pos..).collect();
            let total = weight(&cyc);
            if cyc.len() >= 2 && best.as_ref().is_none_or(|b| -total > b.gain) {
                best = Some(Cycle { entries: cyc, gain: -total });
            }
        }
        stack.push(v);
    }
    best.filter(|b| b.gain > CYCLE_SLACK)
}
