//! Transport on the line: quantile formula, monotone coupling, adjacency.

use alloc::vec::Vec;

use super::TransportPlan;
use crate::measures::{AtomicMeasure, QuantileFunction};
use crate::{math, Error, Result};

const CDF_TOL: f64 = 1e-12;

fn check_line(mu: &AtomicMeasure, nu: &AtomicMeasure, operation: &'static str) -> Result<()> {
    if !mu.same_space(nu) {
        return Err(Error::SpaceMismatch);
    }
    if !mu.space().is_one_dimensional() {
        return Err(Error::UnsupportedSpace { operation, kind: mu.space().kind_name() });
    }
    Ok(())
}

/// `(int_0^1 |G_mu^{-1} - G_nu^{-1}|^p dm)^(1/p)`, summed over the merged
/// breakpoints of both quantile functions.
pub fn wp_1d(mu: &AtomicMeasure, nu: &AtomicMeasure, p: f64) -> Result<f64> {
    check_line(mu, nu, "wp_1d")?;
    super::check_exponent(p)?;
    let cost = QuantileFunction::of(mu)?.lp_cost(&QuantileFunction::of(nu)?, p);
    Ok(math::root(cost, p))
}

/// The monotone (quantile) coupling of two measures on the line, which is
/// optimal for every `p >= 1`.
pub fn monotone_plan(mu: &AtomicMeasure, nu: &AtomicMeasure, p: f64) -> Result<TransportPlan> {
    check_line(mu, nu, "monotone_plan")?;
    let order = |m: &AtomicMeasure| {
        let mut idx: Vec<usize> = (0..m.len()).collect();
        idx.sort_by(|&a, &b| m.point(a).as_scalar().unwrap().total_cmp(&m.point(b).as_scalar().unwrap()));
        idx
    };
    let (oa, ob) = (order(mu), order(nu));
    let (mut ra, mut rb) = (mu.weight(oa[0]), nu.weight(ob[0]));
    let (mut i, mut j) = (0, 0);
    let mut entries = Vec::with_capacity(mu.len() + nu.len());
    loop {
        let x = ra.min(rb);
        entries.push((oa[i], ob[j], x));
        ra -= x;
        rb -= x;
        if i + 1 == oa.len() && j + 1 == ob.len() {
            break;
        }
        // Advance whichever side ran out; at the end only one side may move.
        let advance_row = j + 1 == ob.len() || (i + 1 < oa.len() && ra <= rb);
        if advance_row {
            i += 1;
            ra += mu.weight(oa[i]);
        } else {
            j += 1;
            rb += nu.weight(ob[j]);
        }
    }
    entries.retain(|e| e.2 > 0.0);
    TransportPlan::from_entries(mu.clone(), nu.clone(), entries, p)
}

/// Whether two measures on the line differ only in the masses they assign
/// to two points `a < b`, i.e. their distribution functions agree outside a
/// single interval `[a, b)` on which both are constant.
pub fn adjacency_test(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<bool> {
    check_line(mu, nu, "adjacency_test")?;
    let mut support: Vec<f64> = mu.atoms().iter().chain(nu.atoms()).map(|(p, _)| p.as_scalar().unwrap()).collect();
    support.sort_by(f64::total_cmp);
    support.dedup();
    let cdf = |m: &AtomicMeasure, x: f64| -> f64 {
        m.atoms().iter().filter(|(p, _)| p.as_scalar().unwrap() <= x).map(|(_, w)| w).sum()
    };
    let differing = support.iter().filter(|&&x| (cdf(mu, x) - cdf(nu, x)).abs() > CDF_TOL).count();
    Ok(differing <= 1)
}
