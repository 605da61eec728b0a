//! Exact `W_p` distances and diagnostics of optimal plans.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::measures::AtomicMeasure;
use crate::spaces::{distance_unchecked, fiber_projection, Point, Space};
use crate::{math, Error, Result};

mod monotonicity;
mod one_d;
mod simplex;

pub use monotonicity::{is_cyclically_monotone, Cycle, CYCLE_SLACK, MAX_CYCLE_GUARD};
pub use one_d::{adjacency_test, monotone_plan, wp_1d};

/// Allowed deviation of plan marginals from the measure weights.
pub const MARGINAL_TOL: f64 = 1e-10;

/// Plan entries lighter than this are treated as numerical zeros.
const MASS_FLOOR: f64 = 1e-15;

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("exponent p = {p} must be a finite number >= 1")))
    }
}

/// A coupling of two atomic measures, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    source: AtomicMeasure,
    target: AtomicMeasure,
    entries: Vec<(usize, usize, f64)>,
    p: f64,
    cost: f64,
}

impl TransportPlan {
    /// Validates the marginals (within [`MARGINAL_TOL`]) and computes the
    /// cost `sum mass d^p`. Entries of non-positive mass are rejected.
    pub fn from_entries(source: AtomicMeasure, target: AtomicMeasure, entries: Vec<(usize, usize, f64)>, p: f64) -> Result<Self> {
        check_exponent(p)?;
        if !source.same_space(&target) {
            return Err(Error::SpaceMismatch);
        }
        let mut rows = alloc::vec![0.0; source.len()];
        let mut cols = alloc::vec![0.0; target.len()];
        for &(i, j, x) in &entries {
            if i >= source.len() || j >= target.len() {
                return Err(Error::InvalidMeasure(format!("plan entry ({i}, {j}) out of range")));
            }
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidMeasure(format!("plan entry ({i}, {j}) has mass {x}")));
            }
            rows[i] += x;
            cols[j] += x;
        }
        for (k, r) in rows.iter().enumerate() {
            if (r - source.weight(k)).abs() > MARGINAL_TOL {
                return Err(Error::InvalidMeasure(format!("row {k} carries {r}, expected {}", source.weight(k))));
            }
        }
        for (k, c) in cols.iter().enumerate() {
            if (c - target.weight(k)).abs() > MARGINAL_TOL {
                return Err(Error::InvalidMeasure(format!("column {k} carries {c}, expected {}", target.weight(k))));
            }
        }
        let space = source.space();
        let cost = entries
            .iter()
            .map(|&(i, j, x)| x * math::abs_pow(distance_unchecked(space, source.point(i), target.point(j)), p))
            .sum();
        Ok(TransportPlan { source, target, entries, p, cost })
    }

    pub fn source(&self) -> &AtomicMeasure {
        &self.source
    }

    pub fn target(&self) -> &AtomicMeasure {
        &self.target
    }

    pub fn space(&self) -> &Space {
        self.source.space()
    }

    /// `(source index, target index, mass)` triples.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `int d^p d pi`.
    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// `cost^(1/p)`; a single-entry plan reports its distance exactly.
    pub fn wp(&self) -> f64 {
        match self.entries.as_slice() {
            [(i, j, _)] => distance_unchecked(self.space(), self.source.point(*i), self.target.point(*j)),
            _ => math::root(self.cost, self.p),
        }
    }

    /// Source and target points of entry `k`.
    pub fn endpoints(&self, k: usize) -> (&Point, &Point) {
        let (i, j, _) = self.entries[k];
        (self.source.point(i), self.target.point(j))
    }

    /// The same coupling read from target to source.
    pub fn transpose(&self) -> TransportPlan {
        TransportPlan {
            source: self.target.clone(),
            target: self.source.clone(),
            entries: self.entries.iter().map(|&(i, j, x)| (j, i, x)).collect(),
            p: self.p,
            cost: self.cost,
        }
    }
}

fn key_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(a.len().cmp(&b.len()))
}

/// `W_p(mu, nu)` and an optimal plan, from the exact transportation problem
/// with cost `d^p`.
///
/// The problem is always solved in one canonical orientation, so
/// `W_p(mu, nu)` and `W_p(nu, mu)` agree bit for bit; the returned plan is
/// transposed back when needed.
pub fn solve_wp(mu: &AtomicMeasure, nu: &AtomicMeasure, p: f64) -> Result<(f64, TransportPlan)> {
    if !mu.same_space(nu) {
        return Err(Error::SpaceMismatch);
    }
    check_exponent(p)?;
    if key_cmp(&mu.order_key(), &nu.order_key()) == Ordering::Greater {
        let plan = solve_oriented(nu, mu, p)?.transpose();
        return Ok((plan.wp(), plan));
    }
    let plan = solve_oriented(mu, nu, p)?;
    Ok((plan.wp(), plan))
}

fn solve_oriented(mu: &AtomicMeasure, nu: &AtomicMeasure, p: f64) -> Result<TransportPlan> {
    let space = mu.space();
    let (n, m) = (mu.len(), nu.len());
    let mut cost = Vec::with_capacity(n * m);
    for (x, _) in mu.atoms() {
        for (y, _) in nu.atoms() {
            cost.push(math::abs_pow(distance_unchecked(space, x, y), p));
        }
    }
    let supply: Vec<f64> = mu.atoms().iter().map(|a| a.1).collect();
    let demand: Vec<f64> = nu.atoms().iter().map(|a| a.1).collect();
    let mut cells = simplex::solve(&supply, &demand, &cost)?;
    cells.retain(|c| c.2 >= MASS_FLOOR);
    cells.sort_by_key(|c| (c.0, c.1));
    TransportPlan::from_entries(mu.clone(), nu.clone(), cells, p)
        .map_err(|e| Error::SolverFault(format!("solver produced an invalid plan: {e}")))
}

/// `W_p(mu, T_t# mu)` together with `T_t# mu`, the distance from `mu` to the
/// measures supported on the fiber at level `t`.
///
/// Works on half-cylinders `X x_q [0, inf)` and on suspensions. Suspension
/// poles are sent to `[pole_base, t]`; when `pole_base` is `None` the first
/// base point is used.
pub fn distance_to_fiber(mu: &AtomicMeasure, t: f64, p: f64, pole_base: Option<&Point>) -> Result<(f64, AtomicMeasure)> {
    let space = mu.space();
    let fallback;
    let pole_base = match (space, pole_base) {
        (Space::Suspension(s), None) => {
            fallback = s.base().first_point();
            Some(&fallback)
        }
        (_, given) => given,
    };
    let image = mu.push_forward(mu.space_arc().clone(), |x| fiber_projection(space, t, x, pole_base))?;
    let (w, _) = solve_wp(mu, &image, p)?;
    Ok((w, image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::FiniteMetric;
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn ray(atoms: &[(f64, f64)]) -> AtomicMeasure {
        AtomicMeasure::new(Space::Ray, atoms.iter().map(|&(x, w)| (Point::Scalar(x), w)).collect()).unwrap()
    }

    #[test]
    fn dirac_one_against_ray_family() {
        let (w, plan) = solve_wp(&ray(&[(1.0, 1.0)]), &ray(&[(0.0, 0.75), (2.0, 0.25)]), 2.0).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
        assert_eq!(plan.entries().len(), 2);
    }

    #[test]
    fn identical_measures_are_at_distance_zero() {
        let m = ray(&[(0.0, 0.2), (1.0, 0.3), (4.0, 0.5)]);
        let (w, plan) = solve_wp(&m, &m, 2.0).unwrap();
        assert_eq!(w, 0.0);
        assert!(plan.entries().iter().all(|&(i, j, _)| i == j));
    }

    #[test]
    fn poles_are_pi_apart() {
        let base = Space::finite(FiniteMetric::new(2, vec![0.0, 0.4, 0.4, 0.0]).unwrap());
        let s = Space::suspension(base, true).unwrap();
        let a = AtomicMeasure::dirac(s.clone(), Point::pole_zero()).unwrap();
        let b = AtomicMeasure::dirac(s, Point::pole_pi()).unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert_eq!(solve_wp(&a, &b, p).unwrap().0, PI);
        }
    }

    #[test]
    fn symmetric_bit_for_bit() {
        let a = ray(&[(0.0, 0.1), (1.3, 0.6), (2.0, 0.3)]);
        let b = ray(&[(0.7, 0.5), (3.0, 0.5)]);
        let (ab, pab) = solve_wp(&a, &b, 1.5).unwrap();
        let (ba, _) = solve_wp(&b, &a, 1.5).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(pab.source(), &a);
    }

    #[test]
    fn mismatched_spaces() {
        let a = ray(&[(0.0, 1.0)]);
        let b = AtomicMeasure::dirac(Space::interval(0.0, 1.0).unwrap(), Point::Scalar(0.0)).unwrap();
        assert_eq!(solve_wp(&a, &b, 1.0).unwrap_err(), Error::SpaceMismatch);
        assert!(solve_wp(&a, &a, 0.5).is_err());
    }

    #[test]
    fn plan_validation() {
        let a = ray(&[(0.0, 0.5), (1.0, 0.5)]);
        assert!(TransportPlan::from_entries(a.clone(), a.clone(), vec![(0, 0, 0.5)], 1.0).is_err());
        assert!(TransportPlan::from_entries(a.clone(), a.clone(), vec![(0, 1, 0.5), (1, 0, 0.5)], 1.0).is_ok());
        assert!(TransportPlan::from_entries(a.clone(), a, vec![(0, 2, 1.0)], 1.0).is_err());
    }

    #[test]
    fn fiber_distance_on_cylinder_and_suspension() {
        let base = Space::finite(FiniteMetric::new(2, vec![0.0, 0.4, 0.4, 0.0]).unwrap());
        let cyl = Space::half_cylinder(base.clone(), 2.0).unwrap();
        let mu = AtomicMeasure::dirac(cyl.clone(), Point::pair(Point::Index(0), Point::Scalar(3.0))).unwrap();
        let (w, image) = distance_to_fiber(&mu, 0.0, 2.0, None).unwrap();
        assert_eq!(w, 3.0);
        assert_eq!(image.point(0), &Point::pair(Point::Index(0), Point::Scalar(0.0)));

        let s = Space::suspension(base, true).unwrap();
        let at = |i, t| Point::susp(Point::Index(i), t).unwrap();
        let mu = AtomicMeasure::new(s, vec![(at(0, FRAC_PI_4), 0.5), (at(1, FRAC_PI_4), 0.5)]).unwrap();
        let (w, image) = distance_to_fiber(&mu, FRAC_PI_2, 2.0, None).unwrap();
        assert!((w - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(image.mass_at(&at(1, FRAC_PI_2)), 0.5);
    }
}
