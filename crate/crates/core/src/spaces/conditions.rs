//! Discrete general-position conditions on finite base spaces.
//!
//! `J(x_o)` is the set of points `y != x_o` for which `x_o` lies strictly
//! inside a geodesic issuing from `y`. On a finite space this is rendered as
//! metric betweenness: some `z != x_o` satisfies
//! `d(y, z) = d(y, x_o) + d(x_o, z)` up to [`BETWEENNESS_SLACK`].

use alloc::format;
use alloc::vec::Vec;

use super::{FiniteMetric, Point, Space};
use crate::math::{self, FRAC_PI_2, PI};
use crate::{Error, Result};

/// Slack allowed in the triangle equality that defines betweenness.
pub const BETWEENNESS_SLACK: f64 = 1e-12;

/// Minimal gap between the products compared by [`condition_b_check`].
pub const CONDITION_B_SEPARATION: f64 = 1e-12;

fn finite_metric<'a>(space: &'a Space, operation: &'static str) -> Result<&'a FiniteMetric> {
    match space {
        Space::Finite(m) => Ok(m),
        _ => Err(Error::UnsupportedSpace { operation, kind: space.kind_name() }),
    }
}

fn index_of(space: &Space, p: &Point) -> Result<usize> {
    space.contains(p)?;
    match p {
        Point::Index(i) => Ok(*i),
        _ => unreachable!("finite spaces only contain indices"),
    }
}

/// Whether `y` lies in `J(x_o)`.
pub fn in_interior_set(metric: &FiniteMetric, x_o: usize, y: usize) -> bool {
    if y == x_o {
        return false;
    }
    (0..metric.len()).any(|z| {
        z != x_o && (metric.get(y, z) - metric.get(y, x_o) - metric.get(x_o, z)).abs() <= BETWEENNESS_SLACK
    })
}

/// The lowest-index `x_o` with every target in `J(x_o)`, if any.
pub fn condition_a_check(space: &Space, targets: &[Point]) -> Result<Option<Point>> {
    let metric = finite_metric(space, "condition_a_check")?;
    let targets = targets.iter().map(|p| index_of(space, p)).collect::<Result<Vec<_>>>()?;
    Ok((0..metric.len())
        .find(|&x_o| targets.iter().all(|&y| in_interior_set(metric, x_o, y)))
        .map(Point::Index))
}

/// The lowest-index `x_o` for which all numbers `tan(t_j) cos(d(x_o, x_m))`
/// are pairwise separated by more than [`CONDITION_B_SEPARATION`], if any.
///
/// The angles must lie in `(0, pi/2) U (pi/2, pi)` and be pairwise distinct;
/// the points must be pairwise distinct.
pub fn condition_b_check(space: &Space, x_points: &[Point], t_values: &[f64]) -> Result<Option<Point>> {
    let metric = finite_metric(space, "condition_b_check")?;
    let xs = x_points.iter().map(|p| index_of(space, p)).collect::<Result<Vec<_>>>()?;
    for (k, &t) in t_values.iter().enumerate() {
        if !(t > 0.0 && t < PI) || t == FRAC_PI_2 {
            return Err(Error::Precondition(format!("angle {t} must lie in (0, pi/2) U (pi/2, pi)")));
        }
        if t_values[..k].contains(&t) {
            return Err(Error::Precondition(format!("angle {t} repeated")));
        }
    }
    for (k, &x) in xs.iter().enumerate() {
        if xs[..k].iter().any(|&w| metric.get(w, x) == 0.0) {
            return Err(Error::Precondition(format!("point {x} repeated")));
        }
    }
    let tans: Vec<f64> = t_values.iter().map(|&t| math::tan(t)).collect();
    Ok((0..metric.len())
        .find(|&x_o| {
            let mut values: Vec<f64> = tans
                .iter()
                .flat_map(|tn| xs.iter().map(move |&x| tn * math::cos(metric.get(x_o, x))))
                .collect();
            values.sort_by(f64::total_cmp);
            values.windows(2).all(|w| w[1] - w[0] > CONDITION_B_SEPARATION)
        })
        .map(Point::Index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path() -> Space {
        Space::finite(FiniteMetric::line(&[0.0, 0.5, 1.0]).unwrap())
    }

    #[test]
    fn endpoint_target_on_a_path() {
        assert_eq!(condition_a_check(&path(), &[Point::Index(0)]).unwrap(), Some(Point::Index(1)));
    }

    #[test]
    fn both_endpoints_on_a_path() {
        // The midpoint lies between 0 and 1 in both directions.
        assert_eq!(condition_a_check(&path(), &[Point::Index(0), Point::Index(2)]).unwrap(), Some(Point::Index(1)));
    }

    #[test]
    fn four_cycle() {
        let c = FiniteMetric::graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        // Neighbours of 0 are interior to the geodesics 0-1-2 and 0-3-2; the
        // antipode 2 is the end of every geodesic from 0.
        assert!(in_interior_set(&c, 1, 0));
        assert!(in_interior_set(&c, 3, 0));
        assert!(!in_interior_set(&c, 2, 0));
        assert_eq!(condition_a_check(&Space::finite(c), &[Point::Index(0)]).unwrap(), Some(Point::Index(1)));
    }

    #[test]
    fn no_qualifying_point() {
        let s = Space::finite(FiniteMetric::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap());
        assert_eq!(condition_a_check(&s, &[Point::Index(0)]).unwrap(), None);
    }

    #[test]
    fn condition_b_two_points() {
        let s = Space::finite(FiniteMetric::new(2, vec![0.0, 0.3, 0.3, 0.0]).unwrap());
        let got = condition_b_check(&s, &[Point::Index(0), Point::Index(1)], &[0.5, 1.0]).unwrap();
        assert_eq!(got, Some(Point::Index(0)));
        let single = condition_b_check(&s, &[Point::Index(1)], &[0.5]).unwrap();
        assert_eq!(single, Some(Point::Index(0)));
    }

    #[test]
    fn condition_b_preconditions() {
        let s = Space::finite(FiniteMetric::new(2, vec![0.0, 0.3, 0.3, 0.0]).unwrap());
        assert!(condition_b_check(&s, &[Point::Index(0)], &[FRAC_PI_2]).is_err());
        assert!(condition_b_check(&s, &[Point::Index(0), Point::Index(0)], &[0.5]).is_err());
        assert!(condition_b_check(&s, &[Point::Index(0)], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn condition_b_rejects_symmetric_configuration() {
        // tan t1 = tan t2 cos d makes a product collide from either point.
        let d: f64 = 0.3;
        let t2 = 1.0;
        let t1 = libm::atan(libm::tan(t2) * libm::cos(d));
        let s = Space::finite(FiniteMetric::new(2, vec![0.0, d, d, 0.0]).unwrap());
        let got = condition_b_check(&s, &[Point::Index(0), Point::Index(1)], &[t1, t2]).unwrap();
        assert_eq!(got, None);
    }
}
