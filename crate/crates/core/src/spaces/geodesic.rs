//! Intermediate points `M^t(a, b)` and constant-speed geodesics.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use super::{distance, distance_unchecked, Point, Space, SuspPoint};
use crate::math::{self, PI};
use crate::{Error, Result, COORD_TOL};

/// Slack for the two distance equations defining `M^t(a, b)`, relative to
/// `max(1, d(a, b))`.
const SCAN_TOL: f64 = 1e-9;

/// The set `M^t(a, b) = { z : d(a, z) = t d(a, b), d(z, b) = (1 - t) d(a, b) }`.
///
/// Closed forms are used on rays, intervals, Euclidean spaces and along
/// suspension meridians; finite spaces are scanned exhaustively; `q`-products
/// combine the factor sets coordinatewise. Suspension pairs that are neither
/// pole-anchored nor co-meridian are solved exactly per base point when the
/// base is finite, and reported as [`Error::NotComputable`] otherwise.
///
/// For `a == b` the set is `{a}`.
pub fn intermediate_points(space: &Space, a: &Point, b: &Point, t: f64) -> Result<Vec<Point>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Precondition(format!("t = {t} outside [0, 1]")));
    }
    let d = distance(space, a, b)?;
    if d == 0.0 {
        return Ok(alloc::vec![a.clone()]);
    }
    match (space, a, b) {
        (Space::Ray | Space::Interval { .. }, Point::Scalar(x), Point::Scalar(y)) => {
            Ok(alloc::vec![Point::Scalar(lerp(*x, *y, t))])
        }
        (Space::Euclidean { .. }, Point::Vector(x), Point::Vector(y)) => {
            Ok(alloc::vec![Point::Vector(x.iter().zip(y).map(|(u, v)| lerp(*u, *v, t)).collect())])
        }
        (Space::Finite(m), Point::Index(i), Point::Index(j)) => {
            let tol = SCAN_TOL * d.max(1.0);
            Ok((0..m.len())
                .filter(|&z| (m.get(*i, z) - t * d).abs() <= tol && (m.get(z, *j) - (1.0 - t) * d).abs() <= tol)
                .map(Point::Index)
                .collect())
        }
        (Space::QProduct { left, right, .. }, Point::Pair(a1, a2), Point::Pair(b1, b2)) => {
            let ls = intermediate_points(left, a1, b1, t)?;
            let rs = intermediate_points(right, a2, b2, t)?;
            Ok(ls
                .iter()
                .flat_map(|l| rs.iter().map(move |r| Point::pair(l.clone(), r.clone())))
                .collect())
        }
        (Space::Suspension(s), Point::Susp(x), Point::Susp(y)) => susp_intermediate(space, s.base(), x, y, t, d),
        _ => Err(Error::PointMismatch { expected: space.kind_name(), reason: "unsupported point pair".into() }),
    }
}

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    if t == 0.0 {
        a
    } else if t == 1.0 {
        b
    } else {
        (1.0 - t) * a + t * b
    }
}

/// Meridian endpoint data: the base point and the angles of both ends, when
/// `a` and `b` lie on a common meridian.
fn common_meridian(base_space: &Space, a: &SuspPoint, b: &SuspPoint) -> Option<(Option<Point>, f64, f64)> {
    use SuspPoint::*;
    let angle = |p: &SuspPoint| match p {
        Zero => 0.0,
        Pi => PI,
        At { angle, .. } => *angle,
    };
    match (a, b) {
        (At { base: x, .. }, At { base: y, .. }) => {
            if distance_unchecked(base_space, x, y) <= COORD_TOL {
                Some((Some((**x).clone()), angle(a), angle(b)))
            } else {
                None
            }
        }
        (At { base, .. }, _) | (_, At { base, .. }) => Some((Some((**base).clone()), angle(a), angle(b))),
        _ => Some((None, angle(a), angle(b))),
    }
}

fn susp_intermediate(space: &Space, base_space: &Space, a: &SuspPoint, b: &SuspPoint, t: f64, d: f64) -> Result<Vec<Point>> {
    if let Some((base, s0, s1)) = common_meridian(base_space, a, b) {
        let angle = lerp(s0, s1, t);
        return match base {
            Some(x) => Ok(alloc::vec![Point::susp(x, angle)?]),
            // Pole to pole: every meridian is a geodesic.
            None => match base_space.enumerate_points() {
                Some(points) => points.into_iter().map(|x| Point::susp(x, angle)).collect(),
                None => Err(Error::NotComputable(format!(
                    "pole-to-pole intermediate set over a {} base is infinite",
                    base_space.kind_name()
                ))),
            },
        };
    }
    let Some(bases) = base_space.enumerate_points() else {
        return Err(Error::NotComputable(format!(
            "intermediate points between off-meridian suspension points over a {} base",
            base_space.kind_name()
        )));
    };
    let (pa, pb) = (Point::Susp(a.clone()), Point::Susp(b.clone()));
    let (sa, xa) = match a {
        SuspPoint::At { base, angle } => (*angle, base),
        _ => unreachable!("off-meridian pairs have no poles"),
    };
    let tol = SCAN_TOL * d.max(1.0);
    let target = t * d;
    let mut out: Vec<Point> = Vec::new();
    for candidate in [Point::pole_zero(), Point::pole_pi()] {
        if accepts(space, &pa, &pb, &candidate, target, d - target, tol) {
            out.push(candidate);
        }
    }
    for w in bases {
        // cos(t d) = A cos r + B sin r, solved for the angle r.
        let big_a = math::cos(sa);
        let big_b = math::sin(sa) * math::cos(distance_unchecked(base_space, xa, &w));
        let radius = math::sqrt(big_a * big_a + big_b * big_b);
        if radius == 0.0 {
            continue;
        }
        let c = math::cos(target) / radius;
        if c.abs() > 1.0 + 1e-12 {
            continue;
        }
        let phase = math::atan2(big_b, big_a);
        let spread = math::acos_clamped(c);
        for r in [phase - spread, phase + spread] {
            if !(r > 0.0 && r < PI) {
                continue;
            }
            let z = Point::susp(w.clone(), r)?;
            if accepts(space, &pa, &pb, &z, target, d - target, tol) && !out.iter().any(|p| p.approx_eq(&z, COORD_TOL)) {
                out.push(z);
            }
        }
    }
    Ok(out)
}

fn accepts(space: &Space, a: &Point, b: &Point, z: &Point, da: f64, db: f64, tol: f64) -> bool {
    (distance_unchecked(space, a, z) - da).abs() <= tol && (distance_unchecked(space, z, b) - db).abs() <= tol
}

/// A constant-speed geodesic `s -> gamma_s`, evaluated against the space it
/// was built on.
#[derive(Debug, Clone, PartialEq)]
pub enum Geodesic {
    Constant(Point),
    /// Affine segment on a ray, interval or Euclidean space.
    Linear { start: Point, end: Point },
    /// `s -> [base, (1 - s) from + s to]`.
    Meridian { base: Point, from: f64, to: f64 },
    /// Coordinatewise geodesic of a `q`-product.
    Product { left: Box<Geodesic>, right: Box<Geodesic> },
    /// Resolved pointwise by scanning `M^s(start, end)` and taking the
    /// lowest-index point; defined only on `[0, 1]`.
    Scan { start: Point, end: Point },
}

/// A geodesic from `a` to `b`. Where several exist, the choice is
/// deterministic: pole-to-pole meridians use the first base point.
pub fn geodesic(space: &Space, a: &Point, b: &Point) -> Result<Geodesic> {
    let d = distance(space, a, b)?;
    if d == 0.0 {
        return Ok(Geodesic::Constant(a.clone()));
    }
    match (space, a, b) {
        (Space::Ray | Space::Interval { .. } | Space::Euclidean { .. }, _, _) => {
            Ok(Geodesic::Linear { start: a.clone(), end: b.clone() })
        }
        (Space::Finite(_), _, _) => Ok(Geodesic::Scan { start: a.clone(), end: b.clone() }),
        (Space::QProduct { left, right, .. }, Point::Pair(a1, a2), Point::Pair(b1, b2)) => Ok(Geodesic::Product {
            left: Box::new(geodesic(left, a1, b1)?),
            right: Box::new(geodesic(right, a2, b2)?),
        }),
        (Space::Suspension(s), Point::Susp(x), Point::Susp(y)) => match common_meridian(s.base(), x, y) {
            Some((base, from, to)) => Ok(Geodesic::Meridian {
                base: base.unwrap_or_else(|| s.base().first_point()),
                from,
                to,
            }),
            None if s.base().enumerate_points().is_some() => Ok(Geodesic::Scan { start: a.clone(), end: b.clone() }),
            None => Err(Error::NotComputable(format!(
                "geodesic between off-meridian suspension points over a {} base",
                s.base().kind_name()
            ))),
        },
        _ => Err(Error::PointMismatch { expected: space.kind_name(), reason: "unsupported point pair".into() }),
    }
}

impl Geodesic {
    /// `gamma_s`. Affine and meridian segments may be evaluated outside
    /// `[0, 1]` as long as the result stays in the space.
    pub fn eval(&self, space: &Space, s: f64) -> Result<Point> {
        let p = match self {
            Geodesic::Constant(p) => p.clone(),
            Geodesic::Linear { start, end } => match (start, end) {
                (Point::Scalar(a), Point::Scalar(b)) => Point::Scalar(lerp(*a, *b, s)),
                (Point::Vector(a), Point::Vector(b)) => {
                    Point::Vector(a.iter().zip(b).map(|(u, v)| lerp(*u, *v, s)).collect())
                }
                _ => return Err(Error::PointMismatch { expected: space.kind_name(), reason: "linear geodesic".into() }),
            },
            Geodesic::Meridian { base, from, to } => Point::susp(base.clone(), lerp(*from, *to, s))?,
            Geodesic::Product { left, right } => match space {
                Space::QProduct { left: ls, right: rs, .. } => Point::pair(left.eval(ls, s)?, right.eval(rs, s)?),
                _ => return Err(Error::PointMismatch { expected: space.kind_name(), reason: "product geodesic".into() }),
            },
            Geodesic::Scan { start, end } => {
                if s == 0.0 {
                    start.clone()
                } else if s == 1.0 {
                    end.clone()
                } else {
                    let mut found = intermediate_points(space, start, end, s)?;
                    if found.is_empty() {
                        return Err(Error::NotComputable(format!("no point at parameter {s} between {start:?} and {end:?}")));
                    }
                    found.swap_remove(0)
                }
            }
        };
        space.contains(&p)?;
        Ok(p)
    }

    /// Speed `d(gamma_0, gamma_1)`.
    pub fn speed(&self, space: &Space) -> Result<f64> {
        distance(space, &self.eval(space, 0.0)?, &self.eval(space, 1.0)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::FiniteMetric;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    fn susp_over(n: usize, d: f64) -> Space {
        let dist = (0..n * n).map(|k| if k / n == k % n { 0.0 } else { d }).collect();
        Space::suspension(Space::finite(FiniteMetric::new(n, dist).unwrap()), true).unwrap()
    }

    #[test]
    fn ray_midpoint() {
        let m = intermediate_points(&Space::Ray, &Point::Scalar(0.0), &Point::Scalar(2.0), 0.5).unwrap();
        assert_eq!(m, vec![Point::Scalar(1.0)]);
    }

    #[test]
    fn qproduct_midpoints_are_factorwise() {
        let i = Space::interval(0.0, 2.0).unwrap();
        let s = Space::qproduct(i.clone(), i, 2.0).unwrap();
        let a = Point::pair(Point::Scalar(0.0), Point::Scalar(0.0));
        let b = Point::pair(Point::Scalar(2.0), Point::Scalar(2.0));
        let m = intermediate_points(&s, &a, &b, 0.5).unwrap();
        assert_eq!(m, vec![Point::pair(Point::Scalar(1.0), Point::Scalar(1.0))]);
    }

    #[test]
    fn pole_to_pole_midpoints_cover_the_equator() {
        let s = susp_over(3, 0.4);
        let m = intermediate_points(&s, &Point::pole_zero(), &Point::pole_pi(), 0.5).unwrap();
        let expected: Vec<Point> = (0..3).map(|i| Point::susp(Point::Index(i), FRAC_PI_2).unwrap()).collect();
        assert_eq!(m, expected);
    }

    #[test]
    fn pole_to_pole_brute_force_agrees() {
        // Grid scan of all suspension points equidistant pi/2 from both poles.
        let s = susp_over(3, 0.4);
        let mut grid = vec![Point::pole_zero(), Point::pole_pi()];
        for i in 0..3 {
            for k in 1..16 {
                grid.push(Point::susp(Point::Index(i), PI * k as f64 / 16.0).unwrap());
            }
        }
        let found: Vec<&Point> = grid
            .iter()
            .filter(|z| {
                (distance(&s, &Point::pole_zero(), z).unwrap() - FRAC_PI_2).abs() < 1e-12
                    && (distance(&s, &Point::pole_pi(), z).unwrap() - FRAC_PI_2).abs() < 1e-12
            })
            .collect();
        let m = intermediate_points(&s, &Point::pole_zero(), &Point::pole_pi(), 0.5).unwrap();
        assert_eq!(found.len(), m.len());
        assert!(found.iter().all(|z| m.contains(z)));
    }

    #[test]
    fn off_meridian_over_continuous_base_is_not_computable() {
        let s = Space::suspension(Space::interval(0.0, 1.0).unwrap(), true).unwrap();
        let a = Point::susp(Point::Scalar(0.0), 1.0).unwrap();
        let b = Point::susp(Point::Scalar(1.0), 1.0).unwrap();
        assert!(matches!(intermediate_points(&s, &a, &b, 0.5), Err(Error::NotComputable(_))));
        assert!(matches!(geodesic(&s, &a, &b), Err(Error::NotComputable(_))));
    }

    #[test]
    fn finite_scan_and_missing_midpoint() {
        let s = Space::finite(FiniteMetric::line(&[0.0, 0.5, 1.0]).unwrap());
        let m = intermediate_points(&s, &Point::Index(0), &Point::Index(2), 0.5).unwrap();
        assert_eq!(m, vec![Point::Index(1)]);
        let g = geodesic(&s, &Point::Index(0), &Point::Index(1)).unwrap();
        assert!(matches!(g.eval(&s, 0.5), Err(Error::NotComputable(_))));
    }

    #[test]
    fn finite_base_off_meridian_solution() {
        // Base: line {0, 0.2, 0.4}; [0, pi/2] and [0.4, pi/2] have the equator
        // point over 0.2 as their midpoint.
        let base = Space::finite(FiniteMetric::line(&[0.0, 0.2, 0.4]).unwrap());
        let s = Space::suspension(base, true).unwrap();
        let a = Point::susp(Point::Index(0), FRAC_PI_2).unwrap();
        let b = Point::susp(Point::Index(2), FRAC_PI_2).unwrap();
        let m = intermediate_points(&s, &a, &b, 0.5).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].approx_eq(&Point::susp(Point::Index(1), FRAC_PI_2).unwrap(), 1e-9));
    }

    #[test]
    fn meridian_geodesic_is_constant_speed() {
        let s = susp_over(2, 0.3);
        let g = geodesic(&s, &Point::pole_zero(), &Point::susp(Point::Index(1), 2.0).unwrap()).unwrap();
        let speed = g.speed(&s).unwrap();
        for (u, v) in [(0.0, 0.3), (0.25, 0.75), (0.1, 1.0)] {
            let d = distance(&s, &g.eval(&s, u).unwrap(), &g.eval(&s, v).unwrap()).unwrap();
            assert!((d - (v - u) * speed).abs() < 1e-9);
        }
    }
}
