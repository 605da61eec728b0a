//! Metric spaces, their points, and the geometry built on them.
//!
//! A [`Space`] is an immutable descriptor with a total distance function
//! ([`distance`]); a [`Point`] is a tagged coordinate whose shape must match
//! the space it is used with. Suspension points at angle `0` or `pi` are
//! always stored as the canonical poles [`SuspPoint::Zero`] and
//! [`SuspPoint::Pi`], so equality at the poles ignores the base point.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::math::{self, PI};
use crate::{Error, Result, COORD_TOL};

mod conditions;
mod geodesic;
mod projection;

pub use conditions::{condition_a_check, condition_b_check, in_interior_set, BETWEENNESS_SLACK, CONDITION_B_SEPARATION};
pub use geodesic::{geodesic, intermediate_points, Geodesic};
pub use projection::{fiber_projection, meridian_projection, scaling_map};

/// A point of one of the supported spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    /// A real coordinate on a ray or an interval.
    Scalar(f64),
    /// Euclidean coordinates.
    Vector(Vec<f64>),
    /// A point of a finite metric space.
    Index(usize),
    /// A point of a `q`-product.
    Pair(Box<Point>, Box<Point>),
    /// A point of a spherical suspension.
    Susp(SuspPoint),
}

/// A point `[x, t]` of a spherical suspension.
#[derive(Debug, Clone, PartialEq)]
pub enum SuspPoint {
    /// The pole `[x, 0]`.
    Zero,
    /// The pole `[x, pi]`.
    Pi,
    /// `[base, angle]` with `0 < angle < pi`.
    At { base: Box<Point>, angle: f64 },
}

impl Point {
    pub fn pair(left: Point, right: Point) -> Point {
        Point::Pair(Box::new(left), Box::new(right))
    }

    /// The suspension point `[base, angle]`, canonicalised to a pole when
    /// `angle` is exactly `0` or `pi`.
    pub fn susp(base: Point, angle: f64) -> Result<Point> {
        if !(0.0..=PI).contains(&angle) || angle.is_nan() {
            return Err(Error::AngleOutOfRange(angle));
        }
        Ok(Point::Susp(if angle == 0.0 {
            SuspPoint::Zero
        } else if angle == PI {
            SuspPoint::Pi
        } else {
            SuspPoint::At { base: Box::new(base), angle }
        }))
    }

    pub fn pole_zero() -> Point {
        Point::Susp(SuspPoint::Zero)
    }

    pub fn pole_pi() -> Point {
        Point::Susp(SuspPoint::Pi)
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Point::Scalar(v) => Some(*v),
            Point::Vector(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Point, &Point)> {
        match self {
            Point::Pair(l, r) => Some((l, r)),
            _ => None,
        }
    }

    /// Angle of a suspension point (`0` and `pi` at the poles).
    pub fn susp_angle(&self) -> Option<f64> {
        match self {
            Point::Susp(SuspPoint::Zero) => Some(0.0),
            Point::Susp(SuspPoint::Pi) => Some(PI),
            Point::Susp(SuspPoint::At { angle, .. }) => Some(*angle),
            _ => None,
        }
    }

    /// Base point of a non-pole suspension point.
    pub fn susp_base(&self) -> Option<&Point> {
        match self {
            Point::Susp(SuspPoint::At { base, .. }) => Some(base),
            _ => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, Point::Susp(SuspPoint::Zero | SuspPoint::Pi))
    }

    /// Equality with `tol` slack on continuous coordinates; indices and poles
    /// compare exactly.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        match (self, other) {
            (Point::Scalar(a), Point::Scalar(b)) => (a - b).abs() <= tol,
            (Point::Vector(a), Point::Vector(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
            }
            (Point::Index(a), Point::Index(b)) => a == b,
            (Point::Pair(a1, a2), Point::Pair(b1, b2)) => a1.approx_eq(b1, tol) && a2.approx_eq(b2, tol),
            (Point::Susp(a), Point::Susp(b)) => match (a, b) {
                (SuspPoint::Zero, SuspPoint::Zero) | (SuspPoint::Pi, SuspPoint::Pi) => true,
                (SuspPoint::At { base: x, angle: s }, SuspPoint::At { base: y, angle: t }) => {
                    (s - t).abs() <= tol && x.approx_eq(y, tol)
                }
                _ => false,
            },
            _ => false,
        }
    }

    /// Total order used for deterministic tie-breaking (lowest index first).
    pub(crate) fn order_key(&self, out: &mut Vec<f64>) {
        match self {
            Point::Scalar(v) => out.push(*v),
            Point::Vector(v) => out.extend_from_slice(v),
            Point::Index(i) => out.push(*i as f64),
            Point::Pair(l, r) => {
                l.order_key(out);
                r.order_key(out);
            }
            Point::Susp(SuspPoint::Zero) => out.push(0.0),
            Point::Susp(SuspPoint::Pi) => out.push(PI),
            Point::Susp(SuspPoint::At { base, angle }) => {
                out.push(*angle);
                base.order_key(out);
            }
        }
    }
}

/// Distance matrix of a finite metric space, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetric {
    n: usize,
    dist: Vec<f64>,
    diameter: f64,
}

impl FiniteMetric {
    /// Validates a row-major `n x n` matrix: finite, symmetric, zero on the
    /// diagonal, positive off it, and satisfying the triangle inequality.
    pub fn new(n: usize, dist: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("finite space needs at least one point".into()));
        }
        if dist.len() != n * n {
            return Err(Error::InvalidSpace(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        let at = |i: usize, j: usize| dist[i * n + j];
        let mut diameter = 0.0f64;
        for i in 0..n {
            if at(i, i) != 0.0 {
                return Err(Error::InvalidSpace(format!("d({i},{i}) = {} is not zero", at(i, i))));
            }
            for j in 0..n {
                let d = at(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidSpace(format!("d({i},{j}) = {d} is not a finite non-negative number")));
                }
                if i != j && d == 0.0 {
                    return Err(Error::InvalidSpace(format!("points {i} and {j} are at distance zero")));
                }
                if (d - at(j, i)).abs() > COORD_TOL {
                    return Err(Error::InvalidSpace(format!("matrix is not symmetric at ({i},{j})")));
                }
                diameter = diameter.max(d);
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if at(i, k) > at(i, j) + at(j, k) + COORD_TOL * (1.0 + at(i, k)) {
                        return Err(Error::InvalidSpace(format!("triangle inequality fails for ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(FiniteMetric { n, dist, diameter })
    }

    /// Points on the real line with the induced metric.
    pub fn line(coords: &[f64]) -> Result<Self> {
        let n = coords.len();
        let dist = (0..n * n).map(|k| (coords[k / n] - coords[k % n]).abs()).collect();
        Self::new(n, dist)
    }

    /// Shortest-path metric of a connected weighted graph.
    pub fn graph(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut dist = alloc::vec![f64::INFINITY; n * n];
        for i in 0..n {
            dist[i * n + i] = 0.0;
        }
        for &(u, v, w) in edges {
            if u >= n || v >= n || !(w > 0.0) {
                return Err(Error::InvalidSpace(format!("bad edge ({u},{v},{w})")));
            }
            dist[u * n + v] = dist[u * n + v].min(w);
            dist[v * n + u] = dist[v * n + u].min(w);
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = dist[i * n + k] + dist[k * n + j];
                    if via < dist[i * n + j] {
                        dist[i * n + j] = via;
                    }
                }
            }
        }
        if dist.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidSpace("graph is not connected".into()));
        }
        Self::new(n, dist)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Row-major copy of the matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.dist
    }
}

/// A spherical suspension over a base space.
#[derive(Debug, Clone, PartialEq)]
pub struct Suspension {
    base: Box<Space>,
    strict: bool,
    wide_base: bool,
}

impl Suspension {
    pub fn base(&self) -> &Space {
        &self.base
    }

    /// Whether the base diameter is `< pi/2` was enforced at construction.
    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Set when the base diameter is not known to be `< pi/2`.
    pub fn wide_base(&self) -> bool {
        self.wide_base
    }
}

/// A metric space descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    /// `[0, inf)`.
    Ray,
    /// `[a, b]`.
    Interval { a: f64, b: f64 },
    /// `R^dim` with the Euclidean norm.
    Euclidean { dim: usize },
    Finite(FiniteMetric),
    /// `left x_q right` with metric `(d_l^q + d_r^q)^(1/q)`.
    QProduct { left: Box<Space>, right: Box<Space>, q: f64 },
    Suspension(Suspension),
}

impl Space {
    pub fn interval(a: f64, b: f64) -> Result<Space> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidSpace(format!("interval [{a}, {b}] is empty or unbounded")));
        }
        Ok(Space::Interval { a, b })
    }

    pub fn euclidean(dim: usize) -> Result<Space> {
        if dim == 0 {
            return Err(Error::InvalidSpace("euclidean dimension must be positive".into()));
        }
        Ok(Space::Euclidean { dim })
    }

    pub fn finite(metric: FiniteMetric) -> Space {
        Space::Finite(metric)
    }

    pub fn qproduct(left: Space, right: Space, q: f64) -> Result<Space> {
        if !(q > 1.0) || !q.is_finite() {
            return Err(Error::InvalidSpace(format!("q-product exponent must be > 1, got {q}")));
        }
        Ok(Space::QProduct { left: Box::new(left), right: Box::new(right), q })
    }

    /// The half-cylinder `base x_q [0, inf)`.
    pub fn half_cylinder(base: Space, q: f64) -> Result<Space> {
        Space::qproduct(base, Space::Ray, q)
    }

    /// Spherical suspension over `base`. In strict mode a base of diameter
    /// `>= pi/2` is rejected; otherwise it only sets [`Suspension::wide_base`].
    pub fn suspension(base: Space, strict: bool) -> Result<Space> {
        let wide_base = !(base.diameter() < math::FRAC_PI_2);
        if strict && wide_base {
            return Err(Error::InvalidSpace(format!(
                "suspension base diameter {} is not below pi/2",
                base.diameter()
            )));
        }
        Ok(Space::Suspension(Suspension { base: Box::new(base), strict, wide_base }))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Space::Ray => "ray",
            Space::Interval { .. } => "interval",
            Space::Euclidean { .. } => "euclidean",
            Space::Finite(_) => "finite",
            Space::QProduct { .. } => "qproduct",
            Space::Suspension(_) => "suspension",
        }
    }

    /// Diameter; `f64::INFINITY` for unbounded spaces.
    pub fn diameter(&self) -> f64 {
        match self {
            Space::Ray | Space::Euclidean { .. } => f64::INFINITY,
            Space::Interval { a, b } => b - a,
            Space::Finite(m) => m.diameter(),
            Space::QProduct { left, right, q } => {
                math::root(math::abs_pow(left.diameter(), *q) + math::abs_pow(right.diameter(), *q), *q)
            }
            Space::Suspension(_) => PI,
        }
    }

    /// True for the spaces with a quantile representation: ray, interval,
    /// and the line `Euclidean { dim: 1 }`.
    pub fn is_one_dimensional(&self) -> bool {
        matches!(self, Space::Ray | Space::Interval { .. } | Space::Euclidean { dim: 1 })
    }

    pub fn as_suspension(&self) -> Option<&Suspension> {
        match self {
            Space::Suspension(s) => Some(s),
            _ => None,
        }
    }

    /// A canonical point, used as the lowest-index choice when a geodesic is
    /// not unique.
    pub fn first_point(&self) -> Point {
        match self {
            Space::Ray => Point::Scalar(0.0),
            Space::Interval { a, .. } => Point::Scalar(*a),
            Space::Euclidean { dim } => Point::Vector(alloc::vec![0.0; *dim]),
            Space::Finite(_) => Point::Index(0),
            Space::QProduct { left, right, .. } => Point::pair(left.first_point(), right.first_point()),
            Space::Suspension(_) => Point::pole_zero(),
        }
    }

    /// Enumerates the points of a finite space (or a product of finite spaces).
    pub fn enumerate_points(&self) -> Option<Vec<Point>> {
        match self {
            Space::Finite(m) => Some((0..m.len()).map(Point::Index).collect()),
            Space::QProduct { left, right, .. } => {
                let l = left.enumerate_points()?;
                let r = right.enumerate_points()?;
                Some(
                    l.iter()
                        .flat_map(|a| r.iter().map(move |b| Point::pair(a.clone(), b.clone())))
                        .collect(),
                )
            }
            _ => None,
        }
    }

    /// Checks that `p` is a valid point of this space.
    pub fn contains(&self, p: &Point) -> Result<()> {
        let mismatch = |reason: alloc::string::String| Err(Error::PointMismatch { expected: self.kind_name(), reason });
        match (self, p) {
            (Space::Ray, Point::Scalar(v)) => {
                if *v >= 0.0 && v.is_finite() {
                    Ok(())
                } else {
                    mismatch(format!("ray coordinate {v} is negative or not finite"))
                }
            }
            (Space::Interval { a, b }, Point::Scalar(v)) => {
                if *v >= *a && *v <= *b {
                    Ok(())
                } else {
                    mismatch(format!("{v} outside [{a}, {b}]"))
                }
            }
            (Space::Euclidean { dim }, Point::Vector(v)) => {
                if v.len() == *dim && v.iter().all(|c| c.is_finite()) {
                    Ok(())
                } else {
                    mismatch(format!("vector of length {} in dimension {dim}", v.len()))
                }
            }
            (Space::Finite(m), Point::Index(i)) => {
                if *i < m.len() {
                    Ok(())
                } else {
                    mismatch(format!("index {i} out of {} points", m.len()))
                }
            }
            (Space::QProduct { left, right, .. }, Point::Pair(l, r)) => {
                left.contains(l)?;
                right.contains(r)
            }
            (Space::Suspension(s), Point::Susp(sp)) => match sp {
                SuspPoint::Zero | SuspPoint::Pi => Ok(()),
                SuspPoint::At { base, angle } => {
                    if !(*angle > 0.0 && *angle < PI) {
                        return Err(Error::AngleOutOfRange(*angle));
                    }
                    s.base.contains(base)
                }
            },
            _ => mismatch(format!("{p:?} has the wrong shape")),
        }
    }
}

/// The metric of `space`.
///
/// * ray / interval: `|a - b|`;
/// * Euclidean: the 2-norm;
/// * finite: matrix lookup;
/// * `q`-product: `(d_l^q + d_r^q)^(1/q)`;
/// * suspension: `acos(cos t cos s + sin t sin s cos d(x, y))`, with the
///   argument clamped to `[-1, 1]`.
pub fn distance(space: &Space, a: &Point, b: &Point) -> Result<f64> {
    space.contains(a)?;
    space.contains(b)?;
    Ok(distance_unchecked(space, a, b))
}

/// [`distance`] without membership validation; callers guarantee shapes.
pub(crate) fn distance_unchecked(space: &Space, a: &Point, b: &Point) -> f64 {
    match (space, a, b) {
        (Space::Ray | Space::Interval { .. }, Point::Scalar(x), Point::Scalar(y)) => (x - y).abs(),
        (Space::Euclidean { .. }, Point::Vector(x), Point::Vector(y)) => {
            math::sqrt(x.iter().zip(y).map(|(u, v)| (u - v) * (u - v)).sum())
        }
        (Space::Finite(m), Point::Index(i), Point::Index(j)) => m.get(*i, *j),
        (Space::QProduct { left, right, q }, Point::Pair(a1, a2), Point::Pair(b1, b2)) => {
            let dl = distance_unchecked(left, a1, b1);
            let dr = distance_unchecked(right, a2, b2);
            if dl == 0.0 {
                dr
            } else if dr == 0.0 {
                dl
            } else {
                math::root(math::abs_pow(dl, *q) + math::abs_pow(dr, *q), *q)
            }
        }
        (Space::Suspension(s), Point::Susp(x), Point::Susp(y)) => susp_distance(&s.base, x, y),
        _ => f64::NAN,
    }
}

fn susp_distance(base: &Space, a: &SuspPoint, b: &SuspPoint) -> f64 {
    use SuspPoint::*;
    match (a, b) {
        (Zero, Zero) | (Pi, Pi) => 0.0,
        (Zero, Pi) | (Pi, Zero) => PI,
        (Zero, At { angle, .. }) | (At { angle, .. }, Zero) => *angle,
        (Pi, At { angle, .. }) | (At { angle, .. }, Pi) => PI - angle,
        (At { base: x, angle: t }, At { base: y, angle: s }) => {
            let dxy = distance_unchecked(base, x, y);
            if dxy == 0.0 {
                return (t - s).abs();
            }
            let c = math::cos(*t) * math::cos(*s) + math::sin(*t) * math::sin(*s) * math::cos(dxy);
            math::acos_clamped(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_4;

    fn two_point(d: f64) -> Space {
        Space::finite(FiniteMetric::new(2, vec![0.0, d, d, 0.0]).unwrap())
    }

    #[test]
    fn pole_to_any_point_is_its_angle() {
        let s = Space::suspension(two_point(0.3), true).unwrap();
        for t in [0.1, 1.0, 2.5] {
            let p = Point::susp(Point::Index(1), t).unwrap();
            assert_eq!(distance(&s, &Point::pole_zero(), &p).unwrap(), t);
        }
    }

    #[test]
    fn suspension_closed_form() {
        let s = Space::suspension(two_point(PI / 3.0), true).unwrap();
        let a = Point::susp(Point::Index(0), FRAC_PI_4).unwrap();
        let b = Point::susp(Point::Index(1), FRAC_PI_4).unwrap();
        // cos^2(pi/4) + sin^2(pi/4) cos(pi/3) = 0.75
        let d = distance(&s, &a, &b).unwrap();
        assert!((d - libm::acos(0.75)).abs() < 1e-15);
        assert!((d - 0.722734).abs() < 1e-6);
    }

    #[test]
    fn qproduct_three_four_five() {
        let i = Space::interval(0.0, 10.0).unwrap();
        let s = Space::qproduct(i.clone(), i, 2.0).unwrap();
        let a = Point::pair(Point::Scalar(0.0), Point::Scalar(0.0));
        let b = Point::pair(Point::Scalar(3.0), Point::Scalar(4.0));
        assert_eq!(distance(&s, &a, &b).unwrap(), 5.0);
    }

    #[test]
    fn poles_are_canonical() {
        assert_eq!(Point::susp(Point::Index(0), 0.0).unwrap(), Point::pole_zero());
        assert_eq!(Point::susp(Point::Index(1), PI).unwrap(), Point::susp(Point::Index(0), PI).unwrap());
        assert!(matches!(Point::susp(Point::Index(0), 3.5), Err(Error::AngleOutOfRange(_))));
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let err = distance(&Space::Ray, &Point::Scalar(0.0), &Point::Index(1)).unwrap_err();
        assert!(matches!(err, Error::PointMismatch { .. }));
        assert!(distance(&Space::Ray, &Point::Scalar(-1.0), &Point::Scalar(1.0)).is_err());
    }

    #[test]
    fn finite_metric_validation() {
        assert!(FiniteMetric::new(2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        assert!(FiniteMetric::new(3, vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0]).is_err());
        assert!(FiniteMetric::new(2, vec![0.0, 0.0, 0.0, 0.0]).is_err());
        let c4 = FiniteMetric::graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        assert_eq!(c4.get(0, 2), 2.0);
        assert_eq!(c4.diameter(), 2.0);
    }

    #[test]
    fn strict_suspension_rejects_wide_base() {
        assert!(Space::suspension(two_point(2.0), true).is_err());
        let s = Space::suspension(two_point(2.0), false).unwrap();
        assert!(s.as_suspension().unwrap().wide_base());
        let s = Space::suspension(Space::interval(0.0, 1.0).unwrap(), true).unwrap();
        assert!(!s.as_suspension().unwrap().wide_base());
        assert!(Space::qproduct(Space::Ray, Space::Ray, 1.0).is_err());
    }
}
