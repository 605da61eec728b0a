//! Scaling, fiber and meridian projection maps on half-cylinders and
//! suspensions.

use alloc::format;

use super::{distance_unchecked, Point, Space, SuspPoint};
use crate::math::{self, FRAC_PI_2, PI};
use crate::{Error, Result};

/// `L_s([x, t]) = [x, s t]` on a suspension.
///
/// The pole `0` is fixed for every `s`. The pole `pi` has no base point, so
/// it can only be mapped for `s = 0` (to `0`) and `s = 1` (to itself).
pub fn scaling_map(space: &Space, s: f64, p: &Point) -> Result<Point> {
    if space.as_suspension().is_none() {
        return Err(Error::UnsupportedSpace { operation: "scaling_map", kind: space.kind_name() });
    }
    space.contains(p)?;
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Precondition(format!("scale factor {s} must be a finite non-negative number")));
    }
    match p {
        Point::Susp(SuspPoint::Zero) => Ok(Point::pole_zero()),
        Point::Susp(SuspPoint::Pi) => {
            if s == 0.0 {
                Ok(Point::pole_zero())
            } else if s == 1.0 {
                Ok(Point::pole_pi())
            } else {
                Err(Error::Precondition(format!("L_{s} of the pi pole is outside the suspension or has no base point")))
            }
        }
        Point::Susp(SuspPoint::At { base, angle }) => {
            let scaled = s * angle;
            if scaled > PI {
                return Err(Error::Precondition(format!("s t = {scaled} exceeds pi")));
            }
            Point::susp((**base).clone(), scaled)
        }
        _ => unreachable!("membership checked above"),
    }
}

/// `T_t`: replaces the fiber coordinate of `p` by `t`.
///
/// On a half-cylinder `X x_q [0, inf)` this is `(x, s) -> (x, t)`; on a
/// suspension it is `[x, s] -> [x, t]`. The poles carry no base point, so for
/// `0 < t < pi` they are sent to `[pole_base, t]`, which must then be given.
pub fn fiber_projection(space: &Space, t: f64, p: &Point, pole_base: Option<&Point>) -> Result<Point> {
    space.contains(p)?;
    match space {
        Space::QProduct { right, .. } if matches!(**right, Space::Ray | Space::Interval { .. }) => {
            let (x, _) = p.as_pair().expect("membership checked above");
            let fiber = Point::Scalar(t);
            right.contains(&fiber).map_err(|_| Error::Precondition(format!("fiber level {t} outside the second factor")))?;
            Ok(Point::pair(x.clone(), fiber))
        }
        Space::Suspension(s) => {
            if !(0.0..=PI).contains(&t) {
                return Err(Error::AngleOutOfRange(t));
            }
            if t == 0.0 {
                return Ok(Point::pole_zero());
            }
            if t == PI {
                return Ok(Point::pole_pi());
            }
            match p.susp_base() {
                Some(x) => Point::susp(x.clone(), t),
                None => {
                    let x = pole_base
                        .ok_or_else(|| Error::Precondition("projecting a pole needs an extension base point".into()))?;
                    s.base().contains(x)?;
                    Point::susp(x.clone(), t)
                }
            }
        }
        _ => Err(Error::UnsupportedSpace { operation: "fiber_projection", kind: space.kind_name() }),
    }
}

/// Nearest point to `p = [x, t]` on the half-meridian `s -> [y, s pi/2]`:
/// `[y, atan(cos d(x, y) tan t)]` for `t < pi/2` and `[y, pi/2]` at
/// `t = pi/2`.
///
/// Requires a base of diameter `< pi/2` and `t <= pi/2`.
pub fn meridian_projection(space: &Space, y: &Point, p: &Point) -> Result<Point> {
    let Some(s) = space.as_suspension() else {
        return Err(Error::UnsupportedSpace { operation: "meridian_projection", kind: space.kind_name() });
    };
    if s.wide_base() {
        return Err(Error::Precondition("meridian projection needs a base of diameter < pi/2".into()));
    }
    space.contains(p)?;
    s.base().contains(y)?;
    let t = p.susp_angle().expect("membership checked above");
    if t > FRAC_PI_2 {
        return Err(Error::Precondition(format!("angle {t} lies above the equator")));
    }
    let Some(x) = p.susp_base() else {
        return Ok(Point::pole_zero());
    };
    if t == FRAC_PI_2 {
        return Point::susp(y.clone(), FRAC_PI_2);
    }
    let d = distance_unchecked(s.base(), x, y);
    let angle = if d == 0.0 { t } else { math::atan(math::cos(d) * math::tan(t)) };
    Point::susp(y.clone(), angle)
}
