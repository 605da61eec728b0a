//! Constructions on spherical suspensions: the two distinct midpoints
//! between an equator measure and a pole mixture, and projections onto a
//! meridian.

use alloc::format;
use alloc::vec::Vec;

use crate::interpolation::verify_midpoint;
use crate::measures::AtomicMeasure;
use crate::spaces::{distance_unchecked, meridian_projection, scaling_map, Point, Space};
use crate::transport::solve_wp;
use crate::{Error, Result};

const FIBER_TOL: f64 = 1e-12;
const SPLIT_TOL: f64 = 1e-12;

fn require_suspension(mu: &AtomicMeasure, operation: &'static str) -> Result<()> {
    match mu.space() {
        Space::Suspension(_) => Ok(()),
        other => Err(Error::UnsupportedSpace { operation, kind: other.kind_name() }),
    }
}

/// Common angle of all atoms, which must avoid the poles.
fn fiber_level(mu: &AtomicMeasure) -> Result<f64> {
    let t = mu.point(0).susp_angle().expect("suspension point");
    for (p, _) in mu.atoms() {
        if p.is_pole() || (p.susp_angle().unwrap() - t).abs() > FIBER_TOL {
            return Err(Error::Precondition("measure is not supported on a single fiber".into()));
        }
    }
    Ok(t)
}

/// `(1 - lambda) delta_0 + lambda delta_pi`.
pub fn pole_mixture(space: &Space, lambda: f64) -> Result<AtomicMeasure> {
    AtomicMeasure::new(space.clone(), alloc::vec![(Point::pole_zero(), 1.0 - lambda), (Point::pole_pi(), lambda)])
}

/// Two midpoints between an equator measure `nu` and
/// `(1 - lambda) delta_0 + lambda delta_pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoMidpoints {
    pub lambda: f64,
    pub target: AtomicMeasure,
    /// Atom indices of `nu` in the ball `E`, with `nu(E) = 1 - lambda`.
    pub split: Vec<usize>,
    /// `(1 - lambda) L_{1/2}(nu|E) + lambda L_{3/2}(nu|F)`, normalised pieces.
    pub m1: AtomicMeasure,
    /// `(1 - lambda) L_{1/2}(nu) + lambda L_{3/2}(nu)`.
    pub m2: AtomicMeasure,
    pub m1_verified: bool,
    pub m2_verified: bool,
    /// `W_p(m1, m2)`.
    pub separation: f64,
}

/// Builds the two midpoints between `nu` (on the equator, not a Dirac mass)
/// and `(1 - lambda) delta_0 + lambda delta_pi`.
///
/// The first splits `supp(nu)` into a ball `E` around one atom and the rest
/// `F` with `nu(F) = lambda`, sends `E` halfway up to `0` and `F` halfway
/// down to `pi`; the second sends a `1 - lambda` share of every atom up and
/// the rest down. For `lambda` in `{0, 1}` both reduce to a single scaling.
/// A Dirac `nu` has exactly one midpoint, returned inside
/// [`Error::DiracEquator`].
pub fn suspension_two_midpoints(nu: &AtomicMeasure, lambda: f64, p: f64) -> Result<TwoMidpoints> {
    require_suspension(nu, "suspension_two_midpoints")?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Precondition(format!("lambda = {lambda} outside [0, 1]")));
    }
    let t = fiber_level(nu)?;
    if (t - core::f64::consts::FRAC_PI_2).abs() > FIBER_TOL {
        return Err(Error::Precondition(format!("measure lies on the fiber {t}, not on the equator")));
    }
    let space = nu.space();
    let up = |m: &AtomicMeasure| m.push_forward(nu.space_arc().clone(), |x| scaling_map(space, 0.5, x));
    let down = |m: &AtomicMeasure| m.push_forward(nu.space_arc().clone(), |x| scaling_map(space, 1.5, x));
    let target = pole_mixture(space, lambda)?;
    let (half_up, half_down) = (up(nu)?, down(nu)?);
    let m2 = if lambda == 0.0 {
        half_up.clone()
    } else if lambda == 1.0 {
        half_down.clone()
    } else {
        AtomicMeasure::mixture(&[(&half_up, 1.0 - lambda), (&half_down, lambda)])?
    };
    if nu.is_dirac() {
        return Err(Error::DiracEquator { unique_midpoint: alloc::boxed::Box::new(m2) });
    }

    let (split, m1) = if lambda == 0.0 || lambda == 1.0 {
        (if lambda == 0.0 { (0..nu.len()).collect() } else { Vec::new() }, m2.clone())
    } else {
        let split = ball_split(nu, lambda)?;
        let (e, _) = nu.restrict_normalized(|x| split.iter().any(|&k| nu.point(k) == x))?;
        let (f, _) = nu.restrict_normalized(|x| !split.iter().any(|&k| nu.point(k) == x))?;
        (split, AtomicMeasure::mixture(&[(&up(&e)?, 1.0 - lambda), (&down(&f)?, lambda)])?)
    };
    Ok(TwoMidpoints {
        lambda,
        m1_verified: verify_midpoint(nu, &target, &m1, p)?,
        m2_verified: verify_midpoint(nu, &target, &m2, p)?,
        separation: solve_wp(&m1, &m2, p)?.0,
        target,
        split,
        m1,
        m2,
    })
}

/// A closed ball `E` around a support atom with `nu(E) = 1 - lambda`,
/// scanning centers and radii in order.
fn ball_split(nu: &AtomicMeasure, lambda: f64) -> Result<Vec<usize>> {
    let space = nu.space();
    for c in 0..nu.len() {
        let mut radii: Vec<f64> = (0..nu.len()).map(|k| distance_unchecked(space, nu.point(c), nu.point(k))).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        for r in radii {
            let ball: Vec<usize> = (0..nu.len()).filter(|&k| distance_unchecked(space, nu.point(c), nu.point(k)) <= r).collect();
            if ball.len() == nu.len() {
                break;
            }
            let mass: f64 = ball.iter().map(|&k| nu.weight(k)).sum();
            if (mass - (1.0 - lambda)).abs() <= SPLIT_TOL {
                return Ok(ball);
            }
        }
    }
    Err(Error::Precondition(format!("no ball around a support atom carries mass {}", 1.0 - lambda)))
}

/// `proj_gamma# mu` for `mu` on a single fiber `0 < t < pi/2` and `gamma`
/// the meridian through the base point `y`.
pub fn meridian_projection_pushforward(mu: &AtomicMeasure, y: &Point) -> Result<AtomicMeasure> {
    require_suspension(mu, "meridian_projection_pushforward")?;
    let t = fiber_level(mu)?;
    if !(t < core::f64::consts::FRAC_PI_2) {
        return Err(Error::Precondition(format!("fiber {t} is not below the equator")));
    }
    project_onto_meridian(mu, y)
}

/// `proj_gamma# mu` for any `mu` supported on angles `<= pi/2`.
pub fn project_onto_meridian(mu: &AtomicMeasure, y: &Point) -> Result<AtomicMeasure> {
    require_suspension(mu, "project_onto_meridian")?;
    mu.push_forward(mu.space_arc().clone(), |p| meridian_projection(mu.space(), y, p))
}

/// Whether two measures stay distinguishable after projecting onto the
/// meridian through `x_o`.
pub fn meridian_separates(a: &AtomicMeasure, b: &AtomicMeasure, x_o: &Point) -> Result<bool> {
    let pa = project_onto_meridian(a, x_o)?;
    let pb = project_onto_meridian(b, x_o)?;
    Ok(!pa.approx_eq(&pb, FIBER_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::FiniteMetric;
    use alloc::vec;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn space(d: f64) -> Space {
        Space::suspension(Space::finite(FiniteMetric::new(2, vec![0.0, d, d, 0.0]).unwrap()), true).unwrap()
    }

    fn at(i: usize, t: f64) -> Point {
        Point::susp(Point::Index(i), t).unwrap()
    }

    #[test]
    fn two_atom_equator_measure() {
        let s = space(0.4);
        let nu = AtomicMeasure::new(s.clone(), vec![(at(0, FRAC_PI_2), 0.5), (at(1, FRAC_PI_2), 0.5)]).unwrap();
        let r = suspension_two_midpoints(&nu, 0.5, 2.0).unwrap();
        let q = 3.0 * FRAC_PI_4;
        let m1 = AtomicMeasure::new(s.clone(), vec![(at(0, FRAC_PI_4), 0.5), (at(1, q), 0.5)]).unwrap();
        let m2 = AtomicMeasure::new(
            s,
            vec![(at(0, FRAC_PI_4), 0.25), (at(1, FRAC_PI_4), 0.25), (at(0, q), 0.25), (at(1, q), 0.25)],
        )
        .unwrap();
        assert!(r.m1.approx_eq(&m1, 1e-15));
        assert!(r.m2.approx_eq(&m2, 1e-15));
        assert!(r.m1_verified && r.m2_verified);
        assert!(r.separation > 1e-3);
    }

    #[test]
    fn dirac_equator_measure_has_one_midpoint() {
        let s = space(0.4);
        let nu = AtomicMeasure::dirac(s.clone(), at(0, FRAC_PI_2)).unwrap();
        let Err(Error::DiracEquator { unique_midpoint }) = suspension_two_midpoints(&nu, 0.3, 2.0) else {
            panic!("expected the Dirac error");
        };
        let expected = AtomicMeasure::new(s.clone(), vec![(at(0, FRAC_PI_4), 0.7), (at(0, 3.0 * FRAC_PI_4), 0.3)]).unwrap();
        assert!(unique_midpoint.approx_eq(&expected, 1e-15));
        let target = pole_mixture(&s, 0.3).unwrap();
        assert!(verify_midpoint(&nu, &target, &unique_midpoint, 2.0).unwrap());
    }

    #[test]
    fn degenerate_lambda_gives_one_scaling() {
        let s = space(0.4);
        let nu = AtomicMeasure::new(s, vec![(at(0, FRAC_PI_2), 0.3), (at(1, FRAC_PI_2), 0.7)]).unwrap();
        for lambda in [0.0, 1.0] {
            let r = suspension_two_midpoints(&nu, lambda, 2.0).unwrap();
            assert_eq!(r.m1, r.m2);
            assert!(r.m1_verified);
        }
        assert!(suspension_two_midpoints(&nu, 0.5, 2.0).is_err());
    }

    #[test]
    fn projection_pushforward() {
        let s = space(0.4);
        let t = 0.6;
        let on = AtomicMeasure::dirac(s.clone(), at(1, t)).unwrap();
        assert_eq!(meridian_projection_pushforward(&on, &Point::Index(1)).unwrap(), on);
        let mu = AtomicMeasure::new(s.clone(), vec![(at(0, t), 0.5), (at(1, t), 0.5)]).unwrap();
        let image = meridian_projection_pushforward(&mu, &Point::Index(1)).unwrap();
        let low = libm::atan(libm::cos(0.4) * libm::tan(t));
        let expected = AtomicMeasure::new(s, vec![(at(1, low), 0.5), (at(1, t), 0.5)]).unwrap();
        assert!(image.approx_eq(&expected, 1e-15));
        assert_eq!(image.mass_at(&at(1, t)), mu.mass_at(&at(1, t)));
    }
}
