//! Half-cylinders `X x_q [0, inf)`: the sets `I(nu)` of measures lying over
//! a base measure, and the pair of measures in `I(mu)` whose geodesic
//! leaves it.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::interpolation::{displacement_interpolate, verify_midpoint};
use crate::measures::AtomicMeasure;
use crate::spaces::{distance, Point, Space, BETWEENNESS_SLACK};
use crate::transport::{distance_to_fiber, is_cyclically_monotone, solve_wp, TransportPlan};
use crate::{math, Error, Result, COORD_TOL};

fn cylinder_base(space: &Space) -> Result<&Space> {
    match space {
        Space::QProduct { left, right, .. } if **right == Space::Ray => Ok(left),
        _ => Err(Error::UnsupportedSpace { operation: "half-cylinder operation", kind: space.kind_name() }),
    }
}

/// `(T_0)_# mu` read as a measure on the base.
pub fn base_projection(mu: &AtomicMeasure) -> Result<AtomicMeasure> {
    let base = cylinder_base(mu.space())?.clone();
    mu.push_forward(base, |p| Ok(p.as_pair().expect("cylinder point").0.clone()))
}

/// `nu x delta_h`: lifts a base measure to height `h` of `cylinder`.
pub fn lift(cylinder: &Arc<Space>, nu: &AtomicMeasure, h: f64) -> Result<AtomicMeasure> {
    if cylinder_base(cylinder)? != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    nu.push_forward(cylinder.clone(), |x| Ok(Point::pair(x.clone(), Point::Scalar(h))))
}

/// Whether `(T_0)_# mu = nu`, i.e. `mu` lies in `I(nu)`.
pub fn cylinder_i_membership(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<bool> {
    let base = base_projection(mu)?;
    if base.space() != nu.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(base.approx_eq(nu, COORD_TOL))
}

/// Cross-check of `I(nu)` through the fiber argmin: `(T_0)_# mu` must be at
/// least as close to `mu` as every measure in `candidates` supported on the
/// fiber `X x {0}`. Returns the smallest margin
/// `W_p(mu, candidate) - W_p(mu, (T_0)_# mu)`.
pub fn fiber_argmin_margin(mu: &AtomicMeasure, candidates: &[AtomicMeasure], p: f64) -> Result<f64> {
    let (best, _) = distance_to_fiber(mu, 0.0, p, None)?;
    let mut margin = f64::INFINITY;
    for c in candidates {
        if c.atoms().iter().any(|(x, _)| x.as_pair().map(|(_, h)| h) != Some(&Point::Scalar(0.0))) {
            return Err(Error::Precondition("candidate is not supported on the zero fiber".into()));
        }
        margin = margin.min(solve_wp(mu, c, p)?.0 - best);
    }
    Ok(margin)
}

/// Outcome of the branching construction over a base measure `mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderBranching {
    /// `D = diam(supp mu)`.
    pub diameter: f64,
    /// Ball radius, `D / 4`.
    pub radius: f64,
    /// Atoms of `mu` in `B_x`, `B_y` and the rest `C`, with
    /// `mu(B_x) <= mu(B_y)`.
    pub ball_x: Vec<usize>,
    pub ball_y: Vec<usize>,
    pub rest: Vec<usize>,
    /// `T_{2D} mu|B_x + T_{4D} mu|C + mu|B_y`.
    pub nu0: AtomicMeasure,
    /// `mu|B_x + T_{4D} mu|C + T_{2D} mu|B_y`.
    pub nu1: AtomicMeasure,
    pub plan: TransportPlan,
    /// Cost of moving `B_x` and `B_y` straight along their fibers.
    pub vertical_cost: f64,
    /// Plan mass sent from `T_{2D}(B_x)` to `T_{2D}(B_y)`.
    pub crossing_mass: f64,
    pub cyclically_monotone: bool,
    pub midpoint: AtomicMeasure,
    pub midpoint_verified: bool,
    pub midpoint_base: AtomicMeasure,
    /// Total variation between the base of the midpoint and `mu`.
    pub base_shift: f64,
}

impl CylinderBranching {
    /// The midpoint left `I(mu)`.
    pub fn leaves_fiber_class(&self) -> bool {
        self.base_shift > COORD_TOL
    }
}

/// Builds `nu0, nu1` in `I(mu)` on `base x_q [0, inf)`, solves the transport
/// problem between them and checks whether the displacement midpoint still
/// projects to `mu`.
pub fn cylinder_branching_experiment(mu: &AtomicMeasure, q: f64, p: f64) -> Result<CylinderBranching> {
    if mu.is_dirac() {
        return Err(Error::Precondition("the base measure must not be a Dirac mass".into()));
    }
    let base = mu.space();
    let n = mu.len();
    let mut far = (0.0, 0, 0);
    for i in 0..n {
        for j in i + 1..n {
            let d = distance(base, mu.point(i), mu.point(j))?;
            if d > far.0 {
                far = (d, i, j);
            }
        }
    }
    let (d, x, y) = far;
    let radius = d / 4.0;
    let ball = |c: usize| -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for k in 0..n {
            if distance(base, mu.point(c), mu.point(k))? < radius {
                out.push(k);
            }
        }
        Ok(out)
    };
    let mass = |idx: &[usize]| idx.iter().map(|&k| mu.weight(k)).sum::<f64>();
    let (mut bx, mut by) = (ball(x)?, ball(y)?);
    if mass(&bx) > mass(&by) {
        core::mem::swap(&mut bx, &mut by);
    }
    separated(base, mu, &bx, &by)?;
    separated(base, mu, &by, &bx)?;
    let rest: Vec<usize> = (0..n).filter(|k| !bx.contains(k) && !by.contains(k)).collect();

    let cylinder = Arc::new(Space::half_cylinder(base.clone(), q)?);
    let height = |k: usize, lifted: &[usize]| {
        if rest.contains(&k) {
            4.0 * d
        } else if lifted.contains(&k) {
            2.0 * d
        } else {
            0.0
        }
    };
    let build = |lifted: &[usize]| {
        let atoms = (0..n).map(|k| (Point::pair(mu.point(k).clone(), Point::Scalar(height(k, lifted))), mu.weight(k))).collect();
        AtomicMeasure::new(cylinder.clone(), atoms)
    };
    let nu0 = build(&bx)?;
    let nu1 = build(&by)?;

    let (_, plan) = solve_wp(&nu0, &nu1, p)?;
    let cyclically_monotone = is_cyclically_monotone(&plan, 5)?.is_none();
    let vertical_cost = (mass(&bx) + mass(&by)) * math::abs_pow(2.0 * d, p);
    let lifted_in = |m: &AtomicMeasure, k: usize, ball: &[usize]| {
        let (x, h) = m.point(k).as_pair().expect("cylinder point");
        *h == Point::Scalar(2.0 * d) && ball.iter().any(|&b| mu.point(b) == x)
    };
    let crossing_mass = plan
        .entries()
        .iter()
        .filter(|&&(i, j, _)| lifted_in(&nu0, i, &bx) && lifted_in(&nu1, j, &by))
        .map(|e| e.2)
        .sum();
    let midpoint = displacement_interpolate(&plan, 0.5)?;
    let midpoint_verified = verify_midpoint(&nu0, &nu1, &midpoint, p)?;
    let midpoint_base = base_projection(&midpoint)?;
    let base_shift = midpoint_base.total_variation(mu);
    Ok(CylinderBranching {
        diameter: d,
        radius,
        ball_x: bx,
        ball_y: by,
        rest,
        nu0,
        nu1,
        plan,
        vertical_cost,
        crossing_mass,
        cyclically_monotone,
        midpoint,
        midpoint_verified,
        midpoint_base,
        base_shift,
    })
}

/// No support point of `other` lies between two support points of `ball`.
fn separated(base: &Space, mu: &AtomicMeasure, ball: &[usize], other: &[usize]) -> Result<()> {
    for &a in ball {
        for &b in ball {
            for &c in other {
                let (pa, pb, pc) = (mu.point(a), mu.point(b), mu.point(c));
                let detour = distance(base, pa, pc)? + distance(base, pc, pb)? - distance(base, pa, pb)?;
                if detour <= BETWEENNESS_SLACK {
                    return Err(Error::Precondition(format!("atom {c} lies between atoms {a} and {b} of the other ball")));
                }
            }
        }
    }
    Ok(())
}
