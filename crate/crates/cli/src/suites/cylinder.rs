use std::sync::Arc;

use anyhow::Result;
use wasserlab_core::rigidity::{cylinder_branching_experiment, cylinder_i_membership, fiber_argmin_margin};
use wasserlab_core::{distance, AtomicMeasure, Point, Space};

use super::Ctx;
use crate::report::Assertion;

pub fn cylinder_branching(ctx: &mut Ctx) -> Result<()> {
    let p = ctx.p_or(2.0);
    let q = ctx.opts.q.unwrap_or(2.0);
    let base = Space::interval(0.0, 1.0)?;
    let mu = AtomicMeasure::new(base.clone(), vec![(Point::Scalar(0.0), 0.5), (Point::Scalar(1.0), 0.5)])?;
    let r = cylinder_branching_experiment(&mu, q, p)?;
    ctx.check_plan(&r.plan)?;

    // nu0 = (d_(0,2) + d_(1,0))/2 and nu1 = (d_(0,0) + d_(1,2))/2; enumerate
    // the two vertex couplings directly.
    let cyl = Space::half_cylinder(base.clone(), q)?;
    let pt = |x: f64, h: f64| Point::pair(Point::Scalar(x), Point::Scalar(h));
    let c = |a: &Point, b: &Point| distance(&cyl, a, b).map(|d| d.powf(p));
    let vertical = 0.5 * c(&pt(0.0, 2.0), &pt(0.0, 0.0))? + 0.5 * c(&pt(1.0, 0.0), &pt(1.0, 2.0))?;
    let crossing = 0.5 * c(&pt(0.0, 2.0), &pt(1.0, 2.0))? + 0.5 * c(&pt(1.0, 0.0), &pt(0.0, 0.0))?;
    let nu0 = AtomicMeasure::new(cyl.clone(), vec![(pt(0.0, 2.0), 0.5), (pt(1.0, 0.0), 0.5)])?;
    let nu1 = AtomicMeasure::new(cyl.clone(), vec![(pt(0.0, 0.0), 0.5), (pt(1.0, 2.0), 0.5)])?;
    ctx.push(Assertion::equal("endpoints", "nu0 and nu1 match the hand-built measures", true, r.nu0.approx_eq(&nu0, 1e-12) && r.nu1.approx_eq(&nu1, 1e-12)));
    ctx.push(Assertion::close("crossing-cost", "optimal cost equals the crossing coupling", crossing.min(vertical), r.plan.cost(), 1e-12));
    ctx.push(Assertion::close("vertical-cost", "cost of the vertical coupling, 2^p", vertical, r.vertical_cost, 1e-12));
    ctx.push(Assertion::above("crossing-strictly-better", "vertical minus optimal cost", 0.0, r.vertical_cost - r.plan.cost()));
    ctx.push(Assertion::close("crossing-mass", "mass sent across between the lifted balls", 0.5, r.crossing_mass, 1e-12));
    ctx.push(Assertion::equal("plan-monotone", "the optimal plan passes the cycle check", true, r.cyclically_monotone));
    ctx.push(Assertion::equal("midpoint-verified", "the displacement midpoint is a midpoint", true, r.midpoint_verified));
    let half = AtomicMeasure::dirac(base, Point::Scalar(0.5))?;
    ctx.push(Assertion::equal("midpoint-base", "all base mass of the midpoint sits over 1/2", true, r.midpoint_base.approx_eq(&half, 1e-12)));
    ctx.push(Assertion::close("base-shift", "total variation between the midpoint base and mu", 1.0, r.base_shift, 1e-12));
    ctx.push(Assertion::above("shift-vs-crossing", "total variation minus crossing mass", -1e-12, r.base_shift - r.crossing_mass));
    ctx.push(Assertion::equal("leaves-fiber-class", "the geodesic leaves I(mu)", true, r.leaves_fiber_class()));
    let inside = cylinder_i_membership(&r.nu0, &mu)? && cylinder_i_membership(&r.nu1, &mu)?;
    ctx.push(Assertion::equal("endpoints-in-class", "nu0 and nu1 both project to mu", true, inside));

    // The base projection is the closest measure on the zero fiber.
    let cyl = Arc::new(cyl);
    let mut candidates = Vec::new();
    for _ in 0..50 {
        let n = 1 + ctx.index(4);
        candidates.push(ctx.measure(&cyl, n, |c| pt(c.uniform(0.0, 1.0), 0.0))?);
    }
    for (id, m) in [("nu0", &r.nu0), ("nu1", &r.nu1)] {
        let margin = fiber_argmin_margin(m, &candidates, p)?;
        ctx.push(Assertion::above(&format!("{id}-fiber-argmin"), "smallest margin of random zero-fiber measures over the projection", -1e-12, margin));
    }
    let dirac = AtomicMeasure::dirac(Space::interval(0.0, 1.0)?, Point::Scalar(0.3))?;
    ctx.push(Assertion::equal("dirac-refused", "a Dirac base measure is refused", true, cylinder_branching_experiment(&dirac, q, p).is_err()));
    Ok(())
}
