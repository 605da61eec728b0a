use std::f64::consts::PI;
use std::sync::Arc;

use anyhow::Result;
use wasserlab_core::transport::{is_cyclically_monotone, monotone_plan};
use wasserlab_core::{wp_1d, AtomicMeasure, FiniteMetric, Point, Space, TransportPlan};

use super::Ctx;
use crate::report::Assertion;

const PAIRS: usize = 200;
const MAX_ATOMS: usize = 40;

/// Half the atoms sit on the integers 0..=10 so that supports overlap.
fn ray_measure(ctx: &mut Ctx) -> Result<AtomicMeasure> {
    let n = 1 + ctx.index(MAX_ATOMS);
    ctx.measure(&Arc::new(Space::Ray), n, |c| {
        let x = if c.index(2) == 0 { c.index(11) as f64 } else { c.uniform(0.0, 10.0) };
        Point::Scalar(x)
    })
}

fn ray(atoms: &[(f64, f64)]) -> Result<AtomicMeasure> {
    Ok(AtomicMeasure::new(Space::Ray, atoms.iter().map(|&(x, w)| (Point::Scalar(x), w)).collect())?)
}

pub fn oracle(ctx: &mut Ctx) -> Result<()> {
    let ps = [1.0, 1.5, 2.0, 3.0];
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for k in 0..PAIRS {
        let p = ps[k % ps.len()];
        let (mu, nu) = (ray_measure(ctx)?, ray_measure(ctx)?);
        let (w, _) = ctx.solve(&mu, &nu, p)?;
        let exact = wp_1d(&mu, &nu, p)?;
        let err = if exact > 0.0 { (w - exact).abs() / exact } else { w };
        worst = worst.max(err);
        failures += usize::from(err > 1e-9);
    }
    ctx.push(Assertion::at_most(
        "solver-vs-quantile",
        format!("largest relative gap between the simplex and the quantile formula over {PAIRS} ray pairs"),
        1e-9,
        worst,
    ));
    ctx.push(Assertion::equal("solver-vs-quantile-failures", "pairs with relative gap above 1e-9", 0usize, failures));

    let half = ray(&[(0.0, 0.5), (1.0, 0.5)])?;
    let centre = ray(&[(0.5, 1.0)])?;
    let w = ctx.solve(&half, &centre, 2.0)?.0;
    ctx.push(Assertion::close("two-to-one", "W_2((d_0 + d_1)/2, d_1/2)", 0.5, w, 1e-12));
    let mu2 = ray(&[(0.0, 0.75), (2.0, 0.25)])?;
    let mu4 = ray(&[(0.0, 15.0 / 16.0), (4.0, 1.0 / 16.0)])?;
    let w = ctx.solve(&mu2, &mu4, 2.0)?.0;
    ctx.push(Assertion::close("mu2-mu4", "W_2(mu_2, mu_4) on the unit sphere of the ray family", 1.0, w, 1e-12));
    let w = ctx.solve(&ray(&[(1.0, 1.0)])?, &mu2, 2.0)?.0;
    ctx.push(Assertion::close("mu2-dirac1", "W_2(d_1, mu_2)", 1.0, w, 1e-12));
    let w = ctx.solve(&mu4, &mu4, 3.0)?.0;
    ctx.push(Assertion::equal("self-distance", "W_3(mu, mu)", 0.0, w));

    let susp = Arc::new(Space::suspension(Space::finite(FiniteMetric::line(&[0.0, 0.5])?), true)?);
    let o = AtomicMeasure::dirac(susp.clone(), Point::pole_zero())?;
    let pi = AtomicMeasure::dirac(susp, Point::pole_pi())?;
    for p in [1.0, 2.0, 3.5] {
        let w = ctx.solve(&o, &pi, p)?.0;
        ctx.push(Assertion::equal(&format!("poles-p{p}"), format!("W_{p} between the two poles"), PI, w));
    }
    Ok(())
}

pub fn monotonicity(ctx: &mut Ctx) -> Result<()> {
    // Both halves stay put under the optimal plan; the crossed plan swaps them.
    let mu = ray(&[(0.0, 0.5), (1.0, 0.5)])?;
    let crossed = TransportPlan::from_entries(mu.clone(), mu.clone(), vec![(0, 1, 0.5), (1, 0, 0.5)], 2.0)?;
    let cycle = is_cyclically_monotone(&crossed, 2)?;
    ctx.push(Assertion::equal("crossed-plan-rejected", "the crossed plan on the ray is not cyclically monotone", true, cycle.is_some()));
    if let Some(c) = cycle {
        ctx.push(Assertion::equal("crossed-cycle-length", "reported violating cycle length", 2usize, c.entries.len()));
        // Over support pairs, unweighted: c(0, 1) + c(1, 0) - c(0, 0) - c(1, 1).
        ctx.push(Assertion::close("crossed-cycle-gain", "cost decrease of the reported cycle", 2.0, c.gain, 1e-12));
    }
    let single = TransportPlan::from_entries(ray(&[(0.0, 1.0)])?, ray(&[(3.0, 1.0)])?, vec![(0, 0, 1.0)], 2.0)?;
    ctx.push(Assertion::equal("single-entry", "a one-entry plan is cyclically monotone", true, is_cyclically_monotone(&single, 5)?.is_none()));

    let mut monotone_failures = 0;
    for k in 0..30 {
        let (a, b) = (ray_measure(ctx)?, ray_measure(ctx)?);
        let plan = monotone_plan(&a, &b, [1.0, 2.0, 3.0][k % 3])?;
        monotone_failures += usize::from(is_cyclically_monotone(&plan, 5)?.is_some());
    }
    ctx.push(Assertion::equal("monotone-plans", "monotone couplings of random ray pairs pass the 5-cycle check", 0usize, monotone_failures));

    // Optimal plans on the other space kinds, tallied by the context.
    let plane = Arc::new(Space::euclidean(2)?);
    let graph = Arc::new(Space::finite(FiniteMetric::graph(6, &[(0, 1, 1.0), (1, 2, 0.7), (2, 3, 1.3), (3, 4, 0.5), (4, 0, 2.0), (5, 2, 0.4)])?));
    let susp = Arc::new(Space::suspension(Space::finite(FiniteMetric::line(&[0.0, 0.3, 0.5, 1.2])?), false)?);
    let prod = Arc::new(Space::qproduct(Space::euclidean(1)?, Space::finite(FiniteMetric::line(&[0.0, 1.0, 2.5])?), 3.0)?);
    for k in 0..25 {
        let p = [1.0, 1.5, 2.0, 3.0][k % 4];
        let n = 2 + k % 7;
        let a = ctx.measure(&plane, n, |c| Point::Vector(vec![c.uniform(-2.0, 2.0), c.uniform(-2.0, 2.0)]))?;
        let b = ctx.measure(&plane, n + 1, |c| Point::Vector(vec![c.uniform(-2.0, 2.0), c.uniform(-2.0, 2.0)]))?;
        ctx.solve(&a, &b, p)?;
        let a = ctx.measure(&graph, n, |c| Point::Index(c.index(6)))?;
        let b = ctx.measure(&graph, n, |c| Point::Index(c.index(6)))?;
        ctx.solve(&a, &b, p)?;
        let a = ctx.measure(&susp, n, |c| Point::susp(Point::Index(c.index(4)), c.uniform(0.0, PI)).unwrap())?;
        let b = ctx.measure(&susp, n, |c| Point::susp(Point::Index(c.index(4)), c.uniform(0.0, PI)).unwrap())?;
        ctx.solve(&a, &b, p)?;
        let a = ctx.measure(&prod, n, |c| Point::pair(Point::Vector(vec![c.uniform(0.0, 3.0)]), Point::Index(c.index(3))))?;
        let b = ctx.measure(&prod, n, |c| Point::pair(Point::Vector(vec![c.uniform(0.0, 3.0)]), Point::Index(c.index(3))))?;
        ctx.solve(&a, &b, p)?;
    }
    Ok(())
}
