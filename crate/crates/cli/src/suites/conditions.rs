use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use anyhow::Result;
use wasserlab_core::rigidity::meridian_separates;
use wasserlab_core::spaces::{condition_a_check, condition_b_check};
use wasserlab_core::{AtomicMeasure, Error, FiniteMetric, Point, Space};

use super::Ctx;
use crate::report::Assertion;

fn label(p: Option<Point>) -> String {
    match p {
        Some(Point::Index(i)) => i.to_string(),
        Some(other) => format!("{other:?}"),
        None => "none".into(),
    }
}

pub fn conditions(ctx: &mut Ctx) -> Result<()> {
    // Condition A, read as metric betweenness: y is in J(x_o) when x_o lies
    // strictly inside a geodesic from y to some third point.
    let path = Space::finite(FiniteMetric::line(&[0.0, 0.5, 1.0])?);
    let a = condition_a_check(&path, &[Point::Index(0)])?;
    ctx.push(Assertion::equal("a-path-one-end", "path 0 - 0.5 - 1, target 0", "1", label(a)));
    let a = condition_a_check(&path, &[Point::Index(0), Point::Index(2)])?;
    ctx.push(Assertion::equal("a-path-both-ends", "path 0 - 0.5 - 1, targets 0 and 1: the middle is between both", "1", label(a)));
    let cycle = Space::finite(FiniteMetric::graph(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])?);
    let a = condition_a_check(&cycle, &[Point::Index(0)])?;
    ctx.push(Assertion::equal("a-four-cycle", "unit 4-cycle, target 0: a neighbour lies inside 0 - 1 - 2", "1", label(a)));
    let segment = Space::finite(FiniteMetric::line(&[0.0, 1.0])?);
    let a = condition_a_check(&segment, &[Point::Index(0)])?;
    ctx.push(Assertion::equal("a-two-points", "two points have no interior", "none", label(a)));

    // Condition B.
    let pair = Space::finite(FiniteMetric::line(&[0.0, 0.3])?);
    let xs = [Point::Index(0), Point::Index(1)];
    let ts = [0.5, 1.0];
    let b = condition_b_check(&pair, &xs, &ts)?;
    ctx.push(Assertion::equal("b-example", "d = 0.3, t in {0.5, 1.0}: the first point qualifies", "0", label(b)));
    let mut values: Vec<f64> = ts.iter().flat_map(|t: &f64| [0.0f64, 0.3].map(|d| t.tan() * d.cos())).collect();
    values.sort_by(f64::total_cmp);
    let gap = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    ctx.push(Assertion::above("b-example-separation", "smallest gap between the four products tan t cos d", 1e-12, gap));
    let b = condition_b_check(&pair, &xs[..1], &ts[..1])?;
    ctx.push(Assertion::equal("b-single", "one point and one angle: any x_o", "0", label(b)));
    let dup = matches!(condition_b_check(&pair, &[Point::Index(1), Point::Index(1)], &ts), Err(Error::Precondition(_)));
    ctx.push(Assertion::equal("b-duplicate-points", "repeated points are a precondition error", true, dup));
    let equator = matches!(condition_b_check(&pair, &xs, &[0.5, FRAC_PI_2]), Err(Error::Precondition(_)));
    ctx.push(Assertion::equal("b-equator-angle", "t = pi/2 is a precondition error", true, equator));

    // Separation: projecting onto the meridian through x_o keeps measures on
    // the grid {x_m} x {t_j} apart.
    let base = FiniteMetric::line(&[0.0, 0.25, 0.6, 1.0])?;
    let space = Arc::new(Space::suspension(Space::finite(base.clone()), true)?);
    let xs = [Point::Index(1), Point::Index(2), Point::Index(3)];
    let ts = [0.4, 0.9, 1.3];
    let Some(x_o) = condition_b_check(&Space::finite(base), &xs, &ts)? else {
        ctx.push(Assertion::equal("separation-base", "Condition B holds on the separation grid", true, false));
        return Ok(());
    };
    let grid: Vec<Point> = xs.iter().flat_map(|x| ts.iter().map(|&t| Point::susp(x.clone(), t).expect("angle in range"))).collect();
    let mut merged = 0;
    for _ in 0..20 {
        let a = AtomicMeasure::from_unnormalized(space.clone(), grid.iter().map(|g| (g.clone(), ctx.uniform(0.0, 1.0))).collect())?;
        let b = AtomicMeasure::from_unnormalized(space.clone(), grid.iter().map(|g| (g.clone(), ctx.uniform(0.0, 1.0))).collect())?;
        merged += usize::from(!meridian_separates(&a, &b, &x_o)?);
    }
    ctx.push(Assertion::equal("separation", "random grid measure pairs merged by the projection", 0usize, merged));
    Ok(())
}
