use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

use anyhow::Result;
use wasserlab_core::interpolation::verify_midpoint;
use wasserlab_core::rigidity::{meridian_projection_pushforward, pole_mixture, suspension_two_midpoints};
use wasserlab_core::spaces::meridian_projection as project;
use wasserlab_core::transport::distance_to_fiber;
use wasserlab_core::{distance, AtomicMeasure, Error, FiniteMetric, Point, Space};

use super::Ctx;
use crate::report::Assertion;

const BASE_GRID: usize = 20;
const WEIGHT_STEPS: usize = 20;

fn susp(coords: &[f64]) -> Result<Arc<Space>> {
    Ok(Arc::new(Space::suspension(Space::finite(FiniteMetric::line(coords)?), true)?))
}

fn at(i: usize, t: f64) -> Point {
    Point::susp(Point::Index(i), t).expect("angle in range")
}

/// Poles plus `[x, k pi/8]`, `0 < k < 8`, for every base point.
fn fiber_grid(base_points: usize) -> Vec<Point> {
    let mut pts = vec![Point::pole_zero(), Point::pole_pi()];
    for i in 0..base_points {
        pts.extend((1..8).map(|k| at(i, k as f64 * PI / 8.0)));
    }
    pts
}

pub fn diameter(ctx: &mut Ctx) -> Result<()> {
    let coords: Vec<f64> = (0..BASE_GRID).map(|i| i as f64 * 0.075).collect();
    let space = susp(&coords)?;
    let o = AtomicMeasure::dirac(space.clone(), Point::pole_zero())?;
    let pi = AtomicMeasure::dirac(space.clone(), Point::pole_pi())?;
    for p in [1.0, 2.0, 3.0] {
        let w = ctx.solve(&o, &pi, p)?.0;
        ctx.push(Assertion::equal(&format!("poles-p{p}"), format!("W_{p}(d_0, d_pi) is exactly pi"), PI, w));
    }
    let grid = fiber_grid(BASE_GRID);
    let p = ctx.p_or(2.0);
    let (mut others, mut closest): (usize, f64) = (0, 0.0);
    for (k, a) in grid.iter().enumerate() {
        let da = AtomicMeasure::dirac(space.clone(), a.clone())?;
        for b in &grid[k + 1..] {
            let w = ctx.solve(&da, &AtomicMeasure::dirac(space.clone(), b.clone())?, p)?.0;
            if a.is_pole() && b.is_pole() {
                continue;
            }
            closest = closest.max(w);
            others += usize::from(w >= PI - 1e-9);
        }
    }
    ctx.push(Assertion::equal(
        "grid-scan",
        format!("Dirac pairs other than the poles at distance >= pi - 1e-9 among {} grid points", grid.len()),
        0usize,
        others,
    ));
    ctx.push(Assertion::observed("grid-scan-largest", "largest distance among the other pairs", closest));

    // Pole mixtures are equidistant from every measure on a fiber.
    let (lambda, t) = (0.3, PI / 3.0);
    let mix = pole_mixture(&space, lambda)?;
    let expected = (1.0 - lambda) * t.powf(p) + lambda * (PI - t).powf(p);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = 1 + ctx.index(5);
        let nu = ctx.measure(&space, n, |c| at(c.index(BASE_GRID), t))?;
        worst = worst.max((ctx.solve(&mix, &nu, p)?.1.cost() - expected).abs());
    }
    ctx.push(Assertion::at_most("pole-mixture-fiber", "|W_p^p(pole mixture, nu) - ((1 - l) t^p + l (pi - t)^p)| over fiber measures", 1e-10, worst));
    let (w, _) = distance_to_fiber(&mix, t, p, None)?;
    ctx.push(Assertion::close("pole-mixture-distance", "distance_to_fiber of the pole mixture", expected.powf(1.0 / p), w, 1e-12));
    Ok(())
}

pub fn midpoints(ctx: &mut Ctx) -> Result<()> {
    let p = ctx.p_or(2.0);
    let coords = [0.0, 0.4, 0.9];
    let space = susp(&coords)?;
    let grid = fiber_grid(coords.len());
    let mut candidates: Vec<AtomicMeasure> = grid.iter().map(|x| AtomicMeasure::dirac(space.clone(), x.clone())).collect::<Result<_, _>>()?;
    for (i, a) in grid.iter().enumerate() {
        for b in &grid[i + 1..] {
            for k in 1..WEIGHT_STEPS {
                let w = k as f64 / WEIGHT_STEPS as f64;
                candidates.push(AtomicMeasure::new(space.clone(), vec![(a.clone(), w), (b.clone(), 1.0 - w)])?);
            }
        }
    }

    for x in 0..coords.len() {
        for lambda in [0.25, 0.5, 0.75] {
            let id = format!("dirac-x{x}-l{lambda}");
            let nu = AtomicMeasure::dirac(space.clone(), at(x, FRAC_PI_2))?;
            let Err(Error::DiracEquator { unique_midpoint }) = suspension_two_midpoints(&nu, lambda, p) else {
                ctx.push(Assertion::equal(&id, "a Dirac equator measure is refused with its midpoint", "DiracEquator", "other"));
                continue;
            };
            let target = pole_mixture(&space, lambda)?;
            let mut verified = Vec::new();
            for c in &candidates {
                if verify_midpoint(&nu, &target, c, p)? {
                    verified.push(c);
                }
            }
            ctx.push(Assertion::equal(&format!("{id}-count"), format!("verified midpoints among {} grid candidates", candidates.len()), 1usize, verified.len()));
            let matches = verified.len() == 1 && verified[0].approx_eq(&unique_midpoint, 1e-12);
            ctx.push(Assertion::equal(&format!("{id}-constructed"), "the verified candidate is the constructed midpoint", true, matches));
        }
    }

    // The canonical two-atom instance, d(x, y) = 0.4.
    let pair = susp(&[0.0, 0.4])?;
    let nu = AtomicMeasure::new(pair.clone(), vec![(at(0, FRAC_PI_2), 0.5), (at(1, FRAC_PI_2), 0.5)])?;
    let r = suspension_two_midpoints(&nu, 0.5, p)?;
    let q = 3.0 * FRAC_PI_4;
    let m1 = AtomicMeasure::new(pair.clone(), vec![(at(0, FRAC_PI_4), 0.5), (at(1, q), 0.5)])?;
    let m2 = AtomicMeasure::new(pair.clone(), vec![(at(0, FRAC_PI_4), 0.25), (at(1, FRAC_PI_4), 0.25), (at(0, q), 0.25), (at(1, q), 0.25)])?;
    ctx.push(Assertion::equal("canonical-m1", "m1 = (d_[x,pi/4] + d_[y,3pi/4])/2", true, r.m1.approx_eq(&m1, 1e-12)));
    ctx.push(Assertion::equal("canonical-m2", "m2 spreads a quarter on each of the four atoms", true, r.m2.approx_eq(&m2, 1e-12)));
    let target = pole_mixture(&pair, 0.5)?;
    for (id, m) in [("m1", &r.m1), ("m2", &r.m2)] {
        let half = ctx.solve(&nu, &target, p)?.0 / 2.0;
        let (a, b) = (ctx.solve(&nu, m, p)?.0, ctx.solve(m, &target, p)?.0);
        ctx.push(Assertion::at_most(&format!("canonical-{id}-midpoint"), "largest gap of W_p to either end from half the distance", 1e-9, (a - half).abs().max((b - half).abs())));
    }
    ctx.push(Assertion::equal("canonical-verified", "both constructions pass verify_midpoint", true, r.m1_verified && r.m2_verified));
    let sep = ctx.solve(&r.m1, &r.m2, p)?.0;
    ctx.push(Assertion::above("canonical-separation", "W_p(m1, m2)", 1e-3, r.separation));
    ctx.push(Assertion::close("canonical-separation-solver", "reported separation matches a fresh solve", sep, r.separation, 1e-12));

    // Random three-atom equator measures, split off the first atom.
    let base = [0.0, 0.3, 0.7];
    let space = susp(&base)?;
    let mut failed = 0;
    for _ in 0..10 {
        let w: Vec<f64> = (0..3).map(|_| ctx.uniform(0.1, 1.0)).collect();
        let nu = AtomicMeasure::from_unnormalized(space.clone(), (0..3).map(|i| (at(i, FRAC_PI_2), w[i])).collect())?;
        let lambda = 1.0 - nu.mass_at(&at(0, FRAC_PI_2));
        let r = suspension_two_midpoints(&nu, lambda, p)?;
        failed += usize::from(!(r.m1_verified && r.m2_verified && r.separation > 0.0));
    }
    ctx.push(Assertion::equal("random-equator", "random instances without two distinct verified midpoints", 0usize, failed));
    for lambda in [0.0, 1.0] {
        let r = suspension_two_midpoints(&nu_pair(&pair)?, lambda, p)?;
        ctx.push(Assertion::equal(&format!("degenerate-l{lambda}"), "single-sided scaling is a midpoint", true, r.m1_verified && r.m2_verified));
    }

    // Midpoints from the vertex to an equator measure are unique.
    let o = AtomicMeasure::dirac(space.clone(), Point::pole_zero())?;
    let mu = AtomicMeasure::new(space.clone(), vec![(at(0, FRAC_PI_2), 0.3), (at(2, FRAC_PI_2), 0.7)])?;
    let scaled = AtomicMeasure::new(space.clone(), vec![(at(0, FRAC_PI_4), 0.3), (at(2, FRAC_PI_4), 0.7)])?;
    let fiber: Vec<Point> = (0..base.len()).map(|i| at(i, FRAC_PI_4)).collect();
    let mut verified = Vec::new();
    for (i, a) in fiber.iter().enumerate() {
        for b in &fiber[i..] {
            for k in 1..WEIGHT_STEPS {
                let w = k as f64 / WEIGHT_STEPS as f64;
                let c = AtomicMeasure::from_unnormalized(space.clone(), vec![(a.clone(), w), (b.clone(), 1.0 - w)])?;
                if verify_midpoint(&o, &mu, &c, p)? && !verified.iter().any(|m: &AtomicMeasure| m.approx_eq(&c, 1e-12)) {
                    verified.push(c);
                }
            }
        }
    }
    let unique = verified.len() == 1 && verified[0].approx_eq(&scaled, 1e-12);
    ctx.push(Assertion::equal("vertex-midpoint-unique", "the only verified midpoint on the pi/4 fiber grid is L_1/2 of mu", true, unique));
    Ok(())
}

fn nu_pair(space: &Arc<Space>) -> Result<AtomicMeasure> {
    Ok(AtomicMeasure::new(space.clone(), vec![(at(0, FRAC_PI_2), 0.5), (at(1, FRAC_PI_2), 0.5)])?)
}

pub fn meridian_projection(ctx: &mut Ctx) -> Result<()> {
    let step = 1e-4;
    let steps = (FRAC_PI_2 / step).ceil() as usize;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = ctx.uniform(0.0, FRAC_PI_2);
        let t = ctx.uniform(0.0, FRAC_PI_2);
        let space = susp(&[0.0, d])?;
        let x = at(0, t);
        let analytic = project(&space, &Point::Index(1), &x)?.susp_angle().expect("suspension point");
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=steps {
            let s = (k as f64 * step).min(FRAC_PI_2);
            let dist = distance(&space, &x, &at(1, s))?;
            if dist < best.0 {
                best = (dist, s);
            }
        }
        worst = worst.max((analytic - best.1).abs());
    }
    ctx.push(Assertion::at_most("grid-argmin", "largest angle gap between the closed form and a 1e-4 grid argmin over 100 (d, t)", 2e-4, worst));

    let space = susp(&[0.0, PI / 3.0])?;
    let p = project(&space, &Point::Index(1), &at(0, FRAC_PI_4))?;
    ctx.push(Assertion::close("closed-form-example", "d = pi/3, t = pi/4 projects to atan(1/2)", 0.5f64.atan(), p.susp_angle().unwrap_or(f64::NAN), 1e-12));
    let p = project(&space, &Point::Index(1), &at(0, FRAC_PI_2))?;
    ctx.push(Assertion::equal("equator", "points on the equator project to [y, pi/2]", true, p == at(1, FRAC_PI_2)));

    let coords = [0.0, 0.3, 0.7];
    let space = susp(&coords)?;
    let t = 0.6;
    let two = AtomicMeasure::new(space.clone(), vec![(at(0, t), 0.5), (at(1, t), 0.5)])?;
    let image = meridian_projection_pushforward(&two, &Point::Index(1))?;
    let expected = AtomicMeasure::new(space.clone(), vec![(at(1, (0.3f64.cos() * t.tan()).atan()), 0.5), (at(1, t), 0.5)])?;
    ctx.push(Assertion::equal("pushforward-example", "(d_[x,t] + d_[y,t])/2 projects to (d_[y, atan(cos d tan t)] + d_[y,t])/2", true, image.approx_eq(&expected, 1e-12)));
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let t = ctx.uniform(0.05, FRAC_PI_2 - 0.05);
        let n = 1 + ctx.index(6);
        let mu = ctx.measure(&space, n, |c| at(c.index(coords.len()), t))?;
        let y = ctx.index(coords.len());
        let image = meridian_projection_pushforward(&mu, &Point::Index(y))?;
        worst = worst.max((image.mass_at(&at(y, t)) - mu.mass_at(&at(y, t))).abs());
    }
    ctx.push(Assertion::at_most("atom-mass-preserved", "|proj# mu({gamma_t}) - mu({gamma_t})| over random fiber measures", 1e-12, worst));
    let upper = AtomicMeasure::dirac(space, at(0, 2.0))?;
    ctx.push(Assertion::equal("upper-half-refused", "fibers above the equator are refused", true, meridian_projection_pushforward(&upper, &Point::Index(1)).is_err()));
    Ok(())
}
