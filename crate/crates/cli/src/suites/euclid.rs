use std::sync::Arc;

use anyhow::Result;
use wasserlab_core::rigidity::{
    barycenter, exotic_isometry, frechet_function, frechet_mean_set, verify_isometry, BaseMotion, IsometryCandidate, LinearIsometry,
};
use wasserlab_core::{AtomicMeasure, FiniteMetric, Point, Space};

use super::Ctx;
use crate::report::Assertion;

const PAIRS: usize = 100;

/// `Euclidean(2) x_2 Finite(3)`, the finite factor a path 0 - 1 - 2.
fn product() -> Result<Arc<Space>> {
    Ok(Arc::new(Space::qproduct(Space::euclidean(2)?, Space::finite(FiniteMetric::line(&[0.0, 1.0, 2.0])?), 2.0)?))
}

fn random_point(ctx: &mut Ctx) -> Point {
    Point::pair(Point::Vector(vec![ctx.uniform(-2.0, 2.0), ctx.uniform(-2.0, 2.0)]), Point::Index(ctx.index(3)))
}

fn random_measure(ctx: &mut Ctx, space: &Arc<Space>) -> Result<AtomicMeasure> {
    let n = 1 + ctx.index(5);
    ctx.measure(space, n, random_point)
}

/// A rotation or a reflection by a random angle.
fn random_orthogonal(ctx: &mut Ctx) -> Result<LinearIsometry> {
    let theta = ctx.uniform(0.0, std::f64::consts::TAU);
    let (s, c) = theta.sin_cos();
    let m = if ctx.index(2) == 0 { vec![c, -s, s, c] } else { vec![c, s, s, -c] };
    Ok(LinearIsometry::new(2, m)?)
}

fn vector(p: &Point) -> &[f64] {
    match p.as_pair().map(|(h, _)| h) {
        Some(Point::Vector(v)) => v,
        _ => unreachable!("product points carry a vector"),
    }
}

pub fn exotic(ctx: &mut Ctx) -> Result<()> {
    let space = product()?;
    let psi = random_orthogonal(ctx)?;
    let mut pairs = Vec::with_capacity(PAIRS);
    for _ in 0..PAIRS {
        pairs.push((random_measure(ctx, &space)?, random_measure(ctx, &space)?));
    }
    let mut distortion: f64 = 0.0;
    for (mu, nu) in &pairs {
        let before = ctx.solve(mu, nu, 2.0)?.0;
        let after = ctx.solve(&exotic_isometry(&psi, mu)?, &exotic_isometry(&psi, nu)?, 2.0)?.0;
        distortion = distortion.max((after - before).abs());
    }
    ctx.push(Assertion::at_most("w2-distortion", format!("largest |W_2(Psi mu, Psi nu) - W_2(mu, nu)| over {PAIRS} pairs"), 1e-9, distortion));
    let library = verify_isometry(&IsometryCandidate::Exotic(psi.clone()), &pairs, 2.0)?;
    ctx.push(Assertion::close("w2-distortion-library", "verify_isometry agrees with the direct computation", distortion, library, 1e-12));

    let mut moved = 0;
    for _ in 0..PAIRS {
        let d = AtomicMeasure::dirac(space.clone(), random_point(ctx))?;
        moved += usize::from(exotic_isometry(&psi, &d)? != d);
    }
    ctx.push(Assertion::equal("diracs-fixed", format!("Diracs moved by Psi among {PAIRS} random ones"), 0usize, moved));

    // (1/3) d_(0, y) + (2/3) d_(v, y) has barycenter (2/3) v, so its atom at
    // the origin lands on (2/3) v - (2/3) psi(v).
    for (id, psi, v, y) in [
        ("quarter-turn", LinearIsometry::rotation(std::f64::consts::FRAC_PI_2), vec![1.0, 0.0], 0),
        ("random", psi.clone(), vec![ctx.uniform(0.5, 2.0), ctx.uniform(-2.0, 2.0)], ctx.index(3)),
    ] {
        let mu = AtomicMeasure::new(
            space.clone(),
            vec![
                (Point::pair(Point::Vector(vec![0.0, 0.0]), Point::Index(y)), 1.0 / 3.0),
                (Point::pair(Point::Vector(v.clone()), Point::Index(y)), 2.0 / 3.0),
            ],
        )?;
        let image = exotic_isometry(&psi, &mu)?;
        let pv = psi.apply(&v);
        let target = [2.0 / 3.0 * (v[0] - pv[0]), 2.0 / 3.0 * (v[1] - pv[1])];
        let (k, offset) = (0..image.len())
            .map(|k| {
                let h = vector(image.point(k));
                (k, (h[0] - target[0]).hypot(h[1] - target[1]))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("images are non-empty");
        ctx.push(Assertion::at_most(&format!("witness-{id}-location"), "image atom at (2/3) v - (2/3) psi(v)", 1e-12, offset));
        ctx.push(Assertion::close(&format!("witness-{id}-mass"), "mass of that image atom", 1.0 / 3.0, image.weight(k), 1e-12));
        let same_support = image.atoms().iter().all(|(x, _)| mu.atoms().iter().any(|(z, _)| x.approx_eq(z, 1e-9)));
        ctx.push(Assertion::equal(&format!("witness-{id}-moves"), "the image support differs from the support", false, same_support));
    }

    let mut p4: f64 = 0.0;
    for (mu, nu) in &pairs {
        let before = ctx.solve(mu, nu, 4.0)?.0;
        let after = ctx.solve(&exotic_isometry(&psi, mu)?, &exotic_isometry(&psi, nu)?, 4.0)?.0;
        p4 = p4.max((after - before).abs());
    }
    ctx.push(Assertion::observed("w4-distortion", "largest W_4 distortion of Psi on the same pairs", p4));

    let motion = BaseMotion { linear: psi, shift: vec![ctx.uniform(-1.0, 1.0), ctx.uniform(-1.0, 1.0)], permutation: vec![2, 1, 0] };
    for p in [1.0, 3.0] {
        let d = verify_isometry(&IsometryCandidate::PushForward(motion.clone()), &pairs[..30], p)?;
        ctx.push(Assertion::at_most(&format!("base-motion-p{p}"), format!("W_{p} distortion of a push-forward by a base isometry"), 1e-9, d));
    }
    Ok(())
}

pub fn frechet(ctx: &mut Ctx) -> Result<()> {
    let plane = Arc::new(Space::euclidean(2)?);
    let v = |x: f64, y: f64| Point::Vector(vec![x, y]);
    let witness = AtomicMeasure::new(plane.clone(), vec![(v(0.0, 0.0), 1.0 / 3.0), (v(1.0, 0.0), 2.0 / 3.0)])?;
    ctx.push(Assertion::equal("witness-barycenter", "barycenter of (1/3) d_0 + (2/3) d_v", true, barycenter(&witness)?.approx_eq(&v(2.0 / 3.0, 0.0), 1e-15)));
    let square = AtomicMeasure::new(plane.clone(), [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)].iter().map(|&(x, y)| (v(x, y), 0.25)).collect())?;
    ctx.push(Assertion::equal("square-barycenter", "barycenter of the uniform square", true, v(1.0, 1.0) == barycenter(&square)?));
    let pair = Arc::new(Space::finite(FiniteMetric::line(&[0.0, 1.0])?));
    let uniform = AtomicMeasure::new(pair, vec![(Point::Index(0), 0.5), (Point::Index(1), 0.5)])?;
    let both = frechet_mean_set(&uniform, &[Point::Index(0), Point::Index(1)])?.len();
    ctx.push(Assertion::equal("two-point-means", "uniform measure on two points: both are means", 2usize, both));

    let space = product()?;
    let (mut split_gap, mut off_slice, mut grid_better): (f64, usize, usize) = (0.0, 0, 0);
    for _ in 0..50 {
        let mu = random_measure(ctx, &space)?;
        let (mh, my) = mu.marginals()?;
        let (h, y) = (Point::Vector(vec![ctx.uniform(-2.0, 2.0), ctx.uniform(-2.0, 2.0)]), Point::Index(ctx.index(3)));
        let whole = frechet_function(&mu, &Point::pair(h.clone(), y.clone()))?;
        split_gap = split_gap.max((whole - frechet_function(&mh, &h)? - frechet_function(&my, &y)?).abs());

        let b = barycenter(&mh)?;
        let bv = match &b {
            Point::Vector(c) => c.clone(),
            _ => unreachable!(),
        };
        let fb = frechet_function(&mh, &b)?;
        let mut candidates = Vec::new();
        for i in -5..=5 {
            for j in -5..=5 {
                let g = Point::Vector(vec![bv[0] + 0.01 * f64::from(i), bv[1] + 0.01 * f64::from(j)]);
                grid_better += usize::from(frechet_function(&mh, &g)? < fb);
                candidates.extend((0..3).map(|k| Point::pair(g.clone(), Point::Index(k))));
            }
        }
        off_slice += frechet_mean_set(&mu, &candidates)?.iter().filter(|m| m.as_pair().map(|(h, _)| h) != Some(&b)).count();
    }
    ctx.push(Assertion::at_most("additivity", "largest |F_mu(h, y) - F_mu_H(h) - F_mu_Y(y)| over 50 product measures", 1e-12, split_gap));
    ctx.push(Assertion::equal("argmin-on-slice", "grid minimisers of F_mu off the barycenter slice", 0usize, off_slice));
    ctx.push(Assertion::equal("barycenter-minimal", "grid points strictly better than the barycenter", 0usize, grid_better));
    Ok(())
}
