use std::f64::consts::LN_2;

use anyhow::Result;
use wasserlab_core::interpolation::{in_sigma, midpoint_diameter_1d, sigma_ray_witness, sigma_witness_level};
use wasserlab_core::rigidity::{compare_delta2, delta2_distance_squared, sigma_distance, sigma_w1_claim_witness, Delta2Chart, SigmaMeasure};
use wasserlab_core::transport::adjacency_test;
use wasserlab_core::{wp_1d, AtomicMeasure, Error, Point, Space};

use super::Ctx;
use crate::report::Assertion;

const RAY_POINTS: [f64; 4] = [1.5, 2.0, 3.0, 5.0];
const DIAMETER_SAMPLES: usize = 16;

fn ray(atoms: &[(f64, f64)]) -> Result<AtomicMeasure> {
    Ok(AtomicMeasure::new(Space::Ray, atoms.iter().map(|&(x, w)| (Point::Scalar(x), w)).collect())?)
}

/// `mu_x = (1 - x^-p) d_0 + x^-p d_x`, built directly.
fn unit_member(x: f64, p: f64) -> Result<AtomicMeasure> {
    let l = x.powf(-p);
    ray(&[(0.0, 1.0 - l), (x, l)])
}

pub fn ray_formulas(ctx: &mut Ctx) -> Result<()> {
    let dirac1 = ray(&[(1.0, 1.0)])?;
    for p in [1.0, 2.0, 3.0] {
        for x in RAY_POINTS {
            let mx = unit_member(x, p)?;
            let unit = SigmaMeasure::unit(x, p)?;
            ctx.push(Assertion::equal(&format!("unit-lambda-x{x}-p{p}"), "unit-sphere member weight is x^-p", x.powf(-p), unit.lambda));
            let (_, plan) = ctx.solve(&dirac1, &mx, p)?;
            let expected = (1.0 - x.powf(-p)) + (1.0 - 1.0 / x).powf(p);
            ctx.push(Assertion::close(
                &format!("dirac1-mu{x}-p{p}"),
                format!("W_{p}^{p}(d_1, mu_{x}) against (1 - x^-p) + (1 - 1/x)^p"),
                expected,
                plan.cost(),
                1e-10,
            ));
            for y in RAY_POINTS.into_iter().filter(|&y| y >= x) {
                let my = unit_member(y, p)?;
                let (_, plan) = ctx.solve(&mx, &my, p)?;
                let expected = (1.0 - (x / y).powf(p)) + (1.0 - x / y).powf(p);
                ctx.push(Assertion::close(
                    &format!("mu{x}-mu{y}-p{p}"),
                    format!("W_{p}^{p}(mu_{x}, mu_{y}) against (1 - x^p/y^p) + (1 - x/y)^p"),
                    expected,
                    plan.cost(),
                    1e-10,
                ));
                ctx.push(Assertion::close(
                    &format!("closed-form-mu{x}-mu{y}-p{p}"),
                    "library closed form agrees with the direct expression",
                    expected.powf(1.0 / p),
                    sigma_distance(x, y, p)?,
                    1e-12,
                ));
            }
            let to_dirac = ctx.solve(&mx, &dirac1, p)?.0;
            let to_square = ctx.solve(&mx, &unit_member(x * x, p)?, p)?.0;
            ctx.push(Assertion::close(
                &format!("equidistant-x{x}-p{p}"),
                format!("W_{p}(mu_{x}, d_1) equals W_{p}(mu_{x}, mu_{{x^2}})"),
                to_dirac,
                to_square,
                1e-10,
            ));
        }
    }

    // A ray through a measure with two positive atoms.
    let mu = ray(&[(1.0, 0.5), (2.0, 0.5)])?;
    let path = sigma_ray_witness(&mu, sigma_witness_level(&mu)?)?;
    let start = path.eval(0.0)?;
    ctx.push(Assertion::equal("witness-start", "the ray starts at d_1, away from d_0", true, start.approx_eq(&ray(&[(1.0, 1.0)])?, 1e-12)));
    ctx.push(Assertion::equal("witness-through-mu", "the ray passes through mu at t = 1", true, path.eval(1.0)?.approx_eq(&mu, 1e-12)));
    let mut worst: f64 = 0.0;
    for (s, u) in [(0.0, 1.0), (0.5, 3.0), (2.0, 7.5), (1.0, 40.0)] {
        let d = wp_1d(&path.eval(s)?, &path.eval(u)?, 1.0)?;
        worst = worst.max((d - (u - s) * path.speed()).abs());
    }
    ctx.push(Assertion::at_most("witness-constant-speed", "W_1(mu_s, mu_u) - |s - u| speed on sampled pairs", 1e-8, worst));
    let family = ray(&[(0.0, 0.5), (3.0, 0.5)])?;
    ctx.push(Assertion::equal("family-member", "(d_0 + d_3)/2 lies in the ray family", true, in_sigma(&family)?));
    let refused = matches!(sigma_ray_witness(&family, 0.5), Err(Error::InSigma));
    ctx.push(Assertion::equal("family-member-no-witness", "no ray witness exists for a family member", true, refused));

    // The unbounded-growth witness in W_1.
    for (l, x, n) in [(0.5, 1.0, 2), (1.0, 1.0, 3), (0.25, 2.0, 4)] {
        let w = sigma_w1_claim_witness(&ray(&[(0.0, 1.0 - l), (x, l)])?, n)?;
        let id = format!("claim-l{l}-x{x}-n{n}");
        ctx.push(Assertion::close(&format!("{id}-growth"), "W_1(d_0, mu_n) = l x n", l * x * n as f64, w.growth.0, 1e-12));
        ctx.push(Assertion::equal(&format!("{id}-adjacent"), "d_0 and mu_n are adjacent", true, w.adjacent));
        ctx.push(Assertion::equal(&format!("{id}-intermediate"), "eta and eta' are 1/n-intermediate points", true, w.eta_intermediate && w.eta_prime_intermediate));
        ctx.push(Assertion::close(&format!("{id}-spread"), "W_1(eta, eta') equals the family diameter bound", w.diameter_bound, w.spread, 1e-9));
    }
    let outside = sigma_w1_claim_witness(&ray(&[(1.0, 0.5), (2.0, 0.5)])?, 2).is_err();
    ctx.push(Assertion::equal("claim-outside-family", "the growth witness rejects a measure outside the family", true, outside));

    // Adjacency and the midpoint diameter.
    let d0 = ray(&[(0.0, 1.0)])?;
    let split = ray(&[(0.0, 0.5), (1.0, 0.5)])?;
    ctx.push(Assertion::equal("adjacent-pair", "d_0 and (d_0 + d_1)/2 are adjacent", true, adjacency_test(&d0, &split)?));
    let far = ray(&[(2.0, 0.5), (5.0, 0.5)])?;
    ctx.push(Assertion::equal("non-adjacent-pair", "(d_0 + d_1)/2 and (d_2 + d_5)/2 are not adjacent", false, adjacency_test(&split, &far)?));
    let bound = midpoint_diameter_1d(&d0, &split, DIAMETER_SAMPLES)?;
    ctx.push(Assertion::close("adjacent-diameter", "midpoint diameter of an adjacent pair is W_1/2", 0.25, bound.diameter, 1e-9));
    let bound = midpoint_diameter_1d(&split, &far, DIAMETER_SAMPLES)?;
    let half = wp_1d(&split, &far, 1.0)? / 2.0;
    ctx.push(Assertion::above("non-adjacent-diameter", "midpoint diameter bound of a non-adjacent pair exceeds W_1/2", half, bound.diameter));
    Ok(())
}

pub fn delta2_chart(ctx: &mut Ctx) -> Result<()> {
    let a = Delta2Chart::new(0.0, 1.0, 0.0);
    let b = Delta2Chart::new(0.0, 1.0, LN_2);
    let cmp = compare_delta2(&a, &b)?;
    // The optimal coupling of the two 2-atom measures is one of the two
    // vertex couplings; enumerate both.
    let (ma, mb) = (a.measure()?, b.measure()?);
    let coord = |m: &AtomicMeasure, i: usize| match m.point(i) {
        Point::Vector(v) => v[0],
        _ => unreachable!(),
    };
    let c = |i: usize, j: usize| (coord(&ma, i) - coord(&mb, j)).powi(2);
    let (u, v) = (ma.weight(0), mb.weight(0));
    let vertex = |s: f64| s * c(0, 0) + (u - s) * c(0, 1) + (v - s) * c(1, 0) + (1.0 - u - v + s) * c(1, 1);
    let enumerated = vertex((u + v - 1.0).max(0.0)).min(vertex(u.min(v)));
    ctx.push(Assertion::close("log2-enumerated", "coupling enumeration of W_2^2(mu(0,1,0), mu(0,1,ln 2))", 1.0, enumerated, 1e-12));
    ctx.push(Assertion::close("log2-solver", "solver W_2^2(mu(0,1,0), mu(0,1,ln 2))", 1.0, cmp.solver, 1e-10));
    ctx.push(Assertion::close("log2-minus-sign", "closed form with e^{-|p - q|}", cmp.solver, cmp.minus_sign, 1e-10));
    ctx.push(Assertion::equal(
        "log2-plus-sign-discrepancy",
        "the e^{+|p - q|} form disagrees with the solver",
        true,
        cmp.plus_sign_discrepancy(1e-10),
    ));
    ctx.push(Assertion::observed("log2-plus-sign-value", "the e^{+|p - q|} form on this pair", cmp.plus_sign));
    ctx.solve(&ma, &mb, 2.0)?;

    let scaled = compare_delta2(&Delta2Chart::new(0.0, 1.0, 0.3), &Delta2Chart::new(0.0, 2.0, 0.3))?;
    ctx.push(Assertion::close("scaled-charts", "co-centred charts with the same shape: (sigma - rho)^2", 1.0, scaled.solver, 1e-10));
    ctx.push(Assertion::equal("same-chart", "W_2 between identical charts", 0.0, delta2_distance_squared(&a, &a)));

    let (mut worst_formula, mut worst_moment): (f64, f64) = (0.0, 0.0);
    for _ in 0..50 {
        let a = Delta2Chart::new(ctx.uniform(-2.0, 2.0), ctx.uniform(0.0, 2.0), ctx.uniform(-1.5, 1.5));
        let b = Delta2Chart::new(ctx.uniform(-2.0, 2.0), ctx.uniform(0.0, 2.0), ctx.uniform(-1.5, 1.5));
        let (ma, mb) = (a.measure()?, b.measure()?);
        let (_, plan) = ctx.solve(&ma, &mb, 2.0)?;
        worst_formula = worst_formula.max((plan.cost() - delta2_distance_squared(&a, &b)).abs());
        let mean: f64 = (0..ma.len()).map(|i| ma.weight(i) * coord(&ma, i)).sum();
        let var: f64 = (0..ma.len()).map(|i| ma.weight(i) * (coord(&ma, i) - a.x).powi(2)).sum();
        worst_moment = worst_moment.max((mean - a.x).abs()).max((var - a.sigma * a.sigma).abs());
    }
    ctx.push(Assertion::at_most("random-charts", "largest gap between the solver and the e^{-|p - q|} form over 50 chart pairs", 1e-10, worst_formula));
    ctx.push(Assertion::at_most("chart-moments", "chart measures have mean x and variance sigma^2", 1e-12, worst_moment));
    Ok(())
}
