//! Cross-checks against independent brute-force computations.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::Arc;

use wasserlab_core::interpolation::verify_midpoint;
use wasserlab_core::rigidity::{
    barycenter, exotic_isometry, frechet_function, frechet_mean_set, sigma_distance, sigma_distance_to_dirac1,
    verify_isometry, IsometryCandidate, LinearIsometry, SigmaMeasure,
};
use wasserlab_core::spaces::{fiber_projection, intermediate_points, meridian_projection};
use wasserlab_core::transport::distance_to_fiber;
use wasserlab_core::{distance, solve_wp, AtomicMeasure, FiniteMetric, Point, Space};

/// Small deterministic generator so the oracles do not depend on proptest.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() * n as f64) as usize % n
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for i in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(i, n - 1);
            out.push(p);
        }
    }
    out
}

/// Uniform measures on `n` points: the optimum is attained at a permutation
/// (Birkhoff), so the minimum over all `n!` matchings is exact.
fn brute_force_uniform(space: &Space, xs: &[Point], ys: &[Point], p: f64) -> f64 {
    let n = xs.len() as f64;
    permutations(xs.len())
        .iter()
        .map(|perm| perm.iter().enumerate().map(|(i, &j)| distance(space, &xs[i], &ys[j]).unwrap().powf(p)).sum::<f64>() / n)
        .fold(f64::INFINITY, f64::min)
        .powf(1.0 / p)
}

fn graph_space() -> Space {
    let edges = [(0, 1, 1.0), (1, 2, 0.7), (2, 3, 1.3), (3, 4, 0.5), (4, 0, 2.0), (1, 4, 1.1), (5, 2, 0.4)];
    Space::finite(FiniteMetric::graph(6, &edges).unwrap())
}

fn susp_over_line(coords: &[f64]) -> Space {
    Space::suspension(Space::finite(FiniteMetric::line(coords).unwrap()), false).unwrap()
}

#[test]
fn solver_matches_permutation_brute_force() {
    let mut rng = Lcg(11);
    let euclid = Space::euclidean(2).unwrap();
    let graph = graph_space();
    let susp = susp_over_line(&[0.0, 0.3, 0.5, 1.2]);
    let product = Space::qproduct(Space::euclidean(1).unwrap(), graph_space(), 3.0).unwrap();
    for round in 0..40 {
        let n = 2 + round % 5;
        let p = [1.0, 1.5, 2.0, 3.0][round % 4];
        let draw: Box<dyn Fn(&mut Lcg) -> Point> = match round % 4 {
            0 => Box::new(|r: &mut Lcg| Point::Vector(vec![4.0 * r.next() - 2.0, 4.0 * r.next() - 2.0])),
            1 => Box::new(|r: &mut Lcg| Point::Index(r.below(6))),
            2 => Box::new(|r: &mut Lcg| Point::susp(Point::Index(r.below(4)), PI * r.next()).unwrap()),
            _ => Box::new(|r: &mut Lcg| Point::pair(Point::Vector(vec![3.0 * r.next()]), Point::Index(r.below(6)))),
        };
        let space = [&euclid, &graph, &susp, &product][round % 4];
        let xs: Vec<Point> = (0..n).map(|_| draw(&mut rng)).collect();
        let ys: Vec<Point> = (0..n).map(|_| draw(&mut rng)).collect();
        let expected = brute_force_uniform(space, &xs, &ys, p);
        let uniform = |pts: &[Point]| AtomicMeasure::from_unnormalized(space.clone(), pts.iter().map(|x| (x.clone(), 1.0)).collect()).unwrap();
        let (w, _) = solve_wp(&uniform(&xs), &uniform(&ys), p).unwrap();
        assert!((w - expected).abs() <= 1e-9 * expected.max(1.0), "round {round}: {w} vs {expected}");
    }
}

#[test]
fn two_by_two_couplings_enumerated() {
    // Couplings of two 2-atom measures form a one-parameter family; its
    // minimum sits at one of the two vertices.
    let mut rng = Lcg(5);
    let space = Space::euclidean(3).unwrap();
    for _ in 0..50 {
        let pt = |r: &mut Lcg| Point::Vector((0..3).map(|_| r.next() * 2.0 - 1.0).collect());
        let (x0, x1, y0, y1) = (pt(&mut rng), pt(&mut rng), pt(&mut rng), pt(&mut rng));
        let (a, b) = (0.1 + 0.8 * rng.next(), 0.1 + 0.8 * rng.next());
        let mu = AtomicMeasure::new(space.clone(), vec![(x0.clone(), a), (x1.clone(), 1.0 - a)]).unwrap();
        let nu = AtomicMeasure::new(space.clone(), vec![(y0.clone(), b), (y1.clone(), 1.0 - b)]).unwrap();
        let c = |x: &Point, y: &Point| distance(&space, x, y).unwrap().powi(2);
        let cost = |s: f64| s * c(&x0, &y0) + (a - s) * c(&x0, &y1) + (b - s) * c(&x1, &y0) + (1.0 - a - b + s) * c(&x1, &y1);
        let expected = cost((a + b - 1.0).max(0.0)).min(cost(a.min(b))).sqrt();
        let (w, _) = solve_wp(&mu, &nu, 2.0).unwrap();
        assert!((w - expected).abs() <= 1e-12, "{w} vs {expected}");
    }
}

#[test]
fn suspension_diameter_attained_only_at_poles() {
    let coords: Vec<f64> = (0..20).map(|i| i as f64 * 0.07).collect();
    let space = susp_over_line(&coords);
    let mut points = vec![Point::pole_zero(), Point::pole_pi()];
    for i in 0..20 {
        for k in 1..8 {
            points.push(Point::susp(Point::Index(i), k as f64 * PI / 8.0).unwrap());
        }
    }
    let mut at_pi = 0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = distance(&space, a, b).unwrap();
            if d >= PI - 1e-9 {
                at_pi += 1;
                assert!(a.is_pole() && b.is_pole());
            }
        }
    }
    assert_eq!(at_pi, 1);
}

#[test]
fn product_midpoints_factor_exhaustively() {
    let left = FiniteMetric::graph(5, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0), (0, 4, 2.0)]).unwrap();
    let right = FiniteMetric::line(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
    let space = Space::qproduct(Space::finite(left.clone()), Space::finite(right.clone()), 2.0).unwrap();
    let pts: Vec<Point> = (0..5).flat_map(|i| (0..5).map(move |j| Point::pair(Point::Index(i), Point::Index(j)))).collect();
    let is_mid = |m: &FiniteMetric, a: usize, b: usize, z: usize| {
        (m.get(a, z) - m.get(a, b) / 2.0).abs() < 1e-12 && (m.get(z, b) - m.get(a, b) / 2.0).abs() < 1e-12
    };
    let index = |p: &Point| {
        let (l, r) = p.as_pair().unwrap();
        match (l, r) {
            (Point::Index(i), Point::Index(j)) => (*i, *j),
            _ => unreachable!(),
        }
    };
    for a in &pts {
        for b in &pts {
            if a == b {
                continue;
            }
            let d = distance(&space, a, b).unwrap();
            let scanned: Vec<&Point> = pts
                .iter()
                .filter(|z| {
                    (distance(&space, a, z).unwrap() - d / 2.0).abs() < 1e-12 && (distance(&space, z, b).unwrap() - d / 2.0).abs() < 1e-12
                })
                .collect();
            let ((a0, a1), (b0, b1)) = (index(a), index(b));
            let factored: Vec<&Point> = pts
                .iter()
                .filter(|z| {
                    let (z0, z1) = index(z);
                    is_mid(&left, a0, b0, z0) && is_mid(&right, a1, b1, z1)
                })
                .collect();
            assert_eq!(scanned, factored);
            let computed = intermediate_points(&space, a, b, 0.5).unwrap();
            assert_eq!(computed.len(), scanned.len());
            assert!(computed.iter().all(|z| scanned.contains(&z)));
        }
    }
}

#[test]
fn meridian_projection_matches_grid_argmin() {
    let mut rng = Lcg(3);
    for _ in 0..100 {
        let d = rng.next() * (FRAC_PI_2 - 1e-3);
        let t = rng.next() * FRAC_PI_2;
        let space = susp_over_line(&[0.0, d]);
        let x = Point::susp(Point::Index(0), t).unwrap();
        let proj = meridian_projection(&space, &Point::Index(1), &x).unwrap();
        let steps = (FRAC_PI_2 / 1e-4) as usize;
        let best = (0..=steps)
            .map(|k| (k as f64 * 1e-4).min(FRAC_PI_2))
            .map(|s| (distance(&space, &x, &Point::susp(Point::Index(1), s).unwrap()).unwrap(), s))
            .fold((f64::INFINITY, 0.0), |acc, v| if v.0 < acc.0 { v } else { acc })
            .1;
        let angle = proj.susp_angle().unwrap();
        assert!((angle - best).abs() <= 2e-4, "d={d} t={t}: {angle} vs {best}");
    }
}

#[test]
fn fiber_projection_is_the_strict_minimiser() {
    let coords = [0.0, 0.2, 0.35, 0.6, 0.9];
    let space = susp_over_line(&coords);
    for i in 0..coords.len() {
        for &s in &[0.3, FRAC_PI_4, 1.2, 2.0, 2.8] {
            let x = Point::susp(Point::Index(i), s).unwrap();
            let proj = fiber_projection(&space, FRAC_PI_2, &x, None).unwrap();
            let mut ds: Vec<(f64, Point)> = (0..coords.len())
                .map(|j| Point::susp(Point::Index(j), FRAC_PI_2).unwrap())
                .map(|z| (distance(&space, &x, &z).unwrap(), z))
                .collect();
            ds.sort_by(|a, b| a.0.total_cmp(&b.0));
            assert_eq!(ds[0].1, proj);
            assert!(ds[1].0 > ds[0].0 + 1e-9);
        }
    }
}

#[test]
fn fiber_distance_is_a_lower_bound() {
    let mut rng = Lcg(17);
    let coords = [0.0, 0.3, 0.45, 0.8];
    let susp = Arc::new(susp_over_line(&coords));
    let cyl = Arc::new(Space::half_cylinder(Space::finite(FiniteMetric::line(&coords).unwrap()), 2.0).unwrap());
    let mu_s = AtomicMeasure::from_unnormalized(
        susp.clone(),
        vec![(Point::susp(Point::Index(0), 0.4).unwrap(), 1.0), (Point::susp(Point::Index(2), 2.1).unwrap(), 2.0), (Point::susp(Point::Index(3), 1.0).unwrap(), 1.5)],
    )
    .unwrap();
    let mu_c = AtomicMeasure::from_unnormalized(
        cyl.clone(),
        vec![(Point::pair(Point::Index(0), Point::Scalar(1.5)), 1.0), (Point::pair(Point::Index(3), Point::Scalar(0.2)), 1.0)],
    )
    .unwrap();
    for (mu, t, fiber_point) in [
        (&mu_s, FRAC_PI_2, Box::new(|j: usize| Point::susp(Point::Index(j), FRAC_PI_2).unwrap()) as Box<dyn Fn(usize) -> Point>),
        (&mu_c, 0.0, Box::new(|j: usize| Point::pair(Point::Index(j), Point::Scalar(0.0)))),
    ] {
        let (best, proj) = distance_to_fiber(mu, t, 2.0, None).unwrap();
        assert!((solve_wp(mu, &proj, 2.0).unwrap().0 - best).abs() <= 1e-12);
        for _ in 0..100 {
            let atoms = (0..coords.len()).map(|j| (fiber_point(j), rng.next())).collect();
            let other = AtomicMeasure::from_unnormalized(mu.space_arc().clone(), atoms).unwrap();
            assert!(solve_wp(mu, &other, 2.0).unwrap().0 >= best - 1e-12);
        }
    }
}

#[test]
fn midpoints_from_the_vertex_are_unique_on_the_fiber_grid() {
    let coords = [0.0, 0.4, 0.7];
    let space = Arc::new(susp_over_line(&coords));
    let o = AtomicMeasure::dirac(space.clone(), Point::pole_zero()).unwrap();
    let mu = AtomicMeasure::new(
        space.clone(),
        vec![(Point::susp(Point::Index(0), FRAC_PI_2).unwrap(), 0.5), (Point::susp(Point::Index(2), FRAC_PI_2).unwrap(), 0.5)],
    )
    .unwrap();
    let scaled = mu.push_forward(space.clone(), |x| Point::susp(x.susp_base().unwrap().clone(), FRAC_PI_4)).unwrap();
    let fiber: Vec<Point> = (0..3).map(|i| Point::susp(Point::Index(i), FRAC_PI_4).unwrap()).collect();
    let mut verified = Vec::new();
    for i in 0..3 {
        for j in i..3 {
            for k in 1..20 {
                let w = k as f64 / 20.0;
                let cand = AtomicMeasure::from_unnormalized(space.clone(), vec![(fiber[i].clone(), w), (fiber[j].clone(), 1.0 - w)]).unwrap();
                if verify_midpoint(&o, &mu, &cand, 2.0).unwrap() && !verified.iter().any(|m: &AtomicMeasure| m.approx_eq(&cand, 1e-12)) {
                    verified.push(cand);
                }
            }
        }
    }
    assert_eq!(verified.len(), 1);
    assert!(verified[0].approx_eq(&scaled, 1e-12));
}

#[test]
fn sigma_closed_forms_match_the_solver() {
    let xs = [1.5, 2.0, 3.0, 5.0];
    for &p in &[1.0, 2.0, 3.0] {
        let dirac1 = AtomicMeasure::dirac(Space::Ray, Point::Scalar(1.0)).unwrap();
        for &x in &xs {
            let mx = SigmaMeasure::unit(x, p).unwrap().measure;
            let direct = ((1.0 - x.powf(-p)) + (1.0 - 1.0 / x).powf(p)).powf(1.0 / p);
            assert!((sigma_distance_to_dirac1(x, p).unwrap() - direct).abs() <= 1e-12);
            assert!((solve_wp(&mx, &dirac1, p).unwrap().0 - direct).abs() <= 1e-10);
            for &y in xs.iter().filter(|&&y| y >= x) {
                let my = SigmaMeasure::unit(y, p).unwrap().measure;
                let direct = ((1.0 - (x / y).powf(p)) + (1.0 - x / y).powf(p)).powf(1.0 / p);
                assert!((sigma_distance(x, y, p).unwrap() - direct).abs() <= 1e-12);
                assert!((solve_wp(&mx, &my, p).unwrap().0 - direct).abs() <= 1e-10);
            }
        }
    }
}

fn plane_product() -> Arc<Space> {
    Arc::new(Space::qproduct(Space::euclidean(2).unwrap(), graph_space(), 2.0).unwrap())
}

fn random_product_measure(rng: &mut Lcg, space: &Arc<Space>) -> AtomicMeasure {
    let n = 1 + rng.below(4);
    let atoms = (0..n)
        .map(|_| (Point::pair(Point::Vector(vec![4.0 * rng.next() - 2.0, 4.0 * rng.next() - 2.0]), Point::Index(rng.below(6))), 0.1 + rng.next()))
        .collect();
    AtomicMeasure::from_unnormalized(space.clone(), atoms).unwrap()
}

#[test]
fn frechet_function_splits_over_products() {
    let mut rng = Lcg(23);
    let space = plane_product();
    for _ in 0..50 {
        let mu = random_product_measure(&mut rng, &space);
        let (mh, my) = mu.marginals().unwrap();
        let h = Point::Vector(vec![rng.next(), rng.next()]);
        let y = Point::Index(rng.below(6));
        let whole = frechet_function(&mu, &Point::pair(h.clone(), y.clone())).unwrap();
        let split = frechet_function(&mh, &h).unwrap() + frechet_function(&my, &y).unwrap();
        assert!((whole - split).abs() <= 1e-12 * whole.max(1.0));

        let b = barycenter(&mh).unwrap();
        let Point::Vector(bv) = &b else { unreachable!() };
        let mut candidates = Vec::new();
        for i in -3i32..=3 {
            for j in -3i32..=3 {
                for k in 0..6 {
                    candidates.push(Point::pair(Point::Vector(vec![bv[0] + 0.01 * i as f64, bv[1] + 0.01 * j as f64]), Point::Index(k)));
                }
            }
        }
        for m in frechet_mean_set(&mu, &candidates).unwrap() {
            assert_eq!(m.as_pair().unwrap().0, &b);
        }
    }
}

#[test]
fn barycenter_beats_the_grid() {
    let mut rng = Lcg(29);
    let plane = Arc::new(Space::euclidean(2).unwrap());
    for _ in 0..20 {
        let atoms = (0..4).map(|_| (Point::Vector(vec![rng.next(), rng.next()]), 0.1 + rng.next())).collect();
        let mu = AtomicMeasure::from_unnormalized(plane.clone(), atoms).unwrap();
        let b = barycenter(&mu).unwrap();
        let Point::Vector(bv) = &b else { unreachable!() };
        let fb = frechet_function(&mu, &b).unwrap();
        for i in -10i32..=10 {
            for j in -10i32..=10 {
                let g = Point::Vector(vec![bv[0] + 0.01 * i as f64, bv[1] + 0.01 * j as f64]);
                assert!(frechet_function(&mu, &g).unwrap() >= fb - 1e-15);
            }
        }
    }
}

#[test]
fn exotic_map_is_a_w2_isometry_fixing_diracs() {
    let mut rng = Lcg(31);
    let space = plane_product();
    let psi = LinearIsometry::rotation(1.1);
    let mut pairs = Vec::new();
    for _ in 0..100 {
        pairs.push((random_product_measure(&mut rng, &space), random_product_measure(&mut rng, &space)));
    }
    let distortion = verify_isometry(&IsometryCandidate::Exotic(psi.clone()), &pairs, 2.0).unwrap();
    assert!(distortion <= 1e-9, "{distortion}");
    for (mu, _) in pairs.iter().take(20) {
        let d = AtomicMeasure::dirac(space.clone(), mu.point(0).clone()).unwrap();
        assert_eq!(exotic_isometry(&psi, &d).unwrap(), d);
    }
}
