//! Intermediate-point families and rays for measures on the line.

use alloc::format;
use alloc::vec::Vec;

use super::{verify_intermediate, WassersteinPath};
use crate::measures::{AtomicMeasure, QuantileFunction};
use crate::spaces::Space;
use crate::transport::{monotone_plan, wp_1d};
use crate::{Error, Result};

/// Lower bound on `diam M^t(mu, nu)` in `W_1`, with the two verified
/// intermediate points realising it.
#[derive(Debug, Clone, PartialEq)]
pub struct DiameterBound {
    pub diameter: f64,
    pub extremes: (AtomicMeasure, AtomicMeasure),
    /// Number of distinct verified intermediate points examined.
    pub candidates: usize,
}

type Piece = (f64, f64, f64, f64);

/// Smallest `s` with `int_0^s |G_mu^{-1} - G_nu^{-1}| = mass`.
fn cut(pieces: &[Piece], mass: f64) -> f64 {
    let mut acc = 0.0;
    for &(l, r, u, v) in pieces {
        let rate = (u - v).abs();
        let area = rate * (r - l);
        if acc + area >= mass && area > 0.0 {
            return (l + (mass - acc) / rate).clamp(l, r);
        }
        acc += area;
    }
    1.0
}

/// The quantile function that follows one endpoint on `(0, s]` and the
/// other on `(s, 1]`; `None` when the result is not monotone.
fn swapped(pieces: &[Piece], s: f64, nu_first: bool) -> Option<QuantileFunction> {
    let (mut bps, mut vals) = (Vec::new(), Vec::new());
    for &(l, r, u, v) in pieces {
        let (first, second) = if nu_first { (v, u) } else { (u, v) };
        if r <= s {
            bps.push(r);
            vals.push(first);
        } else if l >= s {
            bps.push(r);
            vals.push(second);
        } else {
            bps.extend([s, r]);
            vals.extend([first, second]);
        }
    }
    QuantileFunction::new(bps, vals).ok()
}

fn clamp_between(c: f64, u: f64, v: f64) -> f64 {
    c.clamp(u.min(v), u.max(v))
}

/// Quantile functions `median(G_mu^{-1}, G_nu^{-1}, c)` at distance `mass`
/// from `G_mu^{-1}`. The distance is piecewise linear in `c` with kinks at
/// the quantile values, so every crossing is found exactly.
fn clamped(pieces: &[Piece], mass: f64) -> Vec<QuantileFunction> {
    let f = |c: f64| -> f64 { pieces.iter().map(|&(l, r, u, v)| (r - l) * (u - clamp_between(c, u, v)).abs()).sum() };
    let mut levels: Vec<f64> = pieces.iter().flat_map(|&(_, _, u, v)| [u, v]).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut roots = Vec::new();
    for w in levels.windows(2) {
        let (fa, fb) = (f(w[0]), f(w[1]));
        if fa == mass {
            roots.push(w[0]);
        } else if (fa - mass) * (fb - mass) < 0.0 {
            roots.push(w[0] + (mass - fa) * (w[1] - w[0]) / (fb - fa));
        }
    }
    roots
        .into_iter()
        .filter_map(|c| {
            let bps = pieces.iter().map(|p| p.1).collect();
            let vals = pieces.iter().map(|&(_, _, u, v)| clamp_between(c, u, v)).collect();
            QuantileFunction::new(bps, vals).ok()
        })
        .collect()
}

/// Lower bound on the `W_1`-diameter of the set of `t`-intermediate points
/// between two measures on the line.
///
/// The family examined: the quantile interpolation `(1 - t) G_mu + t G_nu`;
/// the two swaps that follow `G_nu` then `G_mu` (or the reverse) with the
/// switch placed at the right mass; the clamps `median(G_mu, G_nu, c)`; and
/// `samples` convex combinations of every pair of those. Each candidate is
/// checked with [`verify_intermediate`] (exact solver, `p = 1`) and dropped
/// if it fails.
pub fn intermediate_diameter_1d(mu: &AtomicMeasure, nu: &AtomicMeasure, t: f64, samples: usize) -> Result<DiameterBound> {
    if !mu.same_space(nu) {
        return Err(Error::SpaceMismatch);
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Precondition(format!("level {t} outside (0, 1)")));
    }
    let (gm, gn) = (QuantileFunction::of(mu)?, QuantileFunction::of(nu)?);
    let pieces = gm.merged_pieces(&gn);
    let w: f64 = pieces.iter().map(|&(l, r, u, v)| (r - l) * (u - v).abs()).sum();
    let target = t * w;

    let mut family = alloc::vec![gm.interpolate(&gn, t)];
    family.extend(swapped(&pieces, cut(&pieces, target), true));
    family.extend(swapped(&pieces, cut(&pieces, w - target), false));
    family.extend(clamped(&pieces, target));

    let space = mu.space_arc();
    let mut verified: Vec<(QuantileFunction, AtomicMeasure)> = Vec::new();
    let admit = |q: QuantileFunction, verified: &mut Vec<(QuantileFunction, AtomicMeasure)>| -> Result<()> {
        let Ok(m) = q.to_measure(space.clone()) else { return Ok(()) };
        if verified.iter().any(|(_, v)| v.approx_eq(&m, 1e-12)) {
            return Ok(());
        }
        if verify_intermediate(mu, nu, &m, t, 1.0)? {
            verified.push((q, m));
        }
        Ok(())
    };
    for q in family {
        admit(q, &mut verified)?;
    }
    let vertices = verified.len();
    for s in 1..=samples {
        let lambda = s as f64 / (samples + 1) as f64;
        for i in 0..vertices {
            for j in i + 1..vertices {
                let q = verified[i].0.interpolate(&verified[j].0, lambda);
                admit(q, &mut verified)?;
            }
        }
    }
    if verified.is_empty() {
        return Err(Error::SolverFault("no candidate passed the intermediate-point check".into()));
    }

    let mut best = (0.0, 0, 0);
    for i in 0..verified.len() {
        for j in i + 1..verified.len() {
            let d = wp_1d(&verified[i].1, &verified[j].1, 1.0)?;
            if d > best.0 {
                best = (d, i, j);
            }
        }
    }
    Ok(DiameterBound {
        diameter: best.0,
        extremes: (verified[best.1].1.clone(), verified[best.2].1.clone()),
        candidates: verified.len(),
    })
}

/// [`intermediate_diameter_1d`] at `t = 1/2`.
pub fn midpoint_diameter_1d(mu: &AtomicMeasure, nu: &AtomicMeasure, samples: usize) -> Result<DiameterBound> {
    intermediate_diameter_1d(mu, nu, 0.5, samples)
}

fn require_ray(mu: &AtomicMeasure, operation: &'static str) -> Result<()> {
    match mu.space() {
        Space::Ray => Ok(()),
        other => Err(Error::UnsupportedSpace { operation, kind: other.kind_name() }),
    }
}

/// Whether `mu` has the form `(1 - l) delta_0 + l delta_x`: at most one atom
/// away from the exact origin.
pub fn in_sigma(mu: &AtomicMeasure) -> Result<bool> {
    require_ray(mu, "in_sigma")?;
    Ok(mu.atoms().iter().filter(|(p, _)| p.as_scalar() != Some(0.0)).count() <= 1)
}

/// The mass level of the first atom away from the origin, a valid `m1` for
/// [`sigma_ray_witness`].
pub fn sigma_witness_level(mu: &AtomicMeasure) -> Result<f64> {
    if in_sigma(mu)? {
        return Err(Error::InSigma);
    }
    let q = QuantileFunction::of(mu)?;
    let k = q.values().iter().position(|&v| v > 0.0).expect("a measure outside the family has positive atoms");
    Ok(q.breakpoints()[k])
}

/// A geodesic ray `t -> mu_t`, `t >= 0`, through `mu_1 = mu` with
/// `mu_0 != delta_0`:
/// `G_{mu_t} = G_mu` on `(0, m1]` and `(1 - t) G_mu(m1) + t G_mu` after.
///
/// Needs `0 < G_mu(m1) < G_mu(1)`; measures of the form
/// `(1 - l) delta_0 + l delta_x` have no such ray.
pub fn sigma_ray_witness(mu: &AtomicMeasure, m1: f64) -> Result<WassersteinPath> {
    if in_sigma(mu)? {
        return Err(Error::InSigma);
    }
    if !(m1 > 0.0 && m1 < 1.0) {
        return Err(Error::Precondition(format!("mass level {m1} outside (0, 1)")));
    }
    let q = QuantileFunction::of(mu)?;
    let pivot = q.eval(m1);
    if !(pivot > 0.0 && pivot < q.eval(1.0)) {
        return Err(Error::Precondition(format!("quantile {pivot} at level {m1} must be positive and below the maximum")));
    }
    let mut bps: Vec<f64> = q.breakpoints().iter().copied().filter(|&b| b < m1).collect();
    bps.extend([m1, 1.0]);
    let vals = bps.iter().map(|&b| if b <= m1 { q.eval(b) } else { pivot }).collect();
    let start = QuantileFunction::new(bps, vals)?.to_measure(mu.space_arc().clone())?;
    let plan = monotone_plan(&start, mu, 1.0)?;
    Ok(WassersteinPath::from_plan(plan)?.with_domain(0.0, f64::INFINITY))
}
