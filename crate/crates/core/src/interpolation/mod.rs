//! Wasserstein geodesics built from optimal plans, and midpoint checks.

use alloc::format;
use alloc::vec::Vec;

use crate::measures::AtomicMeasure;
use crate::spaces::{geodesic, Geodesic, Space};
use crate::transport::{solve_wp, TransportPlan};
use crate::{Error, Result};

mod line;

pub use line::{
    in_sigma, intermediate_diameter_1d, midpoint_diameter_1d, sigma_ray_witness, sigma_witness_level, DiameterBound,
};

/// Tolerance of the distance equalities checked by [`verify_midpoint`] and
/// [`verify_intermediate`].
pub const MIDPOINT_TOL: f64 = 1e-9;

/// `t -> sum_k pi_k delta_{gamma^k_t}`: every plan entry moves along its own
/// geodesic. The curve is a Wasserstein geodesic on `[0, 1]` when the plan
/// is optimal; some paths extend beyond `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WassersteinPath {
    plan: TransportPlan,
    geodesics: Vec<Geodesic>,
    domain: (f64, f64),
}

impl WassersteinPath {
    /// The displacement interpolation of `plan` on `[0, 1]`, using the
    /// deterministic geodesic choice of [`geodesic`].
    pub fn from_plan(plan: TransportPlan) -> Result<Self> {
        let space = plan.space();
        let geodesics = (0..plan.entries().len())
            .map(|k| {
                let (x, y) = plan.endpoints(k);
                geodesic(space, x, y)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WassersteinPath { plan, geodesics, domain: (0.0, 1.0) })
    }

    /// Widens the parameter domain. Evaluation still fails where a geodesic
    /// leaves the space.
    pub fn with_domain(mut self, start: f64, end: f64) -> Self {
        self.domain = (start, end);
        self
    }

    pub fn plan(&self) -> &TransportPlan {
        &self.plan
    }

    pub fn space(&self) -> &Space {
        self.plan.space()
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn geodesics(&self) -> &[Geodesic] {
        &self.geodesics
    }

    /// `W_p(source, target)`, the speed of the path when the plan is optimal.
    pub fn speed(&self) -> f64 {
        self.plan.wp()
    }

    pub fn eval(&self, t: f64) -> Result<AtomicMeasure> {
        let (lo, hi) = self.domain;
        if !(t >= lo && t <= hi) {
            return Err(Error::Precondition(format!("parameter {t} outside [{lo}, {hi}]")));
        }
        if t == 0.0 {
            return Ok(self.plan.source().clone());
        }
        if t == 1.0 {
            return Ok(self.plan.target().clone());
        }
        let space = self.plan.space();
        let atoms = self
            .plan
            .entries()
            .iter()
            .zip(&self.geodesics)
            .map(|(&(_, _, mass), g)| Ok((g.eval(space, t)?, mass)))
            .collect::<Result<Vec<_>>>()?;
        AtomicMeasure::new(self.plan.source().space_arc().clone(), atoms)
    }
}

/// `(e_t)_# eta` for the plan's displacement interpolation, `t` in `[0, 1]`.
pub fn displacement_interpolate(plan: &TransportPlan, t: f64) -> Result<AtomicMeasure> {
    WassersteinPath::from_plan(plan.clone())?.eval(t)
}

/// Whether `m` is a `t`-intermediate point: `W_p(mu, m) = t W_p(mu, nu)` and
/// `W_p(m, nu) = (1 - t) W_p(mu, nu)`, within [`MIDPOINT_TOL`].
pub fn verify_intermediate(mu: &AtomicMeasure, nu: &AtomicMeasure, m: &AtomicMeasure, t: f64, p: f64) -> Result<bool> {
    let (w, _) = solve_wp(mu, nu, p)?;
    let (a, _) = solve_wp(mu, m, p)?;
    let (b, _) = solve_wp(m, nu, p)?;
    Ok((a - t * w).abs() <= MIDPOINT_TOL && (b - (1.0 - t) * w).abs() <= MIDPOINT_TOL)
}

/// [`verify_intermediate`] at `t = 1/2`.
pub fn verify_midpoint(mu: &AtomicMeasure, nu: &AtomicMeasure, m: &AtomicMeasure, p: f64) -> Result<bool> {
    verify_intermediate(mu, nu, m, 0.5, p)
}
