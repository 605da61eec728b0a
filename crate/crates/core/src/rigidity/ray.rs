//! The ray family `(1 - l) delta_0 + l delta_x` on `[0, inf)` and its
//! closed-form distances.

use alloc::format;
use alloc::vec;

use crate::interpolation::{in_sigma, intermediate_diameter_1d, verify_intermediate};
use crate::measures::AtomicMeasure;
use crate::spaces::{Point, Space};
use crate::transport::{adjacency_test, wp_1d};
use crate::{math, Error, Result};

/// `(1 - lambda) delta_0 + lambda delta_x` on the ray.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaMeasure {
    pub lambda: f64,
    pub x: f64,
    pub measure: AtomicMeasure,
}

impl SigmaMeasure {
    pub fn new(lambda: f64, x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Precondition(format!("weight {lambda} outside [0, 1]")));
        }
        let measure = AtomicMeasure::new(
            Space::Ray,
            vec![(Point::Scalar(0.0), 1.0 - lambda), (Point::Scalar(x), lambda)],
        )?;
        Ok(SigmaMeasure { lambda, x, measure })
    }

    /// The member at `W_p`-distance one from `delta_0`: `lambda = x^-p`.
    pub fn unit(x: f64, p: f64) -> Result<Self> {
        if !(x >= 1.0) {
            return Err(Error::Precondition(format!("unit-distance members need x >= 1, got {x}")));
        }
        SigmaMeasure::new(1.0 / math::powf(x, p), x)
    }

    /// Recovers `(lambda, x)` from a measure of the family; `delta_0` gives
    /// `lambda = 0, x = 0`.
    pub fn from_measure(mu: &AtomicMeasure) -> Result<Self> {
        if !in_sigma(mu)? {
            return Err(Error::Precondition("measure is not of the form (1 - l) delta_0 + l delta_x".into()));
        }
        let (x, lambda) = mu
            .atoms()
            .iter()
            .find(|(p, _)| p.as_scalar() != Some(0.0))
            .map_or((0.0, 0.0), |(p, w)| (p.as_scalar().unwrap(), *w));
        Ok(SigmaMeasure { lambda, x, measure: mu.clone() })
    }
}

/// `W_p` between the unit members at `x <= y`:
/// `((1 - x^p / y^p) + (1 - x / y)^p)^(1/p)`.
pub fn sigma_distance(x: f64, y: f64, p: f64) -> Result<f64> {
    if !(1.0 <= x && x <= y) {
        return Err(Error::Precondition(format!("need 1 <= x <= y, got x = {x}, y = {y}")));
    }
    Ok(math::root((1.0 - math::powf(x / y, p)) + math::powf(1.0 - x / y, p), p))
}

/// `W_p(delta_1, mu_x) = ((1 - x^-p) + (1 - 1/x)^p)^(1/p)`.
pub fn sigma_distance_to_dirac1(x: f64, p: f64) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::Precondition(format!("need x >= 1, got {x}")));
    }
    Ok(math::root((1.0 - math::powf(x, -p)) + math::powf(1.0 - 1.0 / x, p), p))
}

/// The measures and checks of the unbounded-growth witness for
/// `eta = (1 - l) delta_0 + l delta_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClaimWitness {
    pub lambda: f64,
    pub x: f64,
    pub n: u32,
    /// `(1 - l) delta_0 + l delta_{x n}`.
    pub mu_n: AtomicMeasure,
    /// `(1 - l/n) delta_0 + (l/n) delta_{x n}`.
    pub eta_prime: AtomicMeasure,
    /// `W_1(delta_0, mu_n)` and its expected value `l x n`.
    pub growth: (f64, f64),
    pub adjacent: bool,
    pub eta_intermediate: bool,
    pub eta_prime_intermediate: bool,
    /// `W_1(eta, eta')`.
    pub spread: f64,
    /// Diameter bound of the `1/n`-intermediate family between `delta_0` and
    /// `mu_n`.
    pub diameter_bound: f64,
}

impl ClaimWitness {
    pub fn all_pass(&self, tol: f64) -> bool {
        (self.growth.0 - self.growth.1).abs() <= tol
            && self.adjacent
            && self.eta_intermediate
            && self.eta_prime_intermediate
            && (self.spread - self.diameter_bound).abs() <= tol
    }
}

/// Builds `mu_n` and `eta'` for `eta` in the family (not `delta_0`) and runs
/// the four checks: growth of `W_1(delta_0, mu_n)`, adjacency of
/// `delta_0` and `mu_n`, `eta, eta'` in `M^{1/n}(delta_0, mu_n)`, and
/// `W_1(eta, eta')` against the diameter of that set.
pub fn sigma_w1_claim_witness(eta: &AtomicMeasure, n: u32) -> Result<ClaimWitness> {
    let s = SigmaMeasure::from_measure(eta)?;
    if s.lambda == 0.0 {
        return Err(Error::Precondition("eta must differ from delta_0".into()));
    }
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n} must be at least 2")));
    }
    let nf = n as f64;
    let far = s.x * nf;
    let origin = AtomicMeasure::dirac(Space::Ray, Point::Scalar(0.0))?;
    let mu_n = SigmaMeasure::new(s.lambda, far)?.measure;
    let eta_prime = SigmaMeasure::new(s.lambda / nf, far)?.measure;
    let t = 1.0 / nf;
    let bound = intermediate_diameter_1d(&origin, &mu_n, t, 3)?;
    Ok(ClaimWitness {
        lambda: s.lambda,
        x: s.x,
        n,
        growth: (wp_1d(&origin, &mu_n, 1.0)?, s.lambda * far),
        adjacent: adjacency_test(&origin, &mu_n)?,
        eta_intermediate: verify_intermediate(&origin, &mu_n, eta, t, 1.0)?,
        eta_prime_intermediate: verify_intermediate(&origin, &mu_n, &eta_prime, t, 1.0)?,
        spread: wp_1d(eta, &eta_prime, 1.0)?,
        diameter_bound: bound.diameter,
        mu_n,
        eta_prime,
    })
}
