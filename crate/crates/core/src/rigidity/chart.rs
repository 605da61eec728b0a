//! The two-atom chart `mu(x, sigma, p)` on the line.

use alloc::vec;

use crate::measures::AtomicMeasure;
use crate::spaces::{Point, Space};
use crate::transport::solve_wp;
use crate::{math, Result};

/// `mu(x, sigma, p) = a delta_{x - sigma e^p} + b delta_{x + sigma e^-p}`
/// with `a = e^-p / (e^-p + e^p)`, `b = e^p / (e^-p + e^p)`: mean `x`,
/// variance `sigma^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta2Chart {
    pub x: f64,
    pub sigma: f64,
    pub p: f64,
}

impl Delta2Chart {
    pub fn new(x: f64, sigma: f64, p: f64) -> Self {
        Delta2Chart { x, sigma, p }
    }

    /// The measure on `Euclidean { dim: 1 }`.
    pub fn measure(&self) -> Result<AtomicMeasure> {
        let (em, ep) = (math::exp(-self.p), math::exp(self.p));
        let z = em + ep;
        AtomicMeasure::new(
            Space::euclidean(1)?,
            vec![
                (Point::Vector(vec![self.x - self.sigma * ep]), em / z),
                (Point::Vector(vec![self.x + self.sigma * em]), ep / z),
            ],
        )
    }
}

/// `W_2^2 = |x - y|^2 + sigma^2 + rho^2 - 2 sigma rho e^{-|p - q|}`.
pub fn delta2_distance_squared(a: &Delta2Chart, b: &Delta2Chart) -> f64 {
    let dx = a.x - b.x;
    dx * dx + a.sigma * a.sigma + b.sigma * b.sigma - 2.0 * a.sigma * b.sigma * math::exp(-(a.p - b.p).abs())
}

/// `W_2` between two chart measures.
pub fn delta2_distance(a: &Delta2Chart, b: &Delta2Chart) -> f64 {
    math::sqrt(delta2_distance_squared(a, b).max(0.0))
}

/// The variant with `e^{+|p - q|}` in the cross term, which can go negative.
pub fn delta2_distance_squared_plus_sign(a: &Delta2Chart, b: &Delta2Chart) -> f64 {
    let dx = a.x - b.x;
    dx * dx + a.sigma * a.sigma + b.sigma * b.sigma - 2.0 * a.sigma * b.sigma * math::exp((a.p - b.p).abs())
}

/// Solver value of `W_2^2` against both closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta2Comparison {
    pub solver: f64,
    pub minus_sign: f64,
    pub plus_sign: f64,
}

impl Delta2Comparison {
    /// Whether the `e^{+|p - q|}` form disagrees with the solver.
    pub fn plus_sign_discrepancy(&self, tol: f64) -> bool {
        (self.plus_sign - self.solver).abs() > tol
    }
}

pub fn compare_delta2(a: &Delta2Chart, b: &Delta2Chart) -> Result<Delta2Comparison> {
    let (w, _) = solve_wp(&a.measure()?, &b.measure()?, 2.0)?;
    Ok(Delta2Comparison {
        solver: w * w,
        minus_sign: delta2_distance_squared(a, b),
        plus_sign: delta2_distance_squared_plus_sign(a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::LN_2;

    #[test]
    fn mean_and_variance() {
        let c = Delta2Chart::new(0.7, 1.3, -0.4);
        let m = c.measure().unwrap();
        let mean: f64 = m.atoms().iter().map(|(p, w)| w * p.as_scalar().unwrap()).sum();
        let var: f64 = m.atoms().iter().map(|(p, w)| w * (p.as_scalar().unwrap() - 0.7) * (p.as_scalar().unwrap() - 0.7)).sum();
        assert!((mean - 0.7).abs() < 1e-12);
        assert!((var - 1.69).abs() < 1e-12);
    }

    #[test]
    fn log_two_apart() {
        // Couplings of two 2-atom measures form a one-parameter family;
        // the optimum is 1.
        let cmp = compare_delta2(&Delta2Chart::new(0.0, 1.0, 0.0), &Delta2Chart::new(0.0, 1.0, LN_2)).unwrap();
        assert!((cmp.solver - 1.0).abs() < 1e-12);
        assert!((cmp.minus_sign - 1.0).abs() < 1e-15);
        assert!((cmp.plus_sign + 2.0).abs() < 1e-15);
        assert!(cmp.plus_sign_discrepancy(1e-10));
    }

    #[test]
    fn same_shape_different_scale() {
        let cmp = compare_delta2(&Delta2Chart::new(0.0, 1.0, 0.3), &Delta2Chart::new(0.0, 2.0, 0.3)).unwrap();
        assert!((cmp.solver - 1.0).abs() < 1e-12);
        assert_eq!(delta2_distance(&Delta2Chart::new(1.0, 1.0, 1.0), &Delta2Chart::new(1.0, 1.0, 1.0)), 0.0);
    }
}
