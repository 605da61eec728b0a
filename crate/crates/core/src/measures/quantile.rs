//! Inverse distribution functions of measures on the line.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::AtomicMeasure;
use crate::spaces::{Point, Space};
use crate::{math, Error, Result};

/// A left-continuous, nondecreasing step function on `(0, 1]`: it takes the
/// value `values[k]` on `(breakpoints[k-1], breakpoints[k]]`, with an
/// implicit `breakpoints[-1] = 0`. The last breakpoint is exactly `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

fn line_coordinate(space: &Space, p: &Point) -> Result<f64> {
    p.as_scalar().ok_or_else(|| Error::PointMismatch { expected: space.kind_name(), reason: "expected a real coordinate".into() })
}

fn line_point(space: &Space, v: f64) -> Point {
    match space {
        Space::Euclidean { .. } => Point::Vector(alloc::vec![v]),
        _ => Point::Scalar(v),
    }
}

impl QuantileFunction {
    /// Validates and builds a step function. Pieces of zero length are
    /// dropped and adjacent pieces with equal values are fused.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() || breakpoints.is_empty() {
            return Err(Error::InvalidMeasure("breakpoints and values must be non-empty and of equal length".into()));
        }
        if *breakpoints.last().unwrap() != 1.0 {
            return Err(Error::InvalidMeasure("last breakpoint must be 1".into()));
        }
        let mut prev_b = 0.0;
        let mut prev_v = f64::NEG_INFINITY;
        for (&b, &v) in breakpoints.iter().zip(&values) {
            if b < prev_b || !v.is_finite() || v < prev_v {
                return Err(Error::InvalidMeasure(format!("step ({b}, {v}) breaks monotonicity")));
            }
            prev_b = b;
            prev_v = v;
        }
        let mut q = QuantileFunction { breakpoints: Vec::new(), values: Vec::new() };
        let mut prev_b = 0.0;
        for (b, v) in breakpoints.into_iter().zip(values) {
            if b == prev_b {
                continue;
            }
            prev_b = b;
            if q.values.last() == Some(&v) {
                *q.breakpoints.last_mut().unwrap() = b;
            } else {
                q.breakpoints.push(b);
                q.values.push(v);
            }
        }
        Ok(q)
    }

    /// `G_mu^{-1}` of a measure on a ray, an interval, or the line.
    pub fn of(mu: &AtomicMeasure) -> Result<Self> {
        let space = mu.space();
        if !space.is_one_dimensional() {
            return Err(Error::UnsupportedSpace { operation: "quantile function", kind: space.kind_name() });
        }
        let mut atoms = mu.atoms().iter().map(|(p, w)| Ok((line_coordinate(space, p)?, *w))).collect::<Result<Vec<_>>>()?;
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut acc = 0.0;
        let mut breakpoints = Vec::with_capacity(atoms.len());
        for (_, w) in &atoms {
            acc += w;
            breakpoints.push(acc);
        }
        *breakpoints.last_mut().unwrap() = 1.0;
        let values = atoms.into_iter().map(|(x, _)| x).collect();
        QuantileFunction::new(breakpoints, values)
    }

    /// The measure whose quantile function is `self`, on `space`.
    pub fn to_measure(&self, space: impl Into<Arc<Space>>) -> Result<AtomicMeasure> {
        let space = space.into();
        if !space.is_one_dimensional() {
            return Err(Error::UnsupportedSpace { operation: "quantile function", kind: space.kind_name() });
        }
        let mut prev = 0.0;
        let atoms = self
            .breakpoints
            .iter()
            .zip(&self.values)
            .map(|(&b, &v)| {
                let w = b - prev;
                prev = b;
                (line_point(&space, v), w)
            })
            .collect();
        AtomicMeasure::new(space, atoms)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `G^{-1}(m)` for `m` in `(0, 1]`.
    pub fn eval(&self, m: f64) -> f64 {
        let k = self.breakpoints.partition_point(|&b| b < m);
        self.values[k.min(self.values.len() - 1)]
    }

    /// Pieces `(left, right, self value, other value)` over the merged
    /// breakpoints of both functions.
    pub fn merged_pieces(&self, other: &QuantileFunction) -> Vec<(f64, f64, f64, f64)> {
        let (mut i, mut j) = (0, 0);
        let mut left = 0.0;
        let mut out = Vec::with_capacity(self.values.len() + other.values.len());
        while i < self.values.len() && j < other.values.len() {
            let (a, b) = (self.breakpoints[i], other.breakpoints[j]);
            let right = a.min(b);
            if right > left {
                out.push((left, right, self.values[i], other.values[j]));
            }
            left = right;
            if a <= b {
                i += 1;
            }
            if b <= a {
                j += 1;
            }
        }
        out
    }

    /// `int_0^1 |G - H|^p dm`, summed exactly over the merged breakpoints.
    pub fn lp_cost(&self, other: &QuantileFunction, p: f64) -> f64 {
        self.merged_pieces(other).iter().map(|&(l, r, u, v)| (r - l) * math::abs_pow(u - v, p)).sum()
    }

    /// `(1 - t) self + t other`, pointwise.
    pub fn interpolate(&self, other: &QuantileFunction, t: f64) -> QuantileFunction {
        let pieces = self.merged_pieces(other);
        let breakpoints = pieces.iter().map(|p| p.1).collect();
        let values = pieces.iter().map(|&(_, _, u, v)| if u == v { u } else { (1.0 - t) * u + t * v }).collect();
        QuantileFunction::new(breakpoints, values).expect("convex combinations of quantile functions are quantile functions")
    }
}

/// `G_mu^{-1}`; see [`QuantileFunction::of`].
pub fn to_quantile(mu: &AtomicMeasure) -> Result<QuantileFunction> {
    QuantileFunction::of(mu)
}

/// The measure with quantile function `q`; see [`QuantileFunction::to_measure`].
pub fn from_quantile(space: impl Into<Arc<Space>>, q: &QuantileFunction) -> Result<AtomicMeasure> {
    q.to_measure(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn two_atom_steps() {
        let mu = AtomicMeasure::new(Space::Ray, vec![(Point::Scalar(2.0), 0.25), (Point::Scalar(0.0), 0.75)]).unwrap();
        let q = QuantileFunction::of(&mu).unwrap();
        assert_eq!(q.breakpoints(), &[0.75, 1.0]);
        assert_eq!(q.values(), &[0.0, 2.0]);
        assert_eq!(q.eval(0.75), 0.0);
        assert_eq!(q.eval(0.7500001), 2.0);
        assert!(q.to_measure(Space::Ray).unwrap().approx_eq(&mu, 1e-15));
    }

    #[test]
    fn dirac_is_constant() {
        let d = AtomicMeasure::dirac(Space::Ray, Point::Scalar(4.0)).unwrap();
        let q = QuantileFunction::of(&d).unwrap();
        assert_eq!((q.breakpoints(), q.values()), (&[1.0][..], &[4.0][..]));
    }

    #[test]
    fn rejects_other_spaces() {
        let e = Space::euclidean(2).unwrap();
        let d = AtomicMeasure::dirac(e, Point::Vector(vec![0.0, 0.0])).unwrap();
        assert!(QuantileFunction::of(&d).is_err());
    }

    #[test]
    fn line_measures_use_vector_points() {
        let line = Space::euclidean(1).unwrap();
        let m = AtomicMeasure::new(line.clone(), vec![(Point::Vector(vec![-1.0]), 0.5), (Point::Vector(vec![1.0]), 0.5)]).unwrap();
        let back = QuantileFunction::of(&m).unwrap().to_measure(line).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn non_monotone_values_rejected() {
        assert!(QuantileFunction::new(vec![0.5, 1.0], vec![1.0, 0.0]).is_err());
        assert!(QuantileFunction::new(vec![0.5, 0.9], vec![0.0, 1.0]).is_err());
    }
}
