//! Fréchet functions, mean sets and Euclidean barycenters.

use alloc::vec;
use alloc::vec::Vec;

use crate::measures::AtomicMeasure;
use crate::spaces::{distance, Point, Space};
use crate::{Error, Result};

/// Slack under which candidates count as minimisers in
/// [`frechet_mean_set`].
pub const FRECHET_TOL: f64 = 1e-12;

/// `sum_i w_i x_i` for a measure on a Euclidean space.
pub fn barycenter(mu: &AtomicMeasure) -> Result<Point> {
    let Space::Euclidean { dim } = mu.space() else {
        return Err(Error::UnsupportedSpace { operation: "barycenter", kind: mu.space().kind_name() });
    };
    if mu.is_dirac() {
        return Ok(mu.point(0).clone());
    }
    let mut b = vec![0.0; *dim];
    for (p, w) in mu.atoms() {
        let Point::Vector(x) = p else { unreachable!("euclidean points are vectors") };
        for (acc, c) in b.iter_mut().zip(x) {
            *acc += w * c;
        }
    }
    Ok(Point::Vector(b))
}

/// `F_mu(x) = sum_i w_i d(x, x_i)^2`.
pub fn frechet_function(mu: &AtomicMeasure, x: &Point) -> Result<f64> {
    mu.atoms()
        .iter()
        .map(|(p, w)| {
            let d = distance(mu.space(), x, p)?;
            Ok(w * d * d)
        })
        .sum()
}

/// The candidates whose Fréchet value is within [`FRECHET_TOL`] of the
/// smallest one.
pub fn frechet_mean_set(mu: &AtomicMeasure, candidates: &[Point]) -> Result<Vec<Point>> {
    if candidates.is_empty() {
        return Err(Error::Precondition("no candidates".into()));
    }
    let values = candidates.iter().map(|c| frechet_function(mu, c)).collect::<Result<Vec<_>>>()?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(candidates.iter().zip(&values).filter(|(_, &v)| v <= min + FRECHET_TOL).map(|(c, _)| c.clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::FiniteMetric;

    fn plane(atoms: &[([f64; 2], f64)]) -> AtomicMeasure {
        let e = Space::euclidean(2).unwrap();
        AtomicMeasure::new(e, atoms.iter().map(|(x, w)| (Point::Vector(x.to_vec()), *w)).collect()).unwrap()
    }

    #[test]
    fn barycenters() {
        let m = plane(&[([0.0, 0.0], 1.0 / 3.0), ([1.0, 0.0], 2.0 / 3.0)]);
        let Point::Vector(b) = barycenter(&m).unwrap() else { panic!() };
        assert!((b[0] - 2.0 / 3.0).abs() < 1e-15 && b[1] == 0.0);
        let sq = plane(&[([0.0, 0.0], 0.25), ([2.0, 0.0], 0.25), ([0.0, 2.0], 0.25), ([2.0, 2.0], 0.25)]);
        assert_eq!(barycenter(&sq).unwrap(), Point::Vector(vec![1.0, 1.0]));
        let d = plane(&[([0.3, -2.0], 1.0)]);
        assert_eq!(barycenter(&d).unwrap(), Point::Vector(vec![0.3, -2.0]));
    }

    #[test]
    fn dirac_frechet_function_is_squared_distance() {
        let d = plane(&[([3.0, 4.0], 1.0)]);
        assert_eq!(frechet_function(&d, &Point::Vector(vec![0.0, 0.0])).unwrap(), 25.0);
    }

    #[test]
    fn barycenter_beats_its_grid_neighbourhood() {
        let m = plane(&[([0.0, 0.0], 0.2), ([1.0, 3.0], 0.5), ([-2.0, 1.0], 0.3)]);
        let Point::Vector(b) = barycenter(&m).unwrap() else { panic!() };
        let fb = frechet_function(&m, &Point::Vector(b.clone())).unwrap();
        for i in -10..=10 {
            for j in -10..=10 {
                let c = Point::Vector(vec![b[0] + 0.01 * i as f64, b[1] + 0.01 * j as f64]);
                assert!(frechet_function(&m, &c).unwrap() >= fb - 1e-15);
            }
        }
    }

    #[test]
    fn symmetric_two_point_space() {
        let s = Space::finite(FiniteMetric::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap());
        let m = AtomicMeasure::new(s, vec![(Point::Index(0), 0.5), (Point::Index(1), 0.5)]).unwrap();
        let set = frechet_mean_set(&m, &[Point::Index(0), Point::Index(1)]).unwrap();
        assert_eq!(set.len(), 2);
    }
}
