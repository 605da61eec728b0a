//! Isometries of Wasserstein spaces over `H x_2 Y`: push-forwards of base
//! motions and the exotic maps that rotate each measure about its own
//! barycenter.

use alloc::format;
use alloc::vec::Vec;

use super::frechet::barycenter;
use crate::measures::AtomicMeasure;
use crate::spaces::{Point, Space};
use crate::transport::solve_wp;
use crate::{Error, Result};

/// Tolerance of the orthogonality check `psi^T psi = I`.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// An orthogonal matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearIsometry {
    dim: usize,
    matrix: Vec<f64>,
}

impl LinearIsometry {
    pub fn new(dim: usize, matrix: Vec<f64>) -> Result<Self> {
        if dim == 0 || matrix.len() != dim * dim {
            return Err(Error::Precondition(format!("expected a {dim}x{dim} matrix, got {} entries", matrix.len())));
        }
        for i in 0..dim {
            for j in 0..dim {
                let dot: f64 = (0..dim).map(|k| matrix[k * dim + i] * matrix[k * dim + j]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (dot - expected).abs() > ORTHOGONALITY_TOL {
                    return Err(Error::Precondition(format!("matrix is not orthogonal: (psi^T psi)[{i}][{j}] = {dot}")));
                }
            }
        }
        Ok(LinearIsometry { dim, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        let mut matrix = alloc::vec![0.0; dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = 1.0;
        }
        LinearIsometry { dim, matrix }
    }

    /// Counter-clockwise rotation of the plane by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        LinearIsometry { dim: 2, matrix: alloc::vec![c, -s, s, c] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| (0..self.dim).map(|k| self.matrix[i * self.dim + k] * v[k]).sum()).collect()
    }
}

fn euclidean_product(space: &Space, operation: &'static str) -> Result<(usize, f64)> {
    match space {
        Space::QProduct { left, q, .. } => match **left {
            Space::Euclidean { dim } => Ok((dim, *q)),
            _ => Err(Error::UnsupportedSpace { operation, kind: left.kind_name() }),
        },
        _ => Err(Error::UnsupportedSpace { operation, kind: space.kind_name() }),
    }
}

fn split(p: &Point) -> (&[f64], &Point) {
    match p {
        Point::Pair(h, y) => match &**h {
            Point::Vector(h) => (h, y),
            _ => unreachable!("euclidean factor holds vectors"),
        },
        _ => unreachable!("product points are pairs"),
    }
}

/// `Psi_psi(mu)`: with `b` the barycenter of the first marginal, every atom
/// `((h, y), w)` moves to `((b + psi(h - b), y), w)`.
///
/// Needs `mu` on `Euclidean x_2 Y` and `psi` of matching dimension.
pub fn exotic_isometry(psi: &LinearIsometry, mu: &AtomicMeasure) -> Result<AtomicMeasure> {
    let (dim, q) = euclidean_product(mu.space(), "exotic_isometry")?;
    if q != 2.0 {
        return Err(Error::Precondition(format!("exotic isometries need q = 2, got {q}")));
    }
    if psi.dim() != dim {
        return Err(Error::Precondition(format!("psi acts on R^{}, the factor is R^{dim}", psi.dim())));
    }
    if mu.is_dirac() {
        return Ok(mu.clone());
    }
    let (h_marginal, _) = mu.marginals()?;
    let Point::Vector(b) = barycenter(&h_marginal)? else { unreachable!() };
    mu.push_forward(mu.space_arc().clone(), |p| {
        let (h, y) = split(p);
        let shifted: Vec<f64> = h.iter().zip(&b).map(|(x, c)| x - c).collect();
        let image: Vec<f64> = psi.apply(&shifted).iter().zip(&b).map(|(x, c)| x + c).collect();
        Ok(Point::pair(Point::Vector(image), y.clone()))
    })
}

/// A motion of `Euclidean x_q Finite`: `(h, y) -> (psi h + shift, perm[y])`,
/// where `perm` (empty for the identity) must preserve the finite metric.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseMotion {
    pub linear: LinearIsometry,
    pub shift: Vec<f64>,
    pub permutation: Vec<usize>,
}

impl BaseMotion {
    pub fn apply(&self, space: &Space, p: &Point) -> Result<Point> {
        let (dim, _) = euclidean_product(space, "base motion")?;
        if self.linear.dim() != dim || self.shift.len() != dim {
            return Err(Error::Precondition("motion dimension does not match the euclidean factor".into()));
        }
        let (h, y) = split(p);
        let image: Vec<f64> = self.linear.apply(h).iter().zip(&self.shift).map(|(x, s)| x + s).collect();
        let y = match (y, self.permutation.is_empty()) {
            (_, true) => y.clone(),
            (Point::Index(i), false) => Point::Index(self.permutation[*i]),
            _ => return Err(Error::Precondition("permutations act on finite factors only".into())),
        };
        Ok(Point::pair(Point::Vector(image), y))
    }

    fn check(&self, space: &Space) -> Result<()> {
        if self.permutation.is_empty() {
            return Ok(());
        }
        let Space::QProduct { right, .. } = space else { unreachable!() };
        let Space::Finite(m) = &**right else {
            return Err(Error::Precondition("permutations act on finite factors only".into()));
        };
        let mut seen = alloc::vec![false; m.len()];
        if self.permutation.len() != m.len() || self.permutation.iter().any(|&k| k >= m.len() || core::mem::replace(&mut seen[k], true)) {
            return Err(Error::Precondition("not a permutation of the finite factor".into()));
        }
        for i in 0..m.len() {
            for j in 0..m.len() {
                if (m.get(i, j) - m.get(self.permutation[i], self.permutation[j])).abs() > 1e-12 {
                    return Err(Error::Precondition("permutation does not preserve the finite metric".into()));
                }
            }
        }
        Ok(())
    }
}

/// A map on measures whose isometry property is to be tested.
#[derive(Debug, Clone, PartialEq)]
pub enum IsometryCandidate {
    PushForward(BaseMotion),
    Exotic(LinearIsometry),
}

impl IsometryCandidate {
    pub fn apply(&self, mu: &AtomicMeasure) -> Result<AtomicMeasure> {
        match self {
            IsometryCandidate::PushForward(motion) => {
                motion.check(mu.space())?;
                mu.push_forward(mu.space_arc().clone(), |p| motion.apply(mu.space(), p))
            }
            IsometryCandidate::Exotic(psi) => exotic_isometry(psi, mu),
        }
    }
}

/// `max |W_p(Phi mu, Phi nu) - W_p(mu, nu)|` over the given pairs.
pub fn verify_isometry(candidate: &IsometryCandidate, pairs: &[(AtomicMeasure, AtomicMeasure)], p: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (mu, nu) in pairs {
        let before = solve_wp(mu, nu, p)?.0;
        let after = solve_wp(&candidate.apply(mu)?, &candidate.apply(nu)?, p)?.0;
        worst = worst.max((after - before).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::FiniteMetric;
    use alloc::vec;
    use core::f64::consts::FRAC_PI_2;

    fn product() -> Space {
        let y = FiniteMetric::new(3, vec![0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
        Space::qproduct(Space::euclidean(2).unwrap(), Space::finite(y), 2.0).unwrap()
    }

    fn at(h: [f64; 2], y: usize) -> Point {
        Point::pair(Point::Vector(h.to_vec()), Point::Index(y))
    }

    #[test]
    fn rejects_non_orthogonal() {
        assert!(LinearIsometry::new(2, vec![1.0, 0.0, 0.0, 2.0]).is_err());
        assert!(LinearIsometry::new(2, vec![0.0, -1.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn witness_rotation() {
        let mu = AtomicMeasure::new(product(), vec![(at([0.0, 0.0], 1), 1.0 / 3.0), (at([1.0, 0.0], 1), 2.0 / 3.0)]).unwrap();
        let psi = LinearIsometry::new(2, vec![0.0, -1.0, 1.0, 0.0]).unwrap();
        let image = exotic_isometry(&psi, &mu).unwrap();
        // (2/3) v - (2/3) psi(v) with v = (1, 0), psi(v) = (0, 1).
        assert!((image.mass_at(&at([2.0 / 3.0, -2.0 / 3.0], 1)) - 1.0 / 3.0).abs() < 1e-12);
        assert_ne!(image, mu);
        assert_eq!(exotic_isometry(&LinearIsometry::identity(2), &mu).unwrap(), mu);
    }

    #[test]
    fn diracs_are_fixed() {
        let d = AtomicMeasure::dirac(product(), at([0.4, -1.0], 2)).unwrap();
        assert_eq!(exotic_isometry(&LinearIsometry::rotation(FRAC_PI_2), &d).unwrap(), d);
    }

    #[test]
    fn base_motion_is_an_isometry() {
        let s = product();
        let mu = AtomicMeasure::new(s.clone(), vec![(at([0.0, 0.0], 0), 0.5), (at([1.0, 2.0], 1), 0.5)]).unwrap();
        let nu = AtomicMeasure::new(s, vec![(at([3.0, 0.0], 2), 0.25), (at([-1.0, 1.0], 0), 0.75)]).unwrap();
        let motion = BaseMotion { linear: LinearIsometry::rotation(0.3), shift: vec![1.0, -2.0], permutation: vec![2, 0, 1] };
        let d = verify_isometry(&IsometryCandidate::PushForward(motion), &[(mu, nu)], 3.0).unwrap();
        assert!(d < 1e-12);
    }
}
