//! Finitely supported probability measures.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::spaces::{distance_unchecked, Point, Space};
use crate::{math, Error, Result, COORD_TOL};

mod quantile;

pub use quantile::{from_quantile, to_quantile, QuantileFunction};

/// Slack on the total mass accepted before renormalisation.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// A probability measure with finitely many atoms.
///
/// Atoms keep their first-occurrence order; points closer than
/// [`COORD_TOL`] (exactly equal for indices and poles) are merged by adding
/// their weights, and the weights are divided by their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    space: Arc<Space>,
    atoms: Vec<(Point, f64)>,
}

impl AtomicMeasure {
    /// Builds a measure whose weights sum to one within [`WEIGHT_SUM_TOL`].
    /// Zero weights are dropped.
    pub fn new(space: impl Into<Arc<Space>>, atoms: Vec<(Point, f64)>) -> Result<Self> {
        Self::build(space.into(), atoms, true)
    }

    /// Like [`AtomicMeasure::new`] but accepts any positive total mass.
    pub fn from_unnormalized(space: impl Into<Arc<Space>>, atoms: Vec<(Point, f64)>) -> Result<Self> {
        Self::build(space.into(), atoms, false)
    }

    fn build(space: Arc<Space>, atoms: Vec<(Point, f64)>, check_sum: bool) -> Result<Self> {
        let mut merged: Vec<(Point, f64)> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidMeasure(format!("weight {w} is negative or not finite")));
            }
            space.contains(&p)?;
            if w == 0.0 {
                continue;
            }
            match merged.iter_mut().find(|(q, _)| q.approx_eq(&p, COORD_TOL)) {
                Some((_, acc)) => *acc += w,
                None => merged.push((p, w)),
            }
        }
        let total: f64 = merged.iter().map(|(_, w)| w).sum();
        if merged.is_empty() || !(total > 0.0) {
            return Err(Error::InvalidMeasure("measure has no mass".into()));
        }
        if check_sum && (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        if total != 1.0 {
            for (_, w) in &mut merged {
                *w /= total;
            }
        }
        Ok(AtomicMeasure { space, atoms: merged })
    }

    pub fn dirac(space: impl Into<Arc<Space>>, p: Point) -> Result<Self> {
        Self::build(space.into(), alloc::vec![(p, 1.0)], false)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn atoms(&self) -> &[(Point, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_dirac(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.atoms[i].0
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.atoms[i].1
    }

    /// Mass at `p` (zero off the support).
    pub fn mass_at(&self, p: &Point) -> f64 {
        self.atoms.iter().find(|(q, _)| q.approx_eq(p, COORD_TOL)).map_or(0.0, |(_, w)| *w)
    }

    /// Whether both measures live on equal spaces.
    pub fn same_space(&self, other: &AtomicMeasure) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    /// `f_# mu` on `target`. Colliding images are merged.
    pub fn push_forward<F>(&self, target: impl Into<Arc<Space>>, mut f: F) -> Result<AtomicMeasure>
    where
        F: FnMut(&Point) -> Result<Point>,
    {
        let atoms = self.atoms.iter().map(|(p, w)| Ok((f(p)?, *w))).collect::<Result<Vec<_>>>()?;
        Self::build(target.into(), atoms, false)
    }

    /// `sum_k c_k mu_k` with non-negative coefficients summing to one.
    pub fn mixture(parts: &[(&AtomicMeasure, f64)]) -> Result<AtomicMeasure> {
        let Some((first, _)) = parts.first() else {
            return Err(Error::InvalidMeasure("empty mixture".into()));
        };
        let mut total = 0.0;
        let mut atoms = Vec::new();
        for (m, c) in parts {
            if !(*c >= 0.0) {
                return Err(Error::InvalidMeasure(format!("mixture coefficient {c} is negative")));
            }
            if !m.same_space(first) {
                return Err(Error::SpaceMismatch);
            }
            total += c;
            atoms.extend(m.atoms.iter().map(|(p, w)| (p.clone(), w * c)));
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMeasure(format!("mixture coefficients sum to {total}")));
        }
        Self::build(first.space.clone(), atoms, false)
    }

    /// `(mu|_A / mu(A), mu(A))` for the region `A` given by `inside`.
    pub fn restrict_normalized<F>(&self, mut inside: F) -> Result<(AtomicMeasure, f64)>
    where
        F: FnMut(&Point) -> bool,
    {
        let atoms: Vec<(Point, f64)> = self.atoms.iter().filter(|(p, _)| inside(p)).cloned().collect();
        let mass: f64 = atoms.iter().map(|(_, w)| w).sum();
        if atoms.is_empty() {
            return Err(Error::Precondition("region has zero mass".into()));
        }
        Ok((Self::build(self.space.clone(), atoms, false)?, mass))
    }

    /// Coordinate push-forwards of a measure on a `q`-product.
    pub fn marginals(&self) -> Result<(AtomicMeasure, AtomicMeasure)> {
        let Space::QProduct { left, right, .. } = &*self.space else {
            return Err(Error::UnsupportedSpace { operation: "marginals", kind: self.space.kind_name() });
        };
        let first = |p: &Point| Ok(p.as_pair().expect("product point").0.clone());
        let second = |p: &Point| Ok(p.as_pair().expect("product point").1.clone());
        Ok((self.push_forward((**left).clone(), first)?, self.push_forward((**right).clone(), second)?))
    }

    /// `sum_i w_i d(base, x_i)^p`.
    pub fn p_moment(&self, base: &Point, p: f64) -> Result<f64> {
        self.space.contains(base)?;
        Ok(self.atoms.iter().map(|(x, w)| w * math::abs_pow(distance_unchecked(&self.space, base, x), p)).sum())
    }

    /// Equality as atom sets: every atom has a partner within `tol` in
    /// position and weight.
    pub fn approx_eq(&self, other: &AtomicMeasure, tol: f64) -> bool {
        self.same_space(other)
            && self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .all(|(p, w)| other.atoms.iter().any(|(q, v)| p.approx_eq(q, tol) && (w - v).abs() <= tol))
    }

    /// Total-variation distance `sup_A |mu(A) - nu(A)|`, atoms matched with
    /// [`COORD_TOL`].
    pub fn total_variation(&self, other: &AtomicMeasure) -> f64 {
        let mut diff: f64 = self.atoms.iter().map(|(p, w)| (w - other.mass_at(p)).abs()).sum();
        diff += other
            .atoms
            .iter()
            .filter(|(q, _)| !self.atoms.iter().any(|(p, _)| p.approx_eq(q, COORD_TOL)))
            .map(|(_, v)| v)
            .sum::<f64>();
        diff / 2.0
    }

    /// Deterministic total order on measures (used to orient symmetric
    /// computations).
    pub(crate) fn order_key(&self) -> Vec<f64> {
        let mut key = Vec::with_capacity(self.atoms.len() * 3);
        key.push(self.atoms.len() as f64);
        for (p, w) in &self.atoms {
            p.order_key(&mut key);
            key.push(*w);
        }
        key
    }
}
