//! Exact discrete optimal transport over structured metric spaces.
//!
//! The crate models finitely supported probability measures on a small
//! family of metric spaces (rays, intervals, Euclidean spaces, finite metric
//! spaces, `q`-products and spherical suspensions) and computes `W_p`
//! distances between them exactly, by solving the transportation problem with
//! a network simplex. On top of the solver sit displacement interpolation,
//! midpoint checks, and a set of constructions used to probe the isometry
//! group of Wasserstein spaces:
//!
//! * [`spaces`]: points, metric spaces, geodesics, projections and the
//!   discrete general-position conditions.
//! * [`measures`]: atomic measures, push-forwards, mixtures and 1-D quantile
//!   functions.
//! * [`transport`]: the exact solver, the 1-D quantile fast path, cyclical
//!   monotonicity and adjacency diagnostics.
//! * [`interpolation`]: Wasserstein geodesics, midpoints and rays.
//! * [`rigidity`]: ray formulas, the two-atom chart, exotic isometries,
//!   Fréchet means, and the cylinder/suspension counterexample builders.
//!
//! Everything is `no_std` with `alloc`; all values are immutable after
//! construction and every operation is a pure function.

#![no_std]
#![warn(missing_debug_implementations)]
// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod interpolation;
mod math;
pub mod measures;
pub mod rigidity;
pub mod spaces;
pub mod transport;

pub use error::{Error, Result};
pub use interpolation::{displacement_interpolate, verify_intermediate, verify_midpoint, WassersteinPath};
pub use measures::{AtomicMeasure, QuantileFunction};
pub use spaces::{distance, FiniteMetric, Geodesic, Point, Space, SuspPoint};
pub use transport::{solve_wp, wp_1d, TransportPlan};

/// Absolute tolerance used when comparing continuous coordinates of atoms.
pub const COORD_TOL: f64 = 1e-12;
