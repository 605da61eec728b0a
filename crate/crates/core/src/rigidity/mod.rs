//! Constructions that probe the isometry group of `P_p(X)`: the ray family
//! and its closed forms, the two-atom chart, exotic isometries, Fréchet
//! means, and the cylinder and suspension counterexamples.

mod chart;
mod cylinder;
mod frechet;
mod isometry;
mod ray;
mod suspension;

pub use chart::{
    compare_delta2, delta2_distance, delta2_distance_squared, delta2_distance_squared_plus_sign, Delta2Chart,
    Delta2Comparison,
};
pub use cylinder::{
    base_projection, cylinder_branching_experiment, cylinder_i_membership, fiber_argmin_margin, lift, CylinderBranching,
};
pub use frechet::{barycenter, frechet_function, frechet_mean_set, FRECHET_TOL};
pub use isometry::{exotic_isometry, verify_isometry, BaseMotion, IsometryCandidate, LinearIsometry, ORTHOGONALITY_TOL};
pub use ray::{sigma_distance, sigma_distance_to_dirac1, sigma_w1_claim_witness, ClaimWitness, SigmaMeasure};
pub use suspension::{
    meridian_projection_pushforward, meridian_separates, pole_mixture, project_onto_meridian, suspension_two_midpoints,
    TwoMidpoints,
};
