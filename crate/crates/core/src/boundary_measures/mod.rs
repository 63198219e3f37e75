//! Boundary behaviour of the sampling measure and the limit objects it
//! induces: the directional intensity `ν̂`, the functional `Λ(L)`, the
//! erosion measure `μ(K ∖ K⊖εL)` and the `t±` bounds.

mod density;
mod erosion_measure;
mod intensity;
mod reach;

pub use density::{
    BoundaryDensitySpec, BoundaryWeight, CarrierWeight, DensityKind, Normalization,
    SphericalWeight,
};
pub use erosion_measure::{
    erosion_mu, erosion_mu_exact, erosion_mu_mc, radial_shell_fraction, ErosionMeasure,
    MonteCarloPlan, MuMethod,
};
pub use intensity::{
    hemisphere_contained, lambda_functional, nu_hat, Atom, CustomDensity, DirectionalIntensity,
    SphericalTerm, CIRCLE_NODES, SPHERE_SAMPLES,
};
pub use reach::{t_bounds, ReachData};

pub(crate) use density::check_alpha;
