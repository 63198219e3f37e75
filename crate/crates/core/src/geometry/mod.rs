//! Convex bodies, separated unions, Minkowski erosion and volumes in
//! dimensions 1 to 3.
//!
//! All values are immutable after construction; operations are pure.

mod body;
mod erosion;
pub mod hull;
mod polytope;
pub mod tolerance;
mod vector;
mod volume;

pub use body::{Ball, ComplementBody, Component, ConvexBody, SetModel, VCompact};
pub use erosion::{contains_set, erode, ErosionRegion, ExactErosion};
pub use hull::in_closed_hemisphere;
pub use polytope::{HPolytope, Halfspace, RegionStatus};
pub use vector::{Vector, MAX_DIM};
pub use volume::{
    intrinsic_volumes_2d, polygon_vertices, polytope_volume, unit_ball_volume, unit_sphere_area,
    volume_exact, volume_mc, AxisBox, SamplingWindow,
};

pub(crate) use erosion::contains_set_unchecked;
pub(crate) use vector::check_dim;
