//! Simulation and verification of intersections of randomly translated sets.
//!
//! For a host set `K` and i.i.d. points `ξ₁, …, ξₙ ~ μ` the random set
//! `Xₙ = ∩ᵢ (K − ξᵢ)`, rescaled by `n^γ` with `γ = 1/(α+1)`, converges in
//! distribution to the zero cell of a Poisson hyperplane tessellation whose
//! directional intensity is driven by the boundary behaviour of `μ`. This
//! crate provides the geometry, the boundary measures, samplers for both
//! sides of that limit, and experiment runners that check it numerically.

pub mod boundary_measures;
mod error;
pub mod experiments;
pub mod geometry;
pub mod intersection_model;
pub mod samplers;
pub mod stats;

pub use error::{Error, Result};
