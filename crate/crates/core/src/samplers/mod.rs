//! Random generation: points from `μ`, Poisson hyperplane batches and zero
//! cells, all driven by addressable seed streams.

mod hyperplanes;
mod mu;
mod stream;

pub use hyperplanes::{
    default_radius, sample_hyperplanes, zero_cell, HyperplaneBatch, HyperplaneSampler,
    ZeroCellSample, ZeroCellSampler,
};
pub use mu::{sample_mu, uniform_direction, MuSampler, REJECTION_CAP};
pub use stream::{derive_seed, RngStream};
