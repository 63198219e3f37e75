//! The random set `Xₙ = ∩ᵢ (K − ξᵢ)`: scaled inclusion tests, explicit
//! realizations for polytopes, and volume moments of `Xₙ` and of the zero
//! cell `Z` in a window.
//!
//! Trial `t` of any estimator draws from `RngStream::new(root_seed, t)`, so
//! results do not depend on how trials are scheduled.

mod inclusion;
mod moments;
mod realize;

pub use inclusion::{
    closed_form_inclusion, empirical_inclusion, trial_includes, InclusionEstimate,
    InclusionSetup, InclusionTrialResult,
};
pub use moments::{volume_moment, volume_moments, MomentEstimate, MomentModel, VolumeSampler, Window};
pub use realize::{realize_xn, XnRealization};
