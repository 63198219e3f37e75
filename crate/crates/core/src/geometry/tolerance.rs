//! Numerical tolerances used across the geometry code.
//!
//! | constant | value | used for |
//! |----------|-------|----------|
//! | [`UNIT_NORM`] | 1e-12 | unit-normal check, duplicate-normal merge |
//! | [`FEASIBILITY`] | 1e-9 | vertex feasibility, incidence, separation axes |
//! | [`DETERMINANT`] | 1e-12 | singular linear systems |
//! | [`STATIONARITY`] | 1e-9 | alternating-projection distance |
//!
//! Membership predicates for Minkowski differences (`contains_set`, erosion
//! regions, realized intersections) compare without slack, so that the exact
//! and oracle code paths agree bit for bit and inclusion probabilities carry
//! no tolerance bias.

pub const UNIT_NORM: f64 = 1e-12;
pub const FEASIBILITY: f64 = 1e-9;
pub const DETERMINANT: f64 = 1e-12;
pub const STATIONARITY: f64 = 1e-9;
