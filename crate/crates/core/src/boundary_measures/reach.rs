//! Two-sided bounds `t₊(ε) <= t₋(ε)` on how far the eroded boundary moves
//! along a normal, from reach data at a boundary point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inner and outer touching-ball radii at a boundary point, a bound `r`
/// with `L ⊆ B_r(0)`, and `h = h(L, −u)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReachData {
    delta_plus: f64,
    delta_minus: f64,
    r_bound: f64,
    h: f64,
}

impl ReachData {
    pub fn new(delta_plus: f64, delta_minus: f64, r_bound: f64, h: f64) -> Result<Self> {
        for (name, v) in [("deltaPlus", delta_plus), ("deltaMinus", delta_minus), ("rBound", r_bound)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if !(h.abs() <= r_bound) {
            return Err(Error::InvalidInput(format!("|h| = {} exceeds rBound {r_bound}", h.abs())));
        }
        Ok(Self {
            delta_plus,
            delta_minus,
            r_bound,
            h,
        })
    }

    pub fn delta_plus(&self) -> f64 {
        self.delta_plus
    }

    pub fn delta_minus(&self) -> f64 {
        self.delta_minus
    }

    pub fn r_bound(&self) -> f64 {
        self.r_bound
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Upper end of the admissible range `0 < ε < min(δ₊, δ₋, 1)/r`.
    pub fn eps_max(&self) -> f64 {
        self.delta_plus.min(self.delta_minus).min(1.0) / self.r_bound
    }
}

/// `(t₊(ε), t₋(ε))`. With `q = ε²(r² − h²)`:
/// `t₋ = (εh + δ₋ − √(δ₋² − q))⁺` and `t₊ = (εh − δ₊ + √(δ₊² − q))⁺`,
/// where `δ − √(δ² − q)` is evaluated as `q / (δ + √(δ² − q))`.
pub fn t_bounds(eps: f64, rd: &ReachData) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps < rd.eps_max()) {
        return Err(Error::DomainError(format!(
            "eps = {eps} outside (0, {})",
            rd.eps_max()
        )));
    }
    let q = eps * eps * (rd.r_bound * rd.r_bound - rd.h * rd.h);
    let eh = eps * rd.h;
    let gap = |delta: f64| q / (delta + (delta * delta - q).sqrt());
    let t_minus = (eh + gap(rd.delta_minus)).max(0.0);
    let t_plus = (eh - gap(rd.delta_plus)).max(0.0);
    Ok((t_plus, t_minus))
}
