//! Config-driven convergence studies. Each run turns a limit statement into
//! a finite sweep of rows, each with a pass/fail verdict that depends only
//! on the row and the configured thresholds.

mod config;
mod runners;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use config::{
    AbsScale, BodyConfig, ComponentConfig, D1ExactConfig, DensityConfig, ErosionLimitConfig,
    ErosionMethod, ExperimentConfig, InclusionConvergenceConfig, IntensityConfig, ModelConfig,
    MomentReference, SeriesTolerance, SetModelConfig, Threshold, Tolerances,
    TwoBallAnomalyConfig, VolumeMomentsConfig, ZeroCellSelfCheckConfig, EXPERIMENT_KINDS,
};
pub use runners::{
    run_d1_exact, run_erosion_limit, run_experiment, run_inclusion_convergence,
    run_two_ball_anomaly, run_volume_moments, run_zero_cell_self_check,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResultRow {
    /// `"<experiment name>:<series>"`.
    pub experiment: String,
    pub sweep_value: f64,
    pub estimate: f64,
    pub standard_error: f64,
    pub reference: f64,
    /// `NaN` when the standard error is zero.
    pub z_score: f64,
    pub passed: bool,
    pub seed: u64,
    pub trials: u64,
}

/// `(zScore, passed)`: `|z| <= threshold.z` for a positive standard error,
/// or `|estimate − reference| <= threshold.abs`.
pub fn verdict(estimate: f64, standard_error: f64, reference: f64, threshold: Threshold) -> (f64, bool) {
    let dev = estimate - reference;
    let z = if standard_error > 0.0 {
        dev / standard_error
    } else {
        f64::NAN
    };
    let passed = (z.is_finite() && z.abs() <= threshold.z) || dev.abs() <= threshold.abs;
    (z, passed)
}

impl ResultRow {
    /// The series part of the experiment label.
    pub fn series(&self) -> &str {
        self.experiment
            .split_once(':')
            .map_or("", |(_, s)| s)
    }
}

/// Scalar side information of a run, such as boundedness flags.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Diagnostic {
    Flag(bool),
    Value(f64),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub diagnostics: BTreeMap<String, Diagnostic>,
}

impl ExperimentOutput {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.diagnostics.get(key) {
            Some(Diagnostic::Flag(b)) => Some(*b),
            _ => None,
        }
    }
}
