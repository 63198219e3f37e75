use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::boundary_measures::{
    check_alpha, nu_hat, BoundaryDensitySpec, CarrierWeight, DensityKind, DirectionalIntensity,
    SphericalWeight,
};
use crate::error::{Error, Result};
use crate::geometry::{
    AxisBox, Ball, ComplementBody, Component, ConvexBody, HPolytope, Halfspace, SetModel,
    VCompact, Vector,
};
use crate::intersection_model::Window;

/// A bounded convex body in a config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub enum BodyConfig {
    Box { lo: Vector, hi: Vector },
    Ball { center: Vector, radius: f64 },
    Polytope { halfspaces: Vec<Halfspace> },
}

impl BodyConfig {
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            Self::Box { lo, hi } => Ok(ConvexBody::Polytope(HPolytope::axis_box(lo, hi)?)),
            Self::Ball { center, radius } => Ok(ConvexBody::Ball(Ball::new(*center, *radius)?)),
            Self::Polytope { halfspaces } => {
                let dim = halfspaces
                    .first()
                    .ok_or_else(|| Error::InvalidInput("polytope needs halfspaces".into()))?
                    .normal
                    .dim();
                let hs = halfspaces
                    .iter()
                    .map(|h| Halfspace::new(h.normal, h.offset))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ConvexBody::Polytope(HPolytope::new(dim, hs)?))
            }
        }
    }
}

/// One component of `K`: a body, or the closed complement of one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub enum ComponentConfig {
    Box { lo: Vector, hi: Vector },
    Ball { center: Vector, radius: f64 },
    Polytope { halfspaces: Vec<Halfspace> },
    Complement(BodyConfig),
}

impl ComponentConfig {
    pub fn build(&self) -> Result<Component> {
        let body = match self {
            Self::Box { lo, hi } => BodyConfig::Box { lo: *lo, hi: *hi },
            Self::Ball { center, radius } => BodyConfig::Ball {
                center: *center,
                radius: *radius,
            },
            Self::Polytope { halfspaces } => BodyConfig::Polytope {
                halfspaces: halfspaces.clone(),
            },
            Self::Complement(inner) => {
                return Ok(Component::Complement(ComplementBody::new(inner.build()?)?))
            }
        };
        Ok(Component::Body(body.build()?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SetModelConfig {
    pub components: Vec<ComponentConfig>,
    /// Required with more than one component.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
}

impl SetModelConfig {
    pub fn build(&self) -> Result<SetModel> {
        let comps = self
            .components
            .iter()
            .map(ComponentConfig::build)
            .collect::<Result<Vec<_>>>()?;
        match (comps.as_slice(), self.separation) {
            ([Component::Body(b)], None) => SetModel::single(b.clone()),
            (_, Some(sep)) => SetModel::new(comps, sep),
            (_, None) => Err(Error::InvalidInput(
                "a set model with a complement or several components needs a separation".into(),
            )),
        }
    }
}

fn constant_one() -> SphericalWeight {
    SphericalWeight::Constant(1.0)
}

/// The law of `μ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum DensityConfig {
    /// Uniform on `carriers` (all components when absent).
    #[serde(rename_all = "camelCase")]
    Uniform {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        carriers: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
    },
    #[serde(rename_all = "camelCase")]
    RadialPower {
        #[serde(default)]
        component: usize,
        alpha: f64,
        #[serde(default = "constant_one")]
        weight: SphericalWeight,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
    },
    #[serde(rename_all = "camelCase")]
    DistPower {
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
    },
    /// Boundary weights with a caller-chosen constant; analysable, not
    /// samplable.
    #[serde(rename_all = "camelCase")]
    Declared {
        density_kind: DensityKind,
        alpha: f64,
        carriers: Vec<CarrierWeight>,
        norm_constant: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<f64>,
    },
}

impl DensityConfig {
    pub fn build(&self, k: &SetModel) -> Result<BoundaryDensitySpec> {
        let (spec, mass) = match self {
            Self::Uniform { carriers, mass } => (
                match carriers {
                    Some(c) => BoundaryDensitySpec::uniform_on(k, c)?,
                    None => BoundaryDensitySpec::uniform(k)?,
                },
                mass,
            ),
            Self::RadialPower {
                component,
                alpha,
                weight,
                mass,
            } => (
                BoundaryDensitySpec::radial_power(k, *component, *alpha, weight.clone())?,
                mass,
            ),
            Self::DistPower { alpha, mass } => (BoundaryDensitySpec::dist_power(k, *alpha)?, mass),
            Self::Declared {
                density_kind,
                alpha,
                carriers,
                norm_constant,
                mass,
            } => (
                BoundaryDensitySpec::declared(
                    k,
                    *density_kind,
                    *alpha,
                    carriers.clone(),
                    *norm_constant,
                )?,
                mass,
            ),
        };
        match mass {
            Some(m) => spec.with_mass(*m),
            None => Ok(spec),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModelConfig {
    pub k: SetModelConfig,
    pub density: DensityConfig,
}

impl ModelConfig {
    pub fn build(&self) -> Result<(SetModel, BoundaryDensitySpec)> {
        let k = self.k.build()?;
        let spec = self.density.build(&k)?;
        Ok((k, spec))
    }
}

/// Where the zero-cell intensity comes from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub enum IntensityConfig {
    /// `ν̂` induced by a model, with the model's exponent.
    FromModel(ModelConfig),
    Explicit { nu: DirectionalIntensity, alpha: f64 },
}

impl IntensityConfig {
    pub fn build(&self) -> Result<(DirectionalIntensity, f64)> {
        match self {
            Self::FromModel(m) => {
                let (k, spec) = m.build()?;
                Ok((nu_hat(&k, &spec)?, spec.alpha()))
            }
            Self::Explicit { nu, alpha } => {
                check_alpha(*alpha)?;
                Ok((nu.clone(), *alpha))
            }
        }
    }
}

/// How an absolute tolerance scales along the sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AbsScale {
    #[default]
    Constant,
    /// `abs · sweepValue`.
    Sweep,
    /// `abs / sweepValue`.
    InverseSweep,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SeriesTolerance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_scale: Option<AbsScale>,
}

fn default_z() -> f64 {
    4.0
}

/// Pass thresholds: `|z| <= z` or `|estimate − reference| <= abs` (scaled
/// by `absScale`), with per-series overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_z")]
    pub z: f64,
    #[serde(default)]
    pub abs: f64,
    #[serde(default)]
    pub abs_scale: AbsScale,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, SeriesTolerance>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            z: default_z(),
            abs: 0.0,
            abs_scale: AbsScale::Constant,
            series: BTreeMap::new(),
        }
    }
}

/// Thresholds resolved for one row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub z: f64,
    pub abs: f64,
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let mut all = vec![(self.z, self.abs)];
        for s in self.series.values() {
            all.push((s.z.unwrap_or(self.z), s.abs.unwrap_or(self.abs)));
        }
        for (z, abs) in all {
            if !(z >= 0.0) || !(abs >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "tolerances must be nonnegative (z = {z}, abs = {abs})"
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, series: &str, sweep_value: f64) -> Threshold {
        let o = self.series.get(series).copied().unwrap_or_default();
        let abs = o.abs.unwrap_or(self.abs);
        let abs = match o.abs_scale.unwrap_or(self.abs_scale) {
            AbsScale::Constant => abs,
            AbsScale::Sweep => abs * sweep_value.abs(),
            AbsScale::InverseSweep => abs / sweep_value.abs(),
        };
        Threshold {
            z: o.z.unwrap_or(self.z),
            abs,
        }
    }
}

fn default_mc_samples() -> u64 {
    1_000_000
}

fn default_probes() -> u64 {
    10_000
}

/// Erosion measure path for `erosionLimit`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ErosionMethod {
    /// Closed form when available, Monte Carlo otherwise.
    #[default]
    Auto,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ErosionLimitConfig {
    pub name: String,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub model: ModelConfig,
    pub l: VCompact,
    /// Values of `ε`.
    pub sweep: Vec<f64>,
    #[serde(default)]
    pub method: ErosionMethod,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InclusionConvergenceConfig {
    pub name: String,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub model: ModelConfig,
    pub l: VCompact,
    /// Values of `n`.
    pub sweep: Vec<u64>,
    pub trials: u64,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ZeroCellSelfCheckConfig {
    pub name: String,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub intensity: IntensityConfig,
    /// Test sets `L`; rows are keyed by their radius about the origin.
    pub shapes: Vec<VCompact>,
    pub trials: u64,
    /// Window for the explicit cells; a default cube when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<AxisBox>,
}

/// Known value of `E V_d(Z ∩ W)^m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MomentReference {
    pub m: u32,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VolumeMomentsConfig {
    pub name: String,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub model: ModelConfig,
    /// Limit intensity; `ν̂` of the model when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity: Option<IntensityConfig>,
    /// Boxes in the scaled frame.
    pub window: Window,
    /// Values of `n`.
    pub sweep: Vec<u64>,
    pub orders: Vec<u32>,
    pub trials: u64,
    /// Trials for the zero-cell side; `trials` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_trials: Option<u64>,
    #[serde(default = "default_probes")]
    pub probes: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub references: Vec<MomentReference>,
}

fn default_two() -> usize {
    2
}

fn default_one() -> f64 {
    1.0
}

fn default_offset() -> f64 {
    5.0
}

fn default_half_width() -> f64 {
    10.0
}

/// `K = B_R(0) ∪ B_R(offset·e₁)` with `μ` uniform on the first ball, against
/// the single ball `B_R(0)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TwoBallAnomalyConfig {
    pub name: String,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_two")]
    pub dim: usize,
    #[serde(default = "default_one")]
    pub radius: f64,
    #[serde(default = "default_offset")]
    pub offset: f64,
    /// Values of `n`.
    pub sweep: Vec<u64>,
    pub trials: u64,
    #[serde(default = "default_probes")]
    pub probes: u64,
    /// Half-width of the window cube about each scaled component, in the
    /// scaled frame.
    #[serde(default = "default_half_width")]
    pub window_half_width: f64,
    /// Radii `ρ` of the balls `B_ρ` for the inclusion rows.
    #[serde(default)]
    pub inclusion_radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion_trials: Option<u64>,
}

fn default_ks_level() -> f64 {
    0.01
}

/// `K = [0, 1]`, `μ` uniform.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct D1ExactConfig {
    pub name: String,
    #[serde(default)]
    pub root_seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Values of `n`.
    pub sweep: Vec<u64>,
    pub trials: u64,
    /// Half-lengths `ρ` of `L = [−ρ, ρ]`.
    #[serde(default)]
    pub radii: Vec<f64>,
    /// Significance level of the KS rows.
    #[serde(default = "default_ks_level")]
    pub ks_level: f64,
}

/// One experiment, tagged by `kind`. Unknown top-level keys are ignored by
/// this derive; nested objects reject them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ExperimentConfig {
    ErosionLimit(ErosionLimitConfig),
    InclusionConvergence(InclusionConvergenceConfig),
    ZeroCellSelfCheck(ZeroCellSelfCheckConfig),
    VolumeMoments(VolumeMomentsConfig),
    TwoBallAnomaly(TwoBallAnomalyConfig),
    D1Exact(D1ExactConfig),
}

/// Kind tags accepted in the `kind` field.
pub const EXPERIMENT_KINDS: [&str; 6] = [
    "erosionLimit",
    "inclusionConvergence",
    "zeroCellSelfCheck",
    "volumeMoments",
    "twoBallAnomaly",
    "d1Exact",
];

fn check_sweep<T: PartialOrd + Copy + std::fmt::Debug>(sweep: &[T]) -> Result<()> {
    if sweep.is_empty() {
        return Err(Error::InvalidInput("sweep must be nonempty".into()));
    }
    let up = sweep.windows(2).all(|w| w[0] < w[1]);
    let down = sweep.windows(2).all(|w| w[0] > w[1]);
    if !up && !down {
        return Err(Error::InvalidInput(format!(
            "sweep must be strictly monotone, got {sweep:?}"
        )));
    }
    Ok(())
}

fn check_positive_n(sweep: &[u64]) -> Result<()> {
    check_sweep(sweep)?;
    if sweep.contains(&0) {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    Ok(())
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    Ok(())
}

fn check_l(l: &VCompact) -> Result<()> {
    match l {
        VCompact::Hull(vs) => VCompact::hull(vs.clone()).map(|_| ()),
        VCompact::Ball(b) => Ball::new(b.center, b.radius).map(|_| ()),
    }
}

fn check_box(b: &AxisBox) -> Result<()> {
    AxisBox::new(b.lo, b.hi).map(|_| ())
}

impl ExperimentConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::ErosionLimit(_) => EXPERIMENT_KINDS[0],
            Self::InclusionConvergence(_) => EXPERIMENT_KINDS[1],
            Self::ZeroCellSelfCheck(_) => EXPERIMENT_KINDS[2],
            Self::VolumeMoments(_) => EXPERIMENT_KINDS[3],
            Self::TwoBallAnomaly(_) => EXPERIMENT_KINDS[4],
            Self::D1Exact(_) => EXPERIMENT_KINDS[5],
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::ErosionLimit(c) => &c.name,
            Self::InclusionConvergence(c) => &c.name,
            Self::ZeroCellSelfCheck(c) => &c.name,
            Self::VolumeMoments(c) => &c.name,
            Self::TwoBallAnomaly(c) => &c.name,
            Self::D1Exact(c) => &c.name,
        }
    }

    pub fn root_seed(&self) -> u64 {
        match self {
            Self::ErosionLimit(c) => c.root_seed,
            Self::InclusionConvergence(c) => c.root_seed,
            Self::ZeroCellSelfCheck(c) => c.root_seed,
            Self::VolumeMoments(c) => c.root_seed,
            Self::TwoBallAnomaly(c) => c.root_seed,
            Self::D1Exact(c) => c.root_seed,
        }
    }

    pub fn set_root_seed(&mut self, seed: u64) {
        match self {
            Self::ErosionLimit(c) => c.root_seed = seed,
            Self::InclusionConvergence(c) => c.root_seed = seed,
            Self::ZeroCellSelfCheck(c) => c.root_seed = seed,
            Self::VolumeMoments(c) => c.root_seed = seed,
            Self::TwoBallAnomaly(c) => c.root_seed = seed,
            Self::D1Exact(c) => c.root_seed = seed,
        }
    }

    pub fn tolerances(&self) -> &Tolerances {
        match self {
            Self::ErosionLimit(c) => &c.tolerances,
            Self::InclusionConvergence(c) => &c.tolerances,
            Self::ZeroCellSelfCheck(c) => &c.tolerances,
            Self::VolumeMoments(c) => &c.tolerances,
            Self::TwoBallAnomaly(c) => &c.tolerances,
            Self::D1Exact(c) => &c.tolerances,
        }
    }

    /// Checks every field and builds every model, without sampling.
    pub fn validate(&self) -> Result<()> {
        // names become file stems and CSV labels
        let name = self.name();
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            || name.starts_with('.')
        {
            return Err(Error::InvalidInput(format!(
                "experiment name {name:?} must be nonempty ASCII letters, digits, '-', '_' or '.'"
            )));
        }
        self.tolerances().validate()?;
        match self {
            Self::ErosionLimit(c) => {
                let (k, _) = c.model.build()?;
                check_l(&c.l)?;
                check_dims(k.dim(), c.l.dim())?;
                check_sweep(&c.sweep)?;
                if c.sweep.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
                    return Err(Error::InvalidInput("ε values must be positive".into()));
                }
                check_trials(c.mc_samples)
            }
            Self::InclusionConvergence(c) => {
                let (k, _) = c.model.build()?;
                check_l(&c.l)?;
                check_dims(k.dim(), c.l.dim())?;
                check_positive_n(&c.sweep)?;
                check_trials(c.trials)?;
                check_trials(c.mc_samples)
            }
            Self::ZeroCellSelfCheck(c) => {
                let (nu, _) = c.intensity.build()?;
                if c.shapes.is_empty() {
                    return Err(Error::InvalidInput("shape list must be nonempty".into()));
                }
                for l in &c.shapes {
                    check_l(l)?;
                    check_dims(nu.dim(), l.dim())?;
                }
                if let Some(w) = &c.window {
                    check_box(w)?;
                    check_dims(nu.dim(), w.dim())?;
                }
                check_trials(c.trials)
            }
            Self::VolumeMoments(c) => {
                let (k, spec) = c.model.build()?;
                let nu = match &c.intensity {
                    Some(i) => i.build()?.0,
                    None => nu_hat(&k, &spec)?,
                };
                for b in c.window.boxes() {
                    check_box(b)?;
                }
                check_dims(k.dim(), c.window.dim())?;
                check_dims(k.dim(), nu.dim())?;
                check_positive_n(&c.sweep)?;
                if c.orders.is_empty() || c.orders.contains(&0) {
                    return Err(Error::InvalidInput(
                        "moment orders must be a nonempty list of positive integers".into(),
                    ));
                }
                check_trials(c.trials)?;
                check_trials(c.z_trials.unwrap_or(c.trials))?;
                check_trials(c.probes)
            }
            Self::TwoBallAnomaly(c) => {
                c.models()?;
                check_positive_n(&c.sweep)?;
                check_trials(c.trials)?;
                check_trials(c.probes)?;
                check_trials(c.inclusion_trials.unwrap_or(c.trials))?;
                if !(c.window_half_width > 0.0) || !c.window_half_width.is_finite() {
                    return Err(Error::InvalidInput("window half-width must be positive".into()));
                }
                for n in &c.sweep {
                    // uniform μ has γ = 1; both scaled windows must stay disjoint
                    if c.offset * *n as f64 <= 2.0 * c.window_half_width {
                        return Err(Error::InvalidInput(format!(
                            "windows of half-width {} overlap at n = {n}",
                            c.window_half_width
                        )));
                    }
                }
                if c.inclusion_radii.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
                    return Err(Error::InvalidInput("inclusion radii must be nonnegative".into()));
                }
                Ok(())
            }
            Self::D1Exact(c) => {
                check_positive_n(&c.sweep)?;
                check_trials(c.trials)?;
                if c.radii.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
                    return Err(Error::InvalidInput("radii must be nonnegative".into()));
                }
                if !(c.ks_level > 0.0 && c.ks_level < 1.0) {
                    return Err(Error::InvalidInput("ksLevel must lie in (0, 1)".into()));
                }
                Ok(())
            }
        }
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

impl TwoBallAnomalyConfig {
    /// `(K, μ on the first ball, single ball, uniform μ)`.
    pub fn models(
        &self,
    ) -> Result<(SetModel, BoundaryDensitySpec, SetModel, BoundaryDensitySpec)> {
        let d = self.dim;
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        if !(self.offset > 2.0 * self.radius) {
            return Err(Error::InvalidInput(format!(
                "offset {} must exceed the diameter {}",
                self.offset,
                2.0 * self.radius
            )));
        }
        let b0 = ConvexBody::Ball(Ball::new(Vector::zeros(d), self.radius)?);
        let b1 = ConvexBody::Ball(Ball::new(
            Vector::basis(d, 0).scale(self.offset),
            self.radius,
        )?);
        let k = SetModel::new(
            vec![Component::Body(b0.clone()), Component::Body(b1)],
            self.offset - 2.0 * self.radius,
        )?;
        let spec = BoundaryDensitySpec::uniform_on(&k, &[0])?;
        let single = SetModel::single(b0)?;
        let single_spec = BoundaryDensitySpec::uniform(&single)?;
        Ok((k, spec, single, single_spec))
    }
}
