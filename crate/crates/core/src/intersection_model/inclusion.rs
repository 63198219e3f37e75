use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary_measures::{erosion_mu, BoundaryDensitySpec, MonteCarloPlan};
use crate::error::{Error, Result};
use crate::geometry::{erode, ErosionRegion, SetModel, VCompact};
use crate::samplers::{MuSampler, RngStream};
use crate::stats::{wilson_interval, Estimate};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InclusionTrialResult {
    pub included: bool,
    pub n: u64,
    pub gamma_used: f64,
    /// Indices found outside `K ⊖ n^{-γ}L` before stopping (0 or 1).
    pub failures: u64,
}

/// The erosion `K ⊖ n^{-γ}L` and the sampler of `μ`, shared by all trials.
#[derive(Clone, Debug)]
pub struct InclusionSetup {
    region: ErosionRegion,
    sampler: MuSampler,
    n: u64,
    gamma: f64,
}

impl InclusionSetup {
    pub fn new(k: &SetModel, spec: &BoundaryDensitySpec, l: &VCompact, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let gamma = spec.gamma();
        let region = erode(k, l, (n as f64).powf(-gamma))?;
        Ok(Self {
            region,
            sampler: MuSampler::new(k, spec)?,
            n,
            gamma,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `L ⊆ n^γ Xₙ`, i.e. every `ξᵢ` lies in `K ⊖ n^{-γ}L`; stops at the first
    /// point outside.
    pub fn trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<InclusionTrialResult> {
        for _ in 0..self.n {
            if !self.region.contains(&self.sampler.sample(rng)?) {
                return Ok(InclusionTrialResult {
                    included: false,
                    n: self.n,
                    gamma_used: self.gamma,
                    failures: 1,
                });
            }
        }
        Ok(InclusionTrialResult {
            included: true,
            n: self.n,
            gamma_used: self.gamma,
            failures: 0,
        })
    }
}

pub fn trial_includes<R: Rng + ?Sized>(
    l: &VCompact,
    k: &SetModel,
    spec: &BoundaryDensitySpec,
    n: u64,
    rng: &mut R,
) -> Result<InclusionTrialResult> {
    InclusionSetup::new(k, spec, l, n)?.trial(rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InclusionEstimate {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    /// Wilson score interval at z = 1.96.
    pub wilson95: (f64, f64),
}

/// Frequency of `L ⊆ n^γ Xₙ` over `trials` independent streams.
pub fn empirical_inclusion(
    l: &VCompact,
    k: &SetModel,
    spec: &BoundaryDensitySpec,
    n: u64,
    trials: u64,
    root_seed: u64,
) -> Result<InclusionEstimate> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let setup = InclusionSetup::new(k, spec, l, n)?;
    let hits: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| Ok(setup.trial(&mut RngStream::new(root_seed, t))?.included))
        .collect::<Result<_>>()?;
    let successes = hits.iter().filter(|h| **h).count() as u64;
    Ok(InclusionEstimate {
        successes,
        trials,
        p_hat: successes as f64 / trials as f64,
        wilson95: wilson_interval(successes, trials, 1.96),
    })
}

/// `(1 − μ(K ∖ K⊖n^{-γ}L))ⁿ`, with the delta-method error
/// `n (1 − μ̂)^{n−1} · se(μ̂)` when the erosion measure is estimated.
pub fn closed_form_inclusion(
    k: &SetModel,
    spec: &BoundaryDensitySpec,
    l: &VCompact,
    n: u64,
    plan: &MonteCarloPlan,
) -> Result<Estimate> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let eps = (n as f64).powf(-spec.gamma());
    let mu = erosion_mu(k, spec, l, eps, plan)?;
    let nf = n as f64;
    if mu.value >= 1.0 {
        return Ok(Estimate {
            value: 0.0,
            stderr: if n == 1 { mu.stderr } else { 0.0 },
        });
    }
    let value = (nf * (-mu.value).ln_1p()).exp();
    let stderr = nf * ((nf - 1.0) * (-mu.value).ln_1p()).exp() * mu.stderr;
    Ok(Estimate { value, stderr })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ConvexBody, HPolytope, Vector};

    fn interval() -> SetModel {
        SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new1(0.0), &Vector::new1(1.0)).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn point_always_included() {
        let k = interval();
        let spec = BoundaryDensitySpec::uniform(&k).unwrap();
        let est = empirical_inclusion(&VCompact::origin(1), &k, &spec, 50, 200, 3).unwrap();
        assert_eq!(est.successes, 200);
    }

    #[test]
    fn interval_oracle_per_trial() {
        let k = interval();
        let spec = BoundaryDensitySpec::uniform(&k).unwrap();
        let rho = 0.7;
        let n = 20;
        let l = VCompact::interval(rho);
        let setup = InclusionSetup::new(&k, &spec, &l, n).unwrap();
        let sampler = MuSampler::new(&k, &spec).unwrap();
        for t in 0..2000 {
            let got = setup.trial(&mut RngStream::new(9, t)).unwrap().included;
            let mut rng = RngStream::new(9, t);
            let mut all = true;
            for _ in 0..n {
                let x = sampler.sample(&mut rng).unwrap().get(0);
                if !(x >= rho / n as f64 && x <= 1.0 - rho / n as f64) {
                    all = false;
                    break;
                }
            }
            assert_eq!(got, all);
        }
    }

    #[test]
    fn closed_forms() {
        let k = interval();
        let spec = BoundaryDensitySpec::uniform(&k).unwrap();
        let plan = MonteCarloPlan::default();
        let v = closed_form_inclusion(&k, &spec, &VCompact::interval(0.5), 100, &plan).unwrap();
        assert!((v.value - (1.0 - 1.0 / 100.0f64).powi(100)).abs() < 1e-14);
        let one = closed_form_inclusion(&k, &spec, &VCompact::interval(0.0), 100, &plan).unwrap();
        assert_eq!(one.value, 1.0);
        let sq = SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap(),
        ))
        .unwrap();
        let spec = BoundaryDensitySpec::uniform(&sq).unwrap();
        let l = VCompact::centered_ball(2, 0.25).unwrap();
        let v = closed_form_inclusion(&sq, &spec, &l, 1000, &plan).unwrap();
        assert!((v.value - (1.0 - 0.5 / 1000.0f64).powi(2000)).abs() < 1e-12);
    }

    #[test]
    fn unit_ball_with_one_point_never_included() {
        let sq = SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap(),
        ))
        .unwrap();
        let spec = BoundaryDensitySpec::uniform(&sq).unwrap();
        let l = VCompact::centered_ball(2, 1.0).unwrap();
        let est = empirical_inclusion(&l, &sq, &spec, 1, 500, 1).unwrap();
        assert_eq!(est.successes, 0);
    }

    #[test]
    fn wilson_for_single_forced_success() {
        let k = interval();
        let spec = BoundaryDensitySpec::uniform(&k).unwrap();
        let est = empirical_inclusion(&VCompact::origin(1), &k, &spec, 1, 1, 0).unwrap();
        assert_eq!(est.p_hat, 1.0);
        assert!((est.wilson95.0 - 0.2065).abs() < 1e-3 && est.wilson95.1 == 1.0);
    }
}
