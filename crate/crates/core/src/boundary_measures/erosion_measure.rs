//! `μ(K ∖ K⊖εL)`: closed forms for a whitelist of shapes, Monte Carlo
//! otherwise.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::{BoundaryDensitySpec, DensityKind, Normalization};
use crate::error::{Error, Result};
use crate::geometry::{
    check_dim, erode, polytope_volume, unit_ball_volume, Component, ConvexBody, HPolytope,
    Halfspace, SetModel, VCompact, Vector,
};
use crate::samplers::{MuSampler, RngStream};

/// Points drawn per Monte Carlo chunk; each chunk owns one stream.
const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MuMethod {
    Exact,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ErosionMeasure {
    pub value: f64,
    pub stderr: f64,
    pub method: MuMethod,
}

/// Sample budget and seed of a Monte Carlo erosion estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MonteCarloPlan {
    pub samples: u64,
    pub root_seed: u64,
}

impl Default for MonteCarloPlan {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            root_seed: 0,
        }
    }
}

/// `μ(K ∖ K⊖εL)`, exact when the shape is whitelisted, Monte Carlo otherwise.
pub fn erosion_mu(
    k: &SetModel,
    spec: &BoundaryDensitySpec,
    l: &VCompact,
    eps: f64,
    plan: &MonteCarloPlan,
) -> Result<ErosionMeasure> {
    match erosion_mu_exact(k, spec, l, eps)? {
        Some(value) => Ok(ErosionMeasure {
            value,
            stderr: 0.0,
            method: MuMethod::Exact,
        }),
        None => erosion_mu_mc(k, spec, l, eps, plan),
    }
}

fn is_flat(spec: &BoundaryDensitySpec) -> bool {
    match spec.kind() {
        DensityKind::Uniform => true,
        DensityKind::DistPowerPolytope => spec.alpha() == 0.0,
        DensityKind::RadialPowerBall => false,
    }
}

fn is_origin_ball(l: &VCompact) -> Option<f64> {
    match l {
        VCompact::Ball(b) if b.center.norm_squared() == 0.0 => Some(b.radius),
        VCompact::Hull(vs) if vs.iter().all(|v| v.norm_squared() == 0.0) => Some(0.0),
        _ => None,
    }
}

/// Closed form of `μ(K ∖ K⊖εL)` for whitelisted `(K, L, spec)`:
/// axis boxes and polytopes under a flat density with any `L`, balls under
/// a flat or radial-power density with `L` a ball about the origin, and
/// disjoint unions of those under a flat density. `None` otherwise.
pub fn erosion_mu_exact(
    k: &SetModel,
    spec: &BoundaryDensitySpec,
    l: &VCompact,
    eps: f64,
) -> Result<Option<f64>> {
    check_dim(k.dim(), l.dim())?;
    // validates the scale and the separation precondition
    erode(k, l, eps)?;
    if spec.normalization() == Normalization::Declared {
        return Ok(None);
    }
    if eps == 0.0 {
        return Ok(Some(0.0));
    }
    let mass = spec.mass();
    if spec.kind() == DensityKind::RadialPowerBall {
        let (Some(r), Some(ConvexBody::Ball(b))) = (is_origin_ball(l), k.as_single_body()) else {
            return Ok(None);
        };
        let s = (eps * r).min(b.radius);
        return Ok(Some(mass * radial_shell_fraction(k.dim(), spec.alpha(), b.radius, s)));
    }
    if !is_flat(spec) {
        return Ok(None);
    }
    if let Some(ConvexBody::Polytope(p)) = k.as_single_body() {
        if let Some((lo, hi)) = p.as_axis_box() {
            let mut kept = 1.0;
            for i in 0..k.dim() {
                let side = hi.get(i) - lo.get(i);
                let a = lo.get(i) + (eps * l.support(&-Vector::basis(k.dim(), i))).max(0.0);
                let b = hi.get(i) - (eps * l.support(&Vector::basis(k.dim(), i))).max(0.0);
                kept *= ((b - a) / side).max(0.0);
            }
            return Ok(Some(mass * (1.0 - kept)));
        }
    }
    let mut total = 0.0;
    let mut lost = 0.0;
    for carrier in spec.carriers() {
        let Component::Body(body) = &k.components()[carrier.component] else {
            return Ok(None);
        };
        match body {
            ConvexBody::Polytope(p) => {
                let vol = polytope_volume(p)?;
                let kept = polytope_volume(&p.intersect(&eroded_polytope(p, l, eps))?)?;
                total += vol;
                lost += (vol - kept).max(0.0);
            }
            ConvexBody::Ball(b) => {
                let Some(r) = is_origin_ball(l) else {
                    return Ok(None);
                };
                let d = k.dim() as i32;
                let vol = unit_ball_volume(k.dim()) * b.radius.powi(d);
                let inner = (b.radius - eps * r).max(0.0);
                total += vol;
                lost += vol * (1.0 - (inner / b.radius).powi(d));
            }
        }
    }
    Ok(Some(mass * lost / total))
}

fn eroded_polytope(p: &HPolytope, l: &VCompact, eps: f64) -> HPolytope {
    let hs = p
        .halfspaces()
        .iter()
        .map(|h| Halfspace {
            normal: h.normal,
            offset: h.offset - eps * l.support(&h.normal),
        })
        .collect();
    HPolytope::from_canonical(p.dim(), hs)
}

/// Fraction of a radial-power measure on `B_R` within distance `s` of the
/// sphere: `∫₀ˢ (R−t)^{d−1} t^α dt / ∫₀ᴿ (R−t)^{d−1} t^α dt`.
pub fn radial_shell_fraction(dim: usize, alpha: f64, radius: f64, s: f64) -> f64 {
    let partial = |s: f64| -> f64 {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for j in 0..dim {
            let e = alpha + j as f64 + 1.0;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * radius.powi((dim - 1 - j) as i32) * s.powf(e) / e;
            binom = binom * (dim - 1 - j) as f64 / (j + 1) as f64;
        }
        acc
    };
    (partial(s) / partial(radius)).clamp(0.0, 1.0)
}

/// Monte Carlo estimate: the fraction of `μ`-samples outside `K⊖εL`, in
/// chunks of fixed size with one stream per chunk.
pub fn erosion_mu_mc(
    k: &SetModel,
    spec: &BoundaryDensitySpec,
    l: &VCompact,
    eps: f64,
    plan: &MonteCarloPlan,
) -> Result<ErosionMeasure> {
    if plan.samples == 0 {
        return Err(Error::InvalidInput("Monte Carlo needs at least one sample".into()));
    }
    let region = erode(k, l, eps)?;
    let sampler = MuSampler::new(k, spec)?;
    let chunks = plan.samples.div_ceil(CHUNK);
    let misses: Vec<u64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(plan.root_seed, c);
            let len = CHUNK.min(plan.samples - c * CHUNK);
            let mut miss = 0u64;
            for _ in 0..len {
                if !region.contains(&sampler.sample(&mut rng)?) {
                    miss += 1;
                }
            }
            Ok(miss)
        })
        .collect::<Result<_>>()?;
    let miss: u64 = misses.iter().sum();
    let n = plan.samples as f64;
    let p = miss as f64 / n;
    Ok(ErosionMeasure {
        value: spec.mass() * p,
        stderr: spec.mass() * (p * (1.0 - p) / n).sqrt(),
        method: MuMethod::MonteCarlo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;

    fn square() -> SetModel {
        SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap(),
        ))
        .unwrap()
    }

    fn disk() -> SetModel {
        SetModel::single(ConvexBody::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap())).unwrap()
    }

    #[test]
    fn box_and_disk_closed_forms() {
        let l = VCompact::centered_ball(2, 1.0).unwrap();
        let plan = MonteCarloPlan::default();
        let sq = erosion_mu(&square(), &BoundaryDensitySpec::uniform(&square()).unwrap(), &l, 0.1, &plan)
            .unwrap();
        assert_eq!(sq.method, MuMethod::Exact);
        assert!((sq.value - 0.36).abs() < 1e-15);
        let dk = erosion_mu(&disk(), &BoundaryDensitySpec::uniform(&disk()).unwrap(), &l, 0.1, &plan)
            .unwrap();
        assert_eq!(dk.method, MuMethod::Exact);
        assert!((dk.value - 0.19).abs() < 1e-15);
        let zero = erosion_mu(&disk(), &BoundaryDensitySpec::uniform(&disk()).unwrap(), &l, 0.0, &plan)
            .unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn radial_shell_matches_quadrature() {
        // d = 2, α = 1: density ∝ r(1−r) in the radius
        let s: f64 = 0.3;
        let f = radial_shell_fraction(2, 1.0, 1.0, s);
        let n = 100_000;
        let h = s / n as f64;
        let mut num = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) * h;
            num += (1.0 - t) * t * h;
        }
        assert!((f - num * 6.0).abs() < 1e-9, "{f}");
        assert_eq!(radial_shell_fraction(3, 0.5, 2.0, 2.0), 1.0);
    }

    #[test]
    fn polygon_path_matches_box_path() {
        let tri_free = HPolytope::region(
            2,
            vec![
                Halfspace::new(Vector::new2(1.0, 0.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(-1.0, 0.0), 0.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, 1.0), 1.0).unwrap(),
                Halfspace::new(Vector::new2(0.0, -1.0), 0.0).unwrap(),
                Halfspace::new(Vector::new2(1.0, 1.0), 5.0).unwrap(),
            ],
        )
        .unwrap();
        let k = SetModel::single(ConvexBody::Polytope(tri_free)).unwrap();
        let spec = BoundaryDensitySpec::uniform(&k).unwrap();
        let l = VCompact::centered_ball(2, 1.0).unwrap();
        let v = erosion_mu_exact(&k, &spec, &l, 0.1).unwrap().unwrap();
        assert!((v - 0.36).abs() < 1e-12);
    }

    #[test]
    fn mc_agrees_with_exact() {
        let k = disk();
        let spec = BoundaryDensitySpec::uniform(&k).unwrap();
        let l = VCompact::centered_ball(2, 1.0).unwrap();
        let plan = MonteCarloPlan {
            samples: 200_000,
            root_seed: 7,
        };
        let mc = erosion_mu_mc(&k, &spec, &l, 0.1, &plan).unwrap();
        assert!((mc.value - 0.19).abs() < 4.0 * mc.stderr, "{mc:?}");
    }
}
