use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::boundary_measures::{
    BoundaryDensitySpec, BoundaryWeight, DensityKind, Normalization, SphericalWeight,
};
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, Component, ConvexBody, SetModel, Vector};

/// Attempts allowed to a rejection loop before it reports a stall.
pub const REJECTION_CAP: u64 = 1_000_000;

/// Uniform direction on the unit sphere (`±1` in d = 1).
pub fn uniform_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vector {
    if dim == 1 {
        return Vector::new1(if rng.random::<bool>() { 1.0 } else { -1.0 });
    }
    loop {
        let g = Vector::from_fn(dim, |_| rng.sample(StandardNormal));
        let n = g.norm();
        if n > 1e-12 {
            return g.scale(1.0 / n);
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    /// Uniform on the union of `bodies` by rejection from `window`.
    Rejection {
        window: AxisBox,
        bodies: Vec<ConvexBody>,
    },
    /// `c + (R − t) u` with `t/R ~ Beta(α+1, d)` and `u` drawn from the
    /// normalized spherical weight.
    Radial {
        center: Vector,
        radius: f64,
        beta: Beta<f64>,
        weight: SphericalWeight,
    },
}

/// Sampler for a supported `(K, spec)` pair, built once and reused.
#[derive(Clone, Debug)]
pub struct MuSampler {
    dim: usize,
    kind: Kind,
}

impl MuSampler {
    pub fn new(k: &SetModel, spec: &BoundaryDensitySpec) -> Result<Self> {
        if spec.normalization() == Normalization::Declared {
            return Err(Error::UnsupportedSpec(
                "a declared density only fixes boundary weights and cannot be sampled".into(),
            ));
        }
        let dim = k.dim();
        let kind = match spec.kind() {
            DensityKind::DistPowerPolytope if spec.alpha() != 0.0 => {
                return Err(Error::UnsupportedSpec(
                    "distance power sampling on polytopes needs alpha = 0".into(),
                ))
            }
            DensityKind::Uniform | DensityKind::DistPowerPolytope => {
                let mut bodies = Vec::new();
                let mut lo = Vector::from_fn(dim, |_| f64::INFINITY);
                let mut hi = Vector::from_fn(dim, |_| f64::NEG_INFINITY);
                for c in spec.carriers() {
                    let Some(Component::Body(b)) = k.components().get(c.component) else {
                        return Err(Error::SpecMismatch(format!(
                            "component {} cannot carry a uniform measure",
                            c.component
                        )));
                    };
                    let (blo, bhi) = b.bounding_box();
                    for i in 0..dim {
                        lo.set(i, lo.get(i).min(blo.get(i)));
                        hi.set(i, hi.get(i).max(bhi.get(i)));
                    }
                    bodies.push(b.clone());
                }
                Kind::Rejection {
                    window: AxisBox::new(lo, hi)?,
                    bodies,
                }
            }
            DensityKind::RadialPowerBall => {
                let carrier = &spec.carriers()[0];
                let (Some(Component::Body(ConvexBody::Ball(ball))), BoundaryWeight::Sphere(w)) =
                    (k.components().get(carrier.component), &carrier.weight)
                else {
                    return Err(Error::SpecMismatch(
                        "radial power density needs a ball with a spherical weight".into(),
                    ));
                };
                Kind::Radial {
                    center: ball.center,
                    radius: ball.radius,
                    beta: Beta::new(spec.alpha() + 1.0, dim as f64)
                        .map_err(|e| Error::InvalidInput(e.to_string()))?,
                    weight: w.clone(),
                }
            }
        };
        Ok(Self { dim, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vector> {
        match &self.kind {
            Kind::Rejection { window, bodies } => {
                for _ in 0..REJECTION_CAP {
                    let x = window.sample(rng);
                    if bodies.iter().any(|b| b.contains(&x)) {
                        return Ok(x);
                    }
                }
                Err(Error::SamplerStall {
                    attempts: REJECTION_CAP,
                })
            }
            Kind::Radial {
                center,
                radius,
                beta,
                weight,
            } => {
                let s: f64 = beta.sample(rng);
                let u = weighted_direction(self.dim, weight, rng)?;
                Ok(*center + u.scale(radius * (1.0 - s)))
            }
        }
    }
}

fn weighted_direction<R: Rng + ?Sized>(
    dim: usize,
    w: &SphericalWeight,
    rng: &mut R,
) -> Result<Vector> {
    let max = w.max();
    if let SphericalWeight::Constant(_) = w {
        return Ok(uniform_direction(dim, rng));
    }
    for _ in 0..REJECTION_CAP {
        let u = uniform_direction(dim, rng);
        if rng.random::<f64>() * max < w.eval(&u) {
            return Ok(u);
        }
    }
    Err(Error::SamplerStall {
        attempts: REJECTION_CAP,
    })
}

/// One draw from `μ`.
pub fn sample_mu<R: Rng + ?Sized>(
    k: &SetModel,
    spec: &BoundaryDensitySpec,
    rng: &mut R,
) -> Result<Vector> {
    MuSampler::new(k, spec)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, HPolytope};
    use crate::samplers::RngStream;
    use crate::stats::{ks_p_value, ks_statistic};

    fn disk() -> SetModel {
        SetModel::single(ConvexBody::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap())).unwrap()
    }

    #[test]
    fn uniform_square_mean() {
        let k = SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap(),
        ))
        .unwrap();
        let s = MuSampler::new(&k, &BoundaryDensitySpec::uniform(&k).unwrap()).unwrap();
        let mut rng = RngStream::new(1, 0);
        let n = 1_000_000;
        let mut m = [0.0; 2];
        for _ in 0..n {
            let x = s.sample(&mut rng).unwrap();
            m[0] += x.get(0);
            m[1] += x.get(1);
        }
        let sigma = (1.0f64 / 12.0).sqrt();
        for v in m {
            assert!((v / n as f64 - 0.5).abs() < 4.0 * sigma / 1e3);
        }
    }

    #[test]
    fn uniform_disk_radial_cdf() {
        let k = disk();
        let s = MuSampler::new(&k, &BoundaryDensitySpec::uniform(&k).unwrap()).unwrap();
        let mut rng = RngStream::new(2, 0);
        let r: Vec<f64> = (0..100_000).map(|_| s.sample(&mut rng).unwrap().norm()).collect();
        let d = ks_statistic(&r, |x| (x * x).clamp(0.0, 1.0));
        assert!(ks_p_value(d, r.len()) > 0.01, "D = {d}");
    }

    #[test]
    fn radial_alpha_one_mean_distance() {
        // t = 1 − |ξ| has density ∝ r^{d−1} t^α = (1 − t) t
        let k = disk();
        let spec = BoundaryDensitySpec::radial_power(&k, 0, 1.0, SphericalWeight::Constant(1.0)).unwrap();
        let n_q = 200_000;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n_q {
            let t = (i as f64 + 0.5) / n_q as f64;
            num += t * (1.0 - t) * t;
            den += (1.0 - t) * t;
        }
        let oracle = num / den;
        let s = MuSampler::new(&k, &spec).unwrap();
        let mut rng = RngStream::new(3, 0);
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| 1.0 - s.sample(&mut rng).unwrap().norm()).collect();
        let est = crate::stats::Estimate::from_samples(&xs);
        assert!((est.value - oracle).abs() < 4.0 * est.stderr, "{est:?} vs {oracle}");
    }

    #[test]
    fn cap_weight_restricts_directions() {
        let k = disk();
        let w = SphericalWeight::Cap {
            axis: Vector::new2(0.0, 1.0),
            half_angle: std::f64::consts::FRAC_PI_2,
            value: 1.0,
        };
        let spec = BoundaryDensitySpec::radial_power(&k, 0, 0.0, w).unwrap();
        let s = MuSampler::new(&k, &spec).unwrap();
        let mut rng = RngStream::new(4, 0);
        for _ in 0..10_000 {
            assert!(s.sample(&mut rng).unwrap().get(1) >= 0.0);
        }
    }

    #[test]
    fn unsupported_pairs() {
        let k = SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap(),
        ))
        .unwrap();
        let spec = BoundaryDensitySpec::dist_power(&k, 1.0).unwrap();
        assert!(matches!(MuSampler::new(&k, &spec), Err(Error::UnsupportedSpec(_))));
    }
}
