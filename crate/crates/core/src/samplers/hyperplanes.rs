use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::mu::{uniform_direction, REJECTION_CAP};
use crate::boundary_measures::{hemisphere_contained, DirectionalIntensity};
use crate::error::{Error, Result};
use crate::geometry::{AxisBox, HPolytope, Halfspace, VCompact, Vector};

/// Hyperplanes `{⟨x,u⟩ = t}` of a Poisson process with intensity
/// `t^α dt ⊗ ν̂`, restricted to `t <= R`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneBatch {
    pairs: Vec<(f64, Vector)>,
    radius: f64,
    alpha: f64,
}

impl HyperplaneBatch {
    pub fn new(pairs: Vec<(f64, Vector)>, radius: f64, alpha: f64) -> Result<Self> {
        for (t, u) in &pairs {
            if !(*t > 0.0 && *t <= radius) {
                return Err(Error::InvalidInput(format!("distance {t} outside (0, {radius}]")));
            }
            if (u.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("normal {u:?} is not a unit vector")));
            }
        }
        Ok(Self {
            pairs,
            radius,
            alpha,
        })
    }

    pub fn pairs(&self) -> &[(f64, Vector)] {
        &self.pairs
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether every sampled halfspace `⟨x,u⟩ <= t` contains `L`. Equals
    /// `L ⊆ Z` when `L ⊆ B_R(0)`, since farther hyperplanes miss `B_R`.
    pub fn contains_set(&self, l: &VCompact) -> bool {
        self.pairs.iter().all(|(t, u)| l.support(u) <= *t)
    }

    pub fn contains_point(&self, x: &Vector) -> bool {
        self.pairs.iter().all(|(t, u)| u.dot(x) <= *t)
    }

    /// The cell intersected with `window`, possibly empty when the window
    /// misses the origin.
    pub fn cell_in_box(&self, window: &AxisBox) -> Result<HPolytope> {
        let mut hs: Vec<Halfspace> = self
            .pairs
            .iter()
            .map(|(t, u)| Halfspace {
                normal: *u,
                offset: *t,
            })
            .collect();
        hs.extend_from_slice(window.to_polytope()?.halfspaces());
        HPolytope::region(window.dim(), hs)
    }
}

/// Radius beyond which a Poisson hyperplane of total mass `mass` appears
/// with probability below 1e-6.
pub fn default_radius(mass: f64, alpha: f64) -> f64 {
    ((1e6f64).ln() * (alpha + 1.0) / mass).powf(1.0 / (alpha + 1.0))
}

/// Reusable sampler of hyperplane batches for fixed `(ν̂, α, R)`.
#[derive(Clone, Debug)]
pub struct HyperplaneSampler {
    nu: DirectionalIntensity,
    alpha: f64,
    radius: f64,
    atom_cdf: Vec<f64>,
    atom_mass: f64,
    total_mass: f64,
    density_max: f64,
    poisson: Option<Poisson<f64>>,
}

impl HyperplaneSampler {
    pub fn new(nu: &DirectionalIntensity, alpha: f64, radius: f64) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "boundary exponent must satisfy alpha > -1 (got {alpha})"
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("radius {radius} must be positive")));
        }
        let density_max = if nu.spherical_mass() > 0.0 {
            nu.density_max().ok_or(Error::MissingDensityBound)?
        } else {
            0.0
        };
        let mut acc = 0.0;
        let atom_cdf = nu
            .atoms()
            .iter()
            .map(|a| {
                acc += a.weight;
                acc
            })
            .collect();
        let total_mass = nu.total_mass();
        let mean = total_mass * radius.powf(alpha + 1.0) / (alpha + 1.0);
        let poisson = if mean > 0.0 {
            Some(Poisson::new(mean).map_err(|e| Error::InvalidInput(e.to_string()))?)
        } else {
            None
        };
        Ok(Self {
            nu: nu.clone(),
            alpha,
            radius,
            atom_cdf,
            atom_mass: nu.atom_mass(),
            total_mass,
            density_max,
            poisson,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn intensity(&self) -> &DirectionalIntensity {
        &self.nu
    }

    /// Expected number of hyperplanes per batch.
    pub fn mean_count(&self) -> f64 {
        self.total_mass * self.radius.powf(self.alpha + 1.0) / (self.alpha + 1.0)
    }

    fn direction<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vector> {
        let x = rng.random::<f64>() * self.total_mass;
        if x < self.atom_mass {
            let i = self.atom_cdf.partition_point(|c| *c <= x);
            return Ok(self.nu.atoms()[i.min(self.atom_cdf.len() - 1)].direction);
        }
        let d = self.nu.dim();
        for _ in 0..REJECTION_CAP {
            let u = uniform_direction(d, rng);
            if rng.random::<f64>() * self.density_max < self.nu.density(&u) {
                return Ok(u);
            }
        }
        Err(Error::SamplerStall {
            attempts: REJECTION_CAP,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HyperplaneBatch> {
        let count = match &self.poisson {
            Some(p) => p.sample(rng) as usize,
            None => 0,
        };
        let inv = 1.0 / (self.alpha + 1.0);
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            let u01 = 1.0 - rng.random::<f64>();
            let t = (self.radius * u01.powf(inv)).max(f64::MIN_POSITIVE);
            pairs.push((t, self.direction(rng)?));
        }
        Ok(HyperplaneBatch {
            pairs,
            radius: self.radius,
            alpha: self.alpha,
        })
    }
}

pub fn sample_hyperplanes<R: Rng + ?Sized>(
    nu: &DirectionalIntensity,
    alpha: f64,
    radius: f64,
    rng: &mut R,
) -> Result<HyperplaneBatch> {
    HyperplaneSampler::new(nu, alpha, radius)?.sample(rng)
}

/// A zero-cell realization clipped to a window.
#[derive(Clone, Debug)]
pub struct ZeroCellSample {
    pub cell: HPolytope,
    pub truncated_by_window: bool,
    pub possibly_unbounded: bool,
}

/// `∩{⟨x,u⟩ <= t} ∩ window`. The cell is truncated when one of its vertices
/// lies on the window boundary.
pub fn zero_cell(
    batch: &HyperplaneBatch,
    window: &AxisBox,
    possibly_unbounded: bool,
) -> Result<ZeroCellSample> {
    let d = window.dim();
    if (0..d).any(|i| !(window.lo.get(i) < 0.0 && 0.0 < window.hi.get(i))) {
        return Err(Error::InvalidInput(
            "zero-cell window must contain the origin in its interior".into(),
        ));
    }
    let cell = batch.cell_in_box(window)?;
    let on_window = |v: &Vector| {
        (0..d).any(|i| {
            let (lo, hi) = (window.lo.get(i), window.hi.get(i));
            (v.get(i) - hi).abs() <= 1e-9 * hi.abs().max(1.0)
                || (v.get(i) - lo).abs() <= 1e-9 * lo.abs().max(1.0)
        })
    };
    let truncated_by_window = cell.vertices().iter().any(on_window);
    Ok(ZeroCellSample {
        cell,
        truncated_by_window,
        possibly_unbounded,
    })
}

/// Zero cells of `(ν̂, α)` inside a window, sampled with a radius large
/// enough that the clipped cell is exact.
#[derive(Clone, Debug)]
pub struct ZeroCellSampler {
    hyperplanes: HyperplaneSampler,
    window: AxisBox,
    possibly_unbounded: bool,
}

impl ZeroCellSampler {
    /// With no window, `[−R₀, R₀]^d` for the default radius `R₀`. The
    /// sampling radius is the larger of `R₀` and the farthest window point.
    pub fn new(nu: &DirectionalIntensity, alpha: f64, window: Option<AxisBox>) -> Result<Self> {
        let r0 = default_radius(nu.total_mass(), alpha);
        let window = window.unwrap_or_else(|| AxisBox::centered(nu.dim(), r0));
        if window.dim() != nu.dim() {
            return Err(Error::DimensionMismatch {
                expected: nu.dim(),
                found: window.dim(),
            });
        }
        let radius = r0.max(window.max_norm());
        Ok(Self {
            hyperplanes: HyperplaneSampler::new(nu, alpha, radius)?,
            window,
            possibly_unbounded: hemisphere_contained(nu),
        })
    }

    pub fn window(&self) -> &AxisBox {
        &self.window
    }

    pub fn radius(&self) -> f64 {
        self.hyperplanes.radius()
    }

    pub fn possibly_unbounded(&self) -> bool {
        self.possibly_unbounded
    }

    pub fn hyperplanes(&self) -> &HyperplaneSampler {
        &self.hyperplanes
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ZeroCellSample> {
        let batch = self.hyperplanes.sample(rng)?;
        zero_cell(&batch, &self.window, self.possibly_unbounded)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary_measures::Atom;
    use crate::geometry::polytope_volume;
    use crate::samplers::RngStream;
    use crate::stats::{ks_p_value, ks_statistic};

    fn square_nu() -> DirectionalIntensity {
        let atoms = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
            .into_iter()
            .map(|(x, y)| Atom {
                direction: Vector::new2(x, y),
                weight: 1.0,
            })
            .collect();
        DirectionalIntensity::new(2, atoms, vec![]).unwrap()
    }

    #[test]
    fn poisson_count_mean() {
        let s = HyperplaneSampler::new(&square_nu(), 0.0, 2.0).unwrap();
        assert_eq!(s.mean_count(), 8.0);
        let mut rng = RngStream::new(5, 0);
        let trials = 10_000;
        let total: usize = (0..trials).map(|_| s.sample(&mut rng).unwrap().len()).sum();
        let mean = total as f64 / trials as f64;
        assert!((mean - 8.0).abs() < 4.0 * (8.0f64 / trials as f64).sqrt(), "{mean}");
    }

    #[test]
    fn tiny_radius_gives_almost_only_empty_batches() {
        // nonempty draws ~ Poisson(10⁵ · 4·10⁻⁶ = 0.4); P(count >= 6) < 2e-5
        let s = HyperplaneSampler::new(&square_nu(), 0.0, 1e-6).unwrap();
        let mut rng = RngStream::new(6, 0);
        let nonempty = (0..100_000).filter(|_| !s.sample(&mut rng).unwrap().is_empty()).count();
        assert!(nonempty <= 5, "{nonempty}");
    }

    #[test]
    fn distance_marginal_ks() {
        for alpha in [-0.5, 0.0, 1.0] {
            let s = HyperplaneSampler::new(&square_nu(), alpha, 3.0).unwrap();
            let mut rng = RngStream::new(7, 0);
            let mut ts = Vec::new();
            while ts.len() < 100_000 {
                ts.extend(s.sample(&mut rng).unwrap().pairs().iter().map(|p| p.0));
            }
            let d = ks_statistic(&ts, |t| (t / 3.0).powf(alpha + 1.0).clamp(0.0, 1.0));
            assert!(ks_p_value(d, ts.len()) > 0.01, "alpha {alpha}: D = {d}");
        }
    }

    #[test]
    fn tangent_square_and_empty_batch() {
        let w = AxisBox::centered(2, 5.0);
        let empty = HyperplaneBatch::new(vec![], 5.0, 0.0).unwrap();
        let z = zero_cell(&empty, &w, false).unwrap();
        assert!(z.truncated_by_window);
        assert_eq!(polytope_volume(&z.cell).unwrap(), 100.0);
        let pairs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
            .into_iter()
            .map(|(x, y)| (1.0, Vector::new2(x, y)))
            .collect();
        let b = HyperplaneBatch::new(pairs, 5.0, 0.0).unwrap();
        let z = zero_cell(&b, &w, false).unwrap();
        assert!(!z.truncated_by_window);
        assert_eq!(z.cell.as_axis_box().unwrap(), (Vector::new2(-1.0, -1.0), Vector::new2(1.0, 1.0)));
    }

    #[test]
    fn origin_always_inside() {
        let zs = ZeroCellSampler::new(&square_nu(), 0.0, None).unwrap();
        let mut rng = RngStream::new(8, 0);
        for _ in 0..100_000 {
            let z = zs.sample(&mut rng).unwrap();
            assert!(z.cell.contains(&Vector::zeros(2)));
        }
    }

    #[test]
    fn missing_density_bound() {
        let nu = DirectionalIntensity::with_custom_density(2, vec![], |_| 1.0, 6.0, None).unwrap();
        assert_eq!(
            HyperplaneSampler::new(&nu, 0.0, 1.0).unwrap_err(),
            Error::MissingDensityBound
        );
    }
}
