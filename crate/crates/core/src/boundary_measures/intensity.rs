//! The directional intensity `ν̂` on the unit sphere and the functional
//! `Λ(L) = ∫ (h(L,u)⁺)^{α+1}/(α+1) ν̂(du)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::density::{BoundaryDensitySpec, BoundaryWeight, SphericalWeight};
use crate::error::{Error, Result};
use crate::geometry::{
    in_closed_hemisphere, Component, ConvexBody, SetModel, VCompact, Vector,
};
use crate::samplers::uniform_direction;
use crate::stats::Estimate;

/// Angles of the d = 2 quadrature grid.
pub const CIRCLE_NODES: usize = 4096;
/// Directions used for the d = 3 Monte Carlo quadrature.
pub const SPHERE_SAMPLES: u64 = 1_000_000;
const SPHERE_SEED: u64 = 0x5EED_1A4B_DA00_0003;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub direction: Vector,
    pub weight: f64,
}

/// Density `coefficient · weight(u)` against surface measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalTerm {
    pub coefficient: f64,
    pub weight: SphericalWeight,
}

impl SphericalTerm {
    #[inline]
    fn eval(&self, u: &Vector) -> f64 {
        self.coefficient * self.weight.eval(u)
    }

    /// Density on the support arc, where the weight is at its maximum.
    fn eval_on_support(&self) -> f64 {
        self.coefficient * self.weight.max()
    }

    fn mass(&self, dim: usize) -> f64 {
        self.coefficient * self.weight.integral(dim)
    }

    /// Support arc `(start, length)` of the term on the circle, if nonzero.
    fn arc(&self) -> Option<(f64, f64)> {
        if self.coefficient == 0.0 {
            return None;
        }
        match &self.weight {
            SphericalWeight::Constant(v) => (*v > 0.0).then_some((-PI, TAU)),
            SphericalWeight::Cap {
                axis,
                half_angle,
                value,
            } => (*value > 0.0).then(|| {
                let phi = axis.get(1).atan2(axis.get(0));
                (phi - half_angle, 2.0 * half_angle)
            }),
        }
    }
}

/// A caller-supplied density on the sphere.
#[derive(Clone)]
pub struct CustomDensity {
    f: Arc<dyn Fn(&Vector) -> f64 + Send + Sync>,
    total_mass: f64,
    max: Option<f64>,
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("total_mass", &self.total_mass)
            .field("max", &self.max)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct IntensityRepr {
    dim: usize,
    #[serde(default)]
    atoms: Vec<Atom>,
    #[serde(default)]
    spherical: Vec<SphericalTerm>,
}

/// Finite measure on the unit sphere: atoms plus an optional density.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "IntensityRepr", into = "IntensityRepr")]
pub struct DirectionalIntensity {
    dim: usize,
    atoms: Vec<Atom>,
    terms: Vec<SphericalTerm>,
    custom: Option<CustomDensity>,
}

impl TryFrom<IntensityRepr> for DirectionalIntensity {
    type Error = Error;
    fn try_from(r: IntensityRepr) -> Result<Self> {
        Self::new(r.dim, r.atoms, r.spherical)
    }
}

impl From<DirectionalIntensity> for IntensityRepr {
    fn from(n: DirectionalIntensity) -> Self {
        Self {
            dim: n.dim,
            atoms: n.atoms,
            spherical: n.terms,
        }
    }
}

impl DirectionalIntensity {
    /// Atoms and weighted spherical terms. In d = 1 the sphere is `{±1}` and
    /// spherical terms become atoms.
    pub fn new(dim: usize, atoms: Vec<Atom>, terms: Vec<SphericalTerm>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut out = Self {
            dim,
            atoms: Vec::with_capacity(atoms.len()),
            terms: Vec::new(),
            custom: None,
        };
        for a in atoms {
            out.push_atom(a)?;
        }
        for t in terms {
            if !(t.coefficient >= 0.0) || !t.coefficient.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "density coefficient {} must be >= 0",
                    t.coefficient
                )));
            }
            t.weight.validate(dim)?;
            if dim == 1 {
                for s in [1.0, -1.0] {
                    let u = Vector::new1(s);
                    out.push_atom(Atom {
                        direction: u,
                        weight: t.eval(&u),
                    })?;
                }
            } else if t.mass(dim) > 0.0 {
                out.terms.push(t);
            }
        }
        out.check_mass()?;
        Ok(out)
    }

    /// Atoms plus an arbitrary density with known total mass. Sampling needs
    /// `max`, an upper bound of `density`.
    pub fn with_custom_density(
        dim: usize,
        atoms: Vec<Atom>,
        density: impl Fn(&Vector) -> f64 + Send + Sync + 'static,
        total_mass: f64,
        max: Option<f64>,
    ) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut out = Self {
            dim,
            atoms: Vec::with_capacity(atoms.len()),
            terms: Vec::new(),
            custom: None,
        };
        for a in atoms {
            out.push_atom(a)?;
        }
        if !(total_mass > 0.0) || !total_mass.is_finite() {
            return Err(Error::InvalidInput(format!(
                "spherical total mass {total_mass} must be positive"
            )));
        }
        out.custom = Some(CustomDensity {
            f: Arc::new(density),
            total_mass,
            max,
        });
        out.check_mass()?;
        Ok(out)
    }

    fn push_atom(&mut self, a: Atom) -> Result<()> {
        if a.direction.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.direction.dim(),
            });
        }
        if (a.direction.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "atom direction {:?} is not a unit vector",
                a.direction
            )));
        }
        if !(a.weight >= 0.0) || !a.weight.is_finite() {
            return Err(Error::InvalidInput(format!("atom weight {} must be >= 0", a.weight)));
        }
        if a.weight > 0.0 {
            self.atoms.push(a);
        }
        Ok(())
    }

    fn check_mass(&self) -> Result<()> {
        let m = self.total_mass();
        if m > 0.0 && m.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "directional intensity total mass must be positive and finite (got {m})"
            )))
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn spherical_terms(&self) -> &[SphericalTerm] {
        &self.terms
    }

    pub fn has_custom_density(&self) -> bool {
        self.custom.is_some()
    }

    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn spherical_mass(&self) -> f64 {
        self.terms.iter().map(|t| t.mass(self.dim)).sum::<f64>()
            + self.custom.as_ref().map_or(0.0, |c| c.total_mass)
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.spherical_mass()
    }

    /// Density of the continuous part at `u`.
    #[inline]
    pub fn density(&self, u: &Vector) -> f64 {
        self.terms.iter().map(|t| t.eval(u)).sum::<f64>()
            + self.custom.as_ref().map_or(0.0, |c| (c.f)(u))
    }

    /// Declared upper bound of `density`, `None` if a custom density has none.
    pub fn density_max(&self) -> Option<f64> {
        let terms: f64 = self
            .terms
            .iter()
            .map(|t| t.coefficient * t.weight.max())
            .sum();
        match &self.custom {
            None => Some(terms),
            Some(c) => c.max.map(|m| m + terms),
        }
    }
}

/// `ν̂` of a boundary density: facets become atoms `(u, g_F · |F|)`, balls
/// a density `g(c + ρu) ρ^{d−1}`; complements use the normals of the
/// closure of the complement.
pub fn nu_hat(k: &SetModel, spec: &BoundaryDensitySpec) -> Result<DirectionalIntensity> {
    let dim = k.dim();
    let scale = spec.g_scale();
    let mut atoms = Vec::new();
    let mut terms = Vec::new();
    for carrier in spec.carriers() {
        let component = k.components().get(carrier.component).ok_or_else(|| {
            Error::SpecMismatch(format!("no component with index {}", carrier.component))
        })?;
        let (body, sign) = match component {
            Component::Body(b) => (b, 1.0),
            Component::Complement(c) => (c.inner(), -1.0),
        };
        match (body, &carrier.weight) {
            (ConvexBody::Polytope(p), w) => {
                for (i, h) in p.halfspaces().iter().enumerate() {
                    let wi = match w {
                        BoundaryWeight::Facets(ws) => *ws.get(i).ok_or_else(|| {
                            Error::SpecMismatch(format!(
                                "no weight for facet {i} of component {}",
                                carrier.component
                            ))
                        })?,
                        BoundaryWeight::Sphere(s) => s.eval(&h.normal.scale(sign)),
                    };
                    let weight = scale * wi * p.facet_measure(i)?;
                    if weight > 0.0 {
                        atoms.push(Atom {
                            direction: h.normal.scale(sign),
                            weight,
                        });
                    }
                }
            }
            (ConvexBody::Ball(b), BoundaryWeight::Sphere(s)) => {
                let coefficient = scale * b.radius.powi(dim as i32 - 1);
                // a complement's outward normal at c − ρu is u, so `s` applies as is
                terms.push(SphericalTerm {
                    coefficient,
                    weight: s.clone(),
                });
            }
            (ConvexBody::Ball(_), BoundaryWeight::Facets(_)) => {
                return Err(Error::SpecMismatch(format!(
                    "component {} is a ball but carries per-facet weights",
                    carrier.component
                )))
            }
        }
    }
    DirectionalIntensity::new(dim, atoms, terms)
}

#[inline]
fn integrand(l: &VCompact, u: &Vector, alpha: f64) -> f64 {
    let h = l.support(u);
    if h > 0.0 {
        h.powf(alpha + 1.0) / (alpha + 1.0)
    } else {
        0.0
    }
}

/// `Λ(L)`. Exact over atoms; composite trapezoid on each support arc in
/// d = 2; Monte Carlo over uniform directions in d = 3, with its standard
/// error.
pub fn lambda_functional(nu: &DirectionalIntensity, l: &VCompact, alpha: f64) -> Result<Estimate> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!(
            "boundary exponent must satisfy alpha > -1 (got {alpha})"
        )));
    }
    if l.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            expected: nu.dim(),
            found: l.dim(),
        });
    }
    let mut value: f64 = nu
        .atoms
        .iter()
        .map(|a| a.weight * integrand(l, &a.direction, alpha))
        .sum();
    let mut stderr = 0.0;
    match nu.dim {
        1 => {
            if let Some(c) = &nu.custom {
                for s in [1.0, -1.0] {
                    let u = Vector::new1(s);
                    value += (c.f)(&u) * integrand(l, &u, alpha);
                }
            }
        }
        2 => {
            for t in &nu.terms {
                if let Some((start, len)) = t.arc() {
                    value += circle_quadrature(start, len, |u| t.eval_on_support() * integrand(l, u, alpha));
                }
            }
            if let Some(c) = &nu.custom {
                value += circle_quadrature(-PI, TAU, |u| (c.f)(u) * integrand(l, u, alpha));
            }
        }
        _ => {
            if !nu.terms.is_empty() || nu.custom.is_some() {
                let mut rng = ChaCha8Rng::seed_from_u64(SPHERE_SEED);
                let (mut s, mut s2) = (0.0, 0.0);
                for _ in 0..SPHERE_SAMPLES {
                    let u = uniform_direction(3, &mut rng);
                    let f = nu.density(&u) * integrand(l, &u, alpha);
                    s += f;
                    s2 += f * f;
                }
                let n = SPHERE_SAMPLES as f64;
                let mean = s / n;
                let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
                let area = 4.0 * PI;
                value += area * mean;
                stderr = area * (var / n).sqrt();
            }
        }
    }
    Ok(Estimate { value, stderr })
}

#[inline]
fn circle_point(theta: f64) -> Vector {
    Vector::new2(theta.cos(), theta.sin())
}

/// Trapezoid rule over the arc `[start, start + len]`; periodic when the
/// arc is the full circle.
fn circle_quadrature(start: f64, len: f64, f: impl Fn(&Vector) -> f64) -> f64 {
    let n = CIRCLE_NODES;
    let h = len / n as f64;
    if len >= TAU {
        return h * (0..n).map(|i| f(&circle_point(start + i as f64 * h))).sum::<f64>();
    }
    let mut acc = 0.5 * (f(&circle_point(start)) + f(&circle_point(start + len)));
    for i in 1..n {
        acc += f(&circle_point(start + i as f64 * h));
    }
    acc * h
}

/// Directions sampled from the support of the continuous part, used by the
/// hemisphere test.
fn sampled_support(nu: &DirectionalIntensity) -> Option<Vec<Vector>> {
    let mut dirs = Vec::new();
    match nu.dim {
        1 => {
            if let Some(c) = &nu.custom {
                dirs.extend(
                    [1.0, -1.0]
                        .into_iter()
                        .map(Vector::new1)
                        .filter(|u| (c.f)(u) > 0.0),
                );
            }
        }
        2 => {
            for t in &nu.terms {
                if let Some((start, len)) = t.arc() {
                    let n = CIRCLE_NODES;
                    let h = len / n as f64;
                    let last = if len >= TAU { n - 1 } else { n };
                    dirs.extend((0..=last).map(|i| circle_point(start + i as f64 * h)));
                }
            }
            if let Some(c) = &nu.custom {
                let h = TAU / CIRCLE_NODES as f64;
                dirs.extend(
                    (0..CIRCLE_NODES)
                        .map(|i| circle_point(-PI + i as f64 * h))
                        .filter(|u| (c.f)(u) > 0.0),
                );
            }
        }
        _ => {
            for t in &nu.terms {
                if t.mass(3) == 0.0 {
                    continue;
                }
                match &t.weight {
                    SphericalWeight::Constant(_) => return None,
                    SphericalWeight::Cap {
                        axis, half_angle, ..
                    } => {
                        if *half_angle > PI / 2.0 {
                            return None;
                        }
                        dirs.push(*axis);
                        let p = if axis.get(0).abs() < 0.9 {
                            axis.cross(&Vector::basis(3, 0))
                        } else {
                            axis.cross(&Vector::basis(3, 1))
                        }
                        .normalized()
                        .expect("axis is a unit vector");
                        let q = axis.cross(&p);
                        let (s, c) = half_angle.sin_cos();
                        for i in 0..64 {
                            let phi = TAU * i as f64 / 64.0;
                            dirs.push(*axis * c + (p * phi.cos() + q * phi.sin()) * s);
                        }
                    }
                }
            }
            if let Some(c) = &nu.custom {
                dirs.extend(fibonacci_sphere(400).into_iter().filter(|u| (c.f)(u) > 0.0));
            }
        }
    }
    Some(dirs)
}

fn fibonacci_sphere(n: usize) -> Vec<Vector> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector::new3(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Whether the support of `ν̂` lies in a closed hemisphere, in which case
/// the zero cell is unbounded almost surely.
pub fn hemisphere_contained(nu: &DirectionalIntensity) -> bool {
    let Some(mut dirs) = sampled_support(nu) else {
        return false;
    };
    dirs.extend(nu.atoms.iter().map(|a| a.direction));
    in_closed_hemisphere(nu.dim, &dirs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Ball, ComplementBody, HPolytope};

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
    fn square_atoms() {
        let nu = nu_hat(&square(), &BoundaryDensitySpec::uniform(&square()).unwrap()).unwrap();
        assert_eq!(nu.atoms().len(), 4);
        for a in nu.atoms() {
            assert_eq!(a.weight, 1.0);
            assert_eq!(a.direction.max_abs(), 1.0);
        }
        assert!(!hemisphere_contained(&nu));
    }

    #[test]
    fn zero_weight_facet_dropped() {
        let k = square();
        let spec = BoundaryDensitySpec::declared(
            &k,
            super::super::DensityKind::Uniform,
            0.0,
            vec![super::super::CarrierWeight {
                component: 0,
                weight: BoundaryWeight::Facets(vec![1.0, 1.0, 0.0, 1.0]),
            }],
            1.0,
        )
        .unwrap();
        let nu = nu_hat(&k, &spec).unwrap();
        assert_eq!(nu.atoms().len(), 3);
        assert!(nu.atoms().iter().all(|a| a.direction.get(1) != 1.0));
        assert!(hemisphere_contained(&nu));
    }

    #[test]
    fn disk_total_mass_and_lambda() {
        let nu = nu_hat(&disk(), &BoundaryDensitySpec::uniform(&disk()).unwrap()).unwrap();
        assert!((nu.total_mass() - 2.0).abs() < 1e-14);
        let l = VCompact::centered_ball(2, 0.3).unwrap();
        let lam = lambda_functional(&nu, &l, 0.0).unwrap();
        assert!((lam.value - 0.6).abs() < 1e-12);
        assert_eq!(lam.stderr, 0.0);
    }

    #[test]
    fn complement_normals_point_into_the_hole() {
        let inner = HPolytope::axis_box(&Vector::new2(-1.0, -1.0), &Vector::new2(1.0, 1.0)).unwrap();
        let k = SetModel::new(
            vec![Component::Complement(
                ComplementBody::new(ConvexBody::Polytope(inner)).unwrap(),
            )],
            1.0,
        )
        .unwrap();
        let spec = BoundaryDensitySpec::declared(
            &k,
            super::super::DensityKind::Uniform,
            0.0,
            vec![super::super::CarrierWeight {
                component: 0,
                weight: BoundaryWeight::Facets(vec![1.0, 0.0, 0.0, 0.0]),
            }],
            1.0,
        )
        .unwrap();
        // facet 0 of the inner box is x <= 1; K = closure of its outside has
        // outward normal −e₁ there
        let nu = nu_hat(&k, &spec).unwrap();
        assert_eq!(nu.atoms().len(), 1);
        assert_eq!(nu.atoms()[0].direction, Vector::new2(-1.0, 0.0));
        assert_eq!(nu.atoms()[0].weight, 2.0);
    }

    #[test]
    fn half_circle_cap_is_hemispheric() {
        let nu = DirectionalIntensity::new(
            2,
            vec![],
            vec![SphericalTerm {
                coefficient: 1.0,
                weight: SphericalWeight::Cap {
                    axis: Vector::new2(0.0, 1.0),
                    half_angle: PI / 2.0,
                    value: 1.0,
                },
            }],
        )
        .unwrap();
        assert!(hemisphere_contained(&nu));
        let d1 = DirectionalIntensity::new(
            1,
            vec![Atom {
                direction: Vector::new1(1.0),
                weight: 1.0,
            }],
            vec![],
        )
        .unwrap();
        assert!(hemisphere_contained(&d1));
    }

    #[test]
    fn sphere_mc_lambda_reports_error() {
        let nu = DirectionalIntensity::new(
            3,
            vec![],
            vec![SphericalTerm {
                coefficient: 1.0,
                weight: SphericalWeight::Constant(1.0),
            }],
        )
        .unwrap();
        // ∫ ⟨x,u⟩⁺ dσ(u) = π|x| on S²
        let l = VCompact::hull(vec![Vector::new3(0.0, 0.0, 2.0)]).unwrap();
        let lam = lambda_functional(&nu, &l, 0.0).unwrap();
        assert!(lam.stderr > 0.0);
        assert!((lam.value - 2.0 * PI).abs() < 4.0 * lam.stderr, "{lam:?}");
        assert!(!hemisphere_contained(&nu));
    }

    #[test]
    fn custom_density_without_bound() {
        let nu = DirectionalIntensity::with_custom_density(2, vec![], |u| u.get(0).abs(), 4.0, None)
            .unwrap();
        assert!(nu.density_max().is_none());
        let l = VCompact::centered_ball(2, 1.0).unwrap();
        let lam = lambda_functional(&nu, &l, 0.0).unwrap();
        assert!((lam.value - 4.0).abs() < 1e-6);
    }
}
