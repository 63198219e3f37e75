//! Boundary density models for the sampling measure `μ` on `K`.
//!
//! Near the boundary the density behaves like `t^α · g(a)` at distance `t`
//! from the boundary point `a`. The limit `g` is described relative to the
//! normalizing constant: `g(a) = mass · c · w(a)` where `w` is a per-facet or
//! per-direction weight and `c` makes `μ / mass` a probability measure.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    polytope_volume, unit_sphere_area, volume_exact, Component, ConvexBody, HPolytope, Halfspace,
    SetModel, Vector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DensityKind {
    /// Constant density on the carrier components (α = 0).
    Uniform,
    /// `f(x) = c · w(direction) · dist(x, ∂B)^α` on a ball.
    RadialPowerBall,
    /// `f(x) = c · dist(x, ∂P)^α` on a polytope.
    DistPowerPolytope,
}

/// Weight on the unit sphere, evaluated at the outward normal of `K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SphericalWeight {
    Constant(f64),
    /// `value` on the closed cap `{u : angle(u, axis) <= half_angle}`, zero
    /// elsewhere.
    #[serde(rename_all = "camelCase")]
    Cap {
        axis: Vector,
        half_angle: f64,
        value: f64,
    },
}

impl SphericalWeight {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Self::Constant(v) if *v >= 0.0 && v.is_finite() => Ok(()),
            Self::Constant(v) => Err(Error::InvalidInput(format!("weight {v} must be >= 0"))),
            Self::Cap {
                axis,
                half_angle,
                value,
            } => {
                if axis.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: axis.dim(),
                    });
                }
                if (axis.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidInput("cap axis must be a unit vector".into()));
                }
                if !(0.0..=PI).contains(half_angle) {
                    return Err(Error::InvalidInput(format!(
                        "cap half-angle {half_angle} outside [0, π]"
                    )));
                }
                if !(*value >= 0.0) || !value.is_finite() {
                    return Err(Error::InvalidInput(format!("weight {value} must be >= 0")));
                }
                Ok(())
            }
        }
    }

    #[inline]
    pub fn eval(&self, u: &Vector) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Cap {
                axis,
                half_angle,
                value,
            } => {
                if u.dot(axis) >= half_angle.cos() - 1e-15 {
                    *value
                } else {
                    0.0
                }
            }
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            Self::Constant(v) => *v,
            Self::Cap { value, .. } => *value,
        }
    }

    /// Integral over the unit sphere (counting measure on `{±1}` in d = 1).
    pub fn integral(&self, dim: usize) -> f64 {
        match (self, dim) {
            (Self::Constant(v), _) => v * unit_sphere_area(dim),
            (Self::Cap { .. }, 1) => {
                self.eval(&Vector::new1(1.0)) + self.eval(&Vector::new1(-1.0))
            }
            (Self::Cap {
                half_angle, value, ..
            }, 2) => 2.0 * half_angle * value,
            (Self::Cap {
                half_angle, value, ..
            }, _) => 2.0 * PI * (1.0 - half_angle.cos()) * value,
        }
    }
}

/// How `g` is specified on one carrier component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BoundaryWeight {
    /// One weight per halfspace of the component's polytope (for a complement
    /// body: of its inner polytope), in canonical order.
    Facets(Vec<f64>),
    /// A weight on outward normal directions.
    Sphere(SphericalWeight),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarrierWeight {
    pub component: usize,
    pub weight: BoundaryWeight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Normalization {
    /// Computed from the model so that `μ / mass` is a probability measure.
    Computed,
    /// Supplied by the caller; such specs can be analysed but not sampled.
    Declared,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryDensitySpec {
    alpha: f64,
    gamma: f64,
    kind: DensityKind,
    carriers: Vec<CarrierWeight>,
    norm_constant: f64,
    normalization: Normalization,
    mass: f64,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "boundary exponent must satisfy alpha > -1 (got {alpha})"
        )))
    }
}

fn unit_facet_weights(k: &SetModel, index: usize) -> BoundaryWeight {
    match &k.components()[index] {
        Component::Body(ConvexBody::Polytope(p)) => {
            BoundaryWeight::Facets(vec![1.0; p.halfspaces().len()])
        }
        Component::Complement(c) => match c.inner() {
            ConvexBody::Polytope(p) => BoundaryWeight::Facets(vec![1.0; p.halfspaces().len()]),
            ConvexBody::Ball(_) => BoundaryWeight::Sphere(SphericalWeight::Constant(1.0)),
        },
        Component::Body(ConvexBody::Ball(_)) => {
            BoundaryWeight::Sphere(SphericalWeight::Constant(1.0))
        }
    }
}

/// `B(a, d) = (d−1)! / (a (a+1) … (a+d−1))` for integer `d >= 1`.
fn beta_int(a: f64, d: usize) -> f64 {
    let mut num = 1.0;
    for k in 1..d {
        num *= k as f64;
    }
    let den: f64 = (0..d).map(|k| a + k as f64).product();
    num / den
}

impl BoundaryDensitySpec {
    /// Uniform probability measure on every component of `k`.
    pub fn uniform(k: &SetModel) -> Result<Self> {
        let all: Vec<usize> = (0..k.components().len()).collect();
        Self::uniform_on(k, &all)
    }

    /// Uniform probability measure on the listed (bounded) components.
    pub fn uniform_on(k: &SetModel, carriers: &[usize]) -> Result<Self> {
        check_carriers(k, carriers)?;
        let mut volume = 0.0;
        for &i in carriers {
            match &k.components()[i] {
                Component::Body(b) => volume += volume_exact(b)?,
                Component::Complement(_) => {
                    return Err(Error::SpecMismatch(format!(
                        "component {i} is unbounded and cannot carry a uniform measure"
                    )))
                }
            }
        }
        if !(volume > 0.0) {
            return Err(Error::SpecMismatch("carriers have zero volume".into()));
        }
        Ok(Self {
            alpha: 0.0,
            gamma: 1.0,
            kind: DensityKind::Uniform,
            carriers: carriers
                .iter()
                .map(|&i| CarrierWeight {
                    component: i,
                    weight: unit_facet_weights(k, i),
                })
                .collect(),
            norm_constant: 1.0 / volume,
            normalization: Normalization::Computed,
            mass: 1.0,
        })
    }

    /// `f(x) = c · w(u) · dist(x, ∂B)^α` on the ball component `component`,
    /// where `u` is the direction of `x` from the center.
    pub fn radial_power(
        k: &SetModel,
        component: usize,
        alpha: f64,
        weight: SphericalWeight,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        check_carriers(k, &[component])?;
        weight.validate(k.dim())?;
        let ball = match &k.components()[component] {
            Component::Body(ConvexBody::Ball(b)) => *b,
            _ => {
                return Err(Error::SpecMismatch(format!(
                    "radial power density needs a ball, component {component} is not one"
                )))
            }
        };
        let d = k.dim();
        let radial = ball.radius.powf(alpha + d as f64) * beta_int(alpha + 1.0, d);
        let total = weight.integral(d) * radial;
        if !(total > 0.0) {
            return Err(Error::SpecMismatch("boundary weight vanishes everywhere".into()));
        }
        Ok(Self {
            alpha,
            gamma: 1.0 / (alpha + 1.0),
            kind: DensityKind::RadialPowerBall,
            carriers: vec![CarrierWeight {
                component,
                weight: BoundaryWeight::Sphere(weight),
            }],
            norm_constant: 1.0 / total,
            normalization: Normalization::Computed,
            mass: 1.0,
        })
    }

    /// `f(x) = c · dist(x, ∂P)^α` on a single-polytope model.
    ///
    /// The normalizing integral is closed form in d = 1, a one-dimensional
    /// quadrature over inner parallel polygons in d = 2, and limited to
    /// α = 0 in d = 3.
    pub fn dist_power(k: &SetModel, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let p = match k.as_single_body() {
            Some(ConvexBody::Polytope(p)) => p,
            _ => {
                return Err(Error::SpecMismatch(
                    "distance power density needs a single polytope".into(),
                ))
            }
        };
        let integral = match (p.dim(), alpha == 0.0) {
            (_, true) => polytope_volume(p)?,
            (1, false) => {
                let len = polytope_volume(p)?;
                2.0 * (0.5 * len).powf(alpha + 1.0) / (alpha + 1.0)
            }
            (2, false) => dist_power_integral_2d(p, alpha)?,
            _ => {
                return Err(Error::UnsupportedSpec(
                    "distance power normalization with alpha != 0 in d = 3".into(),
                ))
            }
        };
        Ok(Self {
            alpha,
            gamma: 1.0 / (alpha + 1.0),
            kind: DensityKind::DistPowerPolytope,
            carriers: vec![CarrierWeight {
                component: 0,
                weight: unit_facet_weights(k, 0),
            }],
            norm_constant: 1.0 / integral,
            normalization: Normalization::Computed,
            mass: 1.0,
        })
    }

    /// A spec with caller-supplied `g` weights and normalizing constant.
    pub fn declared(
        k: &SetModel,
        kind: DensityKind,
        alpha: f64,
        carriers: Vec<CarrierWeight>,
        norm_constant: f64,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        let idx: Vec<usize> = carriers.iter().map(|c| c.component).collect();
        check_carriers(k, &idx)?;
        if !(norm_constant > 0.0) || !norm_constant.is_finite() {
            return Err(Error::InvalidInput(format!(
                "normalizing constant {norm_constant} must be positive"
            )));
        }
        if kind == DensityKind::Uniform && alpha != 0.0 {
            return Err(Error::InvalidInput("uniform densities have alpha = 0".into()));
        }
        let mut positive = false;
        for c in &carriers {
            match &c.weight {
                BoundaryWeight::Facets(w) => {
                    let n = facet_count(k, c.component).ok_or_else(|| {
                        Error::SpecMismatch(format!(
                            "component {} has no facets for per-facet weights",
                            c.component
                        ))
                    })?;
                    if w.len() != n {
                        return Err(Error::SpecMismatch(format!(
                            "component {} has {n} facets but {} weights were given",
                            c.component,
                            w.len()
                        )));
                    }
                    if w.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                        return Err(Error::InvalidInput("facet weights must be >= 0".into()));
                    }
                    positive |= w.iter().any(|x| *x > 0.0);
                }
                BoundaryWeight::Sphere(s) => {
                    s.validate(k.dim())?;
                    positive |= s.integral(k.dim()) > 0.0;
                }
            }
        }
        if !positive {
            return Err(Error::SpecMismatch(
                "g must be strictly positive on part of the boundary".into(),
            ));
        }
        Ok(Self {
            alpha,
            gamma: 1.0 / (alpha + 1.0),
            kind,
            carriers,
            norm_constant,
            normalization: Normalization::Declared,
            mass: 1.0,
        })
    }

    /// Scales the total mass (default 1).
    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidInput(format!("mass {mass} must be positive")));
        }
        self.mass = mass;
        Ok(self)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Scaling exponent `γ = 1/(α+1)`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kind(&self) -> DensityKind {
        self.kind
    }

    pub fn carriers(&self) -> &[CarrierWeight] {
        &self.carriers
    }

    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Factor turning a relative weight `w` into `g`.
    pub fn g_scale(&self) -> f64 {
        self.mass * self.norm_constant
    }
}

fn check_carriers(k: &SetModel, carriers: &[usize]) -> Result<()> {
    if carriers.is_empty() {
        return Err(Error::SpecMismatch("no carrier components".into()));
    }
    for (i, &c) in carriers.iter().enumerate() {
        if c >= k.components().len() {
            return Err(Error::SpecMismatch(format!("no component with index {c}")));
        }
        if carriers[..i].contains(&c) {
            return Err(Error::SpecMismatch(format!("component {c} listed twice")));
        }
    }
    Ok(())
}

fn facet_count(k: &SetModel, index: usize) -> Option<usize> {
    match &k.components()[index] {
        Component::Body(ConvexBody::Polytope(p)) => Some(p.halfspaces().len()),
        Component::Complement(c) => match c.inner() {
            ConvexBody::Polytope(p) => Some(p.halfspaces().len()),
            ConvexBody::Ball(_) => None,
        },
        Component::Body(ConvexBody::Ball(_)) => None,
    }
}

/// `∫_P dist(x, ∂P)^α dx = ∫_0^{r_in} t^α · perimeter(P ⊖ tB) dt`. The
/// perimeter of an inner parallel polygon is piecewise linear in `t`; on
/// each of 4096 panels its linear interpolant is integrated against `t^α`
/// exactly, so only panels containing a breakpoint carry error.
fn dist_power_integral_2d(p: &HPolytope, alpha: f64) -> Result<f64> {
    let eroded = |t: f64| {
        let hs: Vec<Halfspace> = p
            .halfspaces()
            .iter()
            .map(|h| Halfspace {
                normal: h.normal,
                offset: h.offset - t,
            })
            .collect();
        HPolytope::from_canonical(2, hs)
    };
    let perimeter = |t: f64| -> f64 {
        let e = eroded(t);
        if !e.is_bounded() {
            return 0.0;
        }
        let v = e.vertices();
        match v.len() {
            0 | 1 => 0.0,
            2 => 2.0 * v[0].distance(&v[1]),
            n => (0..n).map(|i| v[i].distance(&v[(i + 1) % n])).sum(),
        }
    };
    let mut lo = 0.0;
    let mut hi = 2.0 * p.vertices().iter().map(Vector::norm).fold(0.0, f64::max) + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eroded(mid).is_bounded() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r_in = lo;
    let (a1, a2) = (alpha + 1.0, alpha + 2.0);
    let panels = 4096;
    let h = r_in / panels as f64;
    let mut acc = 0.0;
    let mut pa = perimeter(0.0);
    for i in 0..panels {
        let (a, b) = (i as f64 * h, if i + 1 == panels { r_in } else { (i + 1) as f64 * h });
        let pb = perimeter(b);
        let slope = (pb - pa) / (b - a);
        let c0 = pa - slope * a;
        acc += c0 * (b.powf(a1) - a.powf(a1)) / a1 + slope * (b.powf(a2) - a.powf(a2)) / a2;
        pa = pb;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Ball;

    fn disk() -> SetModel {
        SetModel::single(ConvexBody::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap())).unwrap()
    }

    fn square() -> SetModel {
        SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn alpha_at_or_below_minus_one_rejected() {
        let err = BoundaryDensitySpec::radial_power(&disk(), 0, -1.0, SphericalWeight::Constant(1.0))
            .unwrap_err();
        assert!(err.to_string().contains("alpha > -1"), "{err}");
        assert!(BoundaryDensitySpec::dist_power(&square(), -1.5).is_err());
    }

    #[test]
    fn gamma_is_reciprocal() {
        for alpha in [-0.5, 0.0, 1.0, 2.5] {
            let s = BoundaryDensitySpec::radial_power(&disk(), 0, alpha, SphericalWeight::Constant(1.0))
                .unwrap();
            assert!((s.gamma() * (s.alpha() + 1.0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn radial_normalization_alpha_one_disk() {
        let s = BoundaryDensitySpec::radial_power(&disk(), 0, 1.0, SphericalWeight::Constant(1.0))
            .unwrap();
        assert!((s.norm_constant() - 3.0 / PI).abs() < 1e-14);
        let u = BoundaryDensitySpec::uniform(&disk()).unwrap();
        assert!((u.norm_constant() - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn dist_power_square_matches_closed_form() {
        // ∫ over [0,1]² of dist^α = ∫_0^{1/2} t^α 4(1−2t) dt
        let alpha: f64 = 0.5;
        let exact = 4.0 * (0.5f64.powf(alpha + 1.0) / (alpha + 1.0)
            - 2.0 * 0.5f64.powf(alpha + 2.0) / (alpha + 2.0));
        let s = BoundaryDensitySpec::dist_power(&square(), alpha).unwrap();
        assert!((1.0 / s.norm_constant() - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn declared_weights_checked_against_facets() {
        let k = square();
        let bad = BoundaryDensitySpec::declared(
            &k,
            DensityKind::Uniform,
            0.0,
            vec![CarrierWeight {
                component: 0,
                weight: BoundaryWeight::Facets(vec![1.0; 3]),
            }],
            1.0,
        );
        assert!(matches!(bad, Err(Error::SpecMismatch(_))));
        let zero = BoundaryDensitySpec::declared(
            &k,
            DensityKind::Uniform,
            0.0,
            vec![CarrierWeight {
                component: 0,
                weight: BoundaryWeight::Facets(vec![0.0; 4]),
            }],
            1.0,
        );
        assert!(zero.is_err());
    }

    #[test]
    fn cap_integrals() {
        let cap = SphericalWeight::Cap {
            axis: Vector::new2(0.0, 1.0),
            half_angle: PI / 2.0,
            value: 2.0,
        };
        assert!((cap.integral(2) - 2.0 * PI).abs() < 1e-15);
        let cap3 = SphericalWeight::Cap {
            axis: Vector::basis(3, 2),
            half_angle: PI / 2.0,
            value: 1.0,
        };
        assert!((cap3.integral(3) - 2.0 * PI).abs() < 1e-12);
    }
}
