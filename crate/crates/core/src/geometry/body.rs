use serde::{Deserialize, Serialize};

use super::hull::nearest_in_hull;
use super::polytope::HPolytope;
use super::tolerance::STATIONARITY;
use super::vector::{check_dim, Vector};
use crate::error::{Error, Result};

/// Closed ball `B_r(c)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("ball radius {radius} must be >= 0")));
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        (*x - self.center).norm_squared() <= self.radius * self.radius
    }

    #[inline]
    pub fn support(&self, u: &Vector) -> f64 {
        self.center.dot(u) + self.radius * u.norm()
    }

    pub fn project(&self, x: &Vector) -> Vector {
        let d = *x - self.center;
        let n = d.norm();
        if n <= self.radius {
            *x
        } else {
            self.center + d.scale(self.radius / n)
        }
    }
}

/// A compact test set: the convex hull of finitely many points, or a ball.
///
/// Only `h(L, ·)` and containment of translates matter for the inclusion
/// functional, so a hull is as good as the original compact set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum VCompact {
    Hull(Vec<Vector>),
    Ball(Ball),
}

impl VCompact {
    pub fn hull(vertices: Vec<Vector>) -> Result<Self> {
        let first = vertices
            .first()
            .ok_or_else(|| Error::InvalidInput("hull needs at least one vertex".into()))?;
        let dim = first.dim();
        for v in &vertices {
            check_dim(dim, v.dim())?;
        }
        Ok(Self::Hull(vertices))
    }

    /// The singleton `{0}`.
    pub fn origin(dim: usize) -> Self {
        Self::Hull(vec![Vector::zeros(dim)])
    }

    pub fn centered_ball(dim: usize, radius: f64) -> Result<Self> {
        Ok(Self::Ball(Ball::new(Vector::zeros(dim), radius)?))
    }

    /// The segment `[−ρ, ρ]` in d = 1.
    pub fn interval(rho: f64) -> Self {
        Self::Hull(vec![Vector::new1(-rho), Vector::new1(rho)])
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Hull(v) => v[0].dim(),
            Self::Ball(b) => b.dim(),
        }
    }

    /// `h(L, u) = sup_{x ∈ L} ⟨x, u⟩`; `u` need not be a unit vector.
    pub fn support(&self, u: &Vector) -> f64 {
        match self {
            Self::Hull(v) => v.iter().map(|p| p.dot(u)).fold(f64::NEG_INFINITY, f64::max),
            Self::Ball(b) => b.support(u),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Self::Hull(v) => {
                let mut d: f64 = 0.0;
                for (i, a) in v.iter().enumerate() {
                    for b in &v[i + 1..] {
                        d = d.max(a.distance(b));
                    }
                }
                d
            }
            Self::Ball(b) => 2.0 * b.radius,
        }
    }

    /// Smallest `r` with `L ⊆ B_r(0)`.
    pub fn radius_about_origin(&self) -> f64 {
        match self {
            Self::Hull(v) => v.iter().map(Vector::norm).fold(0.0, f64::max),
            Self::Ball(b) => b.center.norm() + b.radius,
        }
    }

    /// `ρ·L`.
    pub fn scaled(&self, rho: f64) -> Self {
        match self {
            Self::Hull(v) => Self::Hull(v.iter().map(|p| p.scale(rho)).collect()),
            Self::Ball(b) => Self::Ball(Ball {
                center: b.center.scale(rho),
                radius: b.radius * rho.abs(),
            }),
        }
    }

    /// Whether `x ∈ conv(L)` (balls: exact; hulls: up to 1e-12).
    pub fn contains_point(&self, x: &Vector) -> bool {
        match self {
            Self::Hull(v) => nearest_in_hull(x, v).1 <= 1e-12,
            Self::Ball(b) => b.contains(x),
        }
    }
}

/// A convex component of a set model.
#[derive(Clone, Debug)]
pub enum ConvexBody {
    Polytope(HPolytope),
    Ball(Ball),
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.dim(),
            Self::Ball(b) => b.dim(),
        }
    }

    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            Self::Polytope(p) => p.contains(x),
            Self::Ball(b) => b.contains(x),
        }
    }

    pub fn support(&self, u: &Vector) -> f64 {
        match self {
            Self::Polytope(p) => p.support(u).expect("set-model polytopes are bounded"),
            Self::Ball(b) => b.support(u),
        }
    }

    /// Axis-aligned bounding box.
    pub fn bounding_box(&self) -> (Vector, Vector) {
        let d = self.dim();
        let lo = Vector::from_fn(d, |i| -self.support(&-Vector::basis(d, i)));
        let hi = Vector::from_fn(d, |i| self.support(&Vector::basis(d, i)));
        (lo, hi)
    }

    pub fn project(&self, x: &Vector) -> Vector {
        match self {
            Self::Polytope(p) => {
                if p.contains(x) {
                    *x
                } else {
                    nearest_in_hull(x, p.vertices()).0
                }
            }
            Self::Ball(b) => b.project(x),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Polytope(p) if !p.is_bounded() => Err(p.unbounded_or_empty()),
            _ => Ok(()),
        }
    }

    fn has_interior(&self) -> bool {
        match self {
            Self::Polytope(p) => p.interior_point().is_some(),
            Self::Ball(b) => b.radius > 0.0,
        }
    }
}

/// `cl(innerᶜ)` for a bounded convex body with nonempty interior.
#[derive(Clone, Debug)]
pub struct ComplementBody {
    inner: ConvexBody,
}

impl ComplementBody {
    pub fn new(inner: ConvexBody) -> Result<Self> {
        inner.validate()?;
        if !inner.has_interior() {
            return Err(Error::InvalidInput(
                "complement body needs an inner region with nonempty interior".into(),
            ));
        }
        Ok(Self { inner })
    }

    pub fn inner(&self) -> &ConvexBody {
        &self.inner
    }

    /// Membership in `cl(innerᶜ)`: not in the open inner region.
    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        match &self.inner {
            ConvexBody::Polytope(p) => p.halfspaces().iter().any(|h| h.normal.dot(x) >= h.offset),
            ConvexBody::Ball(b) => (*x - b.center).norm_squared() >= b.radius * b.radius,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Component {
    Body(ConvexBody),
    Complement(ComplementBody),
}

impl Component {
    pub fn dim(&self) -> usize {
        match self {
            Self::Body(b) => b.dim(),
            Self::Complement(c) => c.inner.dim(),
        }
    }

    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            Self::Body(b) => b.contains(x),
            Self::Complement(c) => c.contains(x),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Self::Body(_))
    }
}

/// A finite union of pairwise separated components: the host set `K`.
#[derive(Clone, Debug)]
pub struct SetModel {
    dim: usize,
    components: Vec<Component>,
    separation: f64,
}

impl SetModel {
    /// Validates disjointness: two bounded bodies must be at distance at
    /// least `separation` (alternating projections); a body and a complement
    /// require `body + B_separation ⊆ inner`. At most one complement.
    pub fn new(components: Vec<Component>, separation: f64) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidInput("set model needs a component".into()))?;
        let dim = first.dim();
        for c in &components {
            check_dim(dim, c.dim())?;
            if let Component::Body(b) = c {
                b.validate()?;
            }
        }
        if !(separation > 0.0) || !separation.is_finite() {
            return Err(Error::InvalidInput(format!(
                "separation must be positive, got {separation}"
            )));
        }
        let complements = components.iter().filter(|c| !c.is_bounded()).count();
        if complements > 1 {
            return Err(Error::InvalidInput(
                "two complement bodies always overlap".into(),
            ));
        }
        if complements == 1 && dim > 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        for (i, a) in components.iter().enumerate() {
            for b in &components[i + 1..] {
                check_pair(a, b, separation)?;
            }
        }
        Ok(Self {
            dim,
            components,
            separation,
        })
    }

    /// A single bounded convex body. The separation bound is irrelevant for
    /// one component and set to infinity.
    pub fn single(body: ConvexBody) -> Result<Self> {
        body.validate()?;
        Ok(Self {
            dim: body.dim(),
            components: vec![Component::Body(body)],
            separation: f64::INFINITY,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// The model's only component when it is a single bounded body.
    pub fn as_single_body(&self) -> Option<&ConvexBody> {
        match self.components.as_slice() {
            [Component::Body(b)] => Some(b),
            _ => None,
        }
    }

    #[inline]
    pub fn contains_point(&self, x: &Vector) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }
}

fn check_pair(a: &Component, b: &Component, sep: f64) -> Result<()> {
    match (a, b) {
        (Component::Body(p), Component::Body(q)) => {
            let d = body_distance(p, q);
            if d < sep {
                return Err(Error::InvalidInput(format!(
                    "components at distance {d:.3e} violate declared separation {sep}"
                )));
            }
            Ok(())
        }
        (Component::Body(body), Component::Complement(c))
        | (Component::Complement(c), Component::Body(body)) => {
            let margin = inner_margin(body, c.inner());
            if margin < sep {
                return Err(Error::InvalidInput(format!(
                    "body lies within {margin:.3e} of the complement boundary, separation {sep}"
                )));
            }
            Ok(())
        }
        _ => Err(Error::InvalidInput("two complement bodies always overlap".into())),
    }
}

/// Minimum distance between two bounded convex bodies by alternating
/// projections, iterated until the pair moves less than the stationarity
/// tolerance.
pub(crate) fn body_distance(a: &ConvexBody, b: &ConvexBody) -> f64 {
    if let (ConvexBody::Ball(x), ConvexBody::Ball(y)) = (a, b) {
        return (x.center.distance(&y.center) - x.radius - y.radius).max(0.0);
    }
    let start = match a {
        ConvexBody::Polytope(p) => p.vertices()[0],
        ConvexBody::Ball(bl) => bl.center,
    };
    let mut q = b.project(&start);
    let mut p = a.project(&q);
    for _ in 0..100_000 {
        let q_next = b.project(&p);
        let p_next = a.project(&q_next);
        let moved = p_next.distance(&p) + q_next.distance(&q);
        p = p_next;
        q = q_next;
        if moved <= STATIONARITY * 1e-3 {
            break;
        }
    }
    p.distance(&q)
}

/// Largest `m` with `body + B_m ⊆ inner`.
fn inner_margin(body: &ConvexBody, inner: &ConvexBody) -> f64 {
    match inner {
        ConvexBody::Polytope(p) => p
            .halfspaces()
            .iter()
            .map(|h| h.offset - body.support(&h.normal))
            .fold(f64::INFINITY, f64::min),
        ConvexBody::Ball(ball) => {
            let far = match body {
                ConvexBody::Ball(b) => b.center.distance(&ball.center) + b.radius,
                ConvexBody::Polytope(p) => p
                    .vertices()
                    .iter()
                    .map(|v| v.distance(&ball.center))
                    .fold(0.0, f64::max),
            };
            ball.radius - far
        }
    }
}
