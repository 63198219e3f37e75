//! Minkowski erosion `K ⊖ εL = {x : x + εL ⊆ K}` and the containment
//! predicate behind it.

use super::body::{Ball, Component, ConvexBody, SetModel, VCompact};
use super::hull::{hull_avoids_interior, nearest_in_hull};
use super::polytope::{Halfspace, HPolytope};
use super::vector::{check_dim, Vector};
use crate::error::{Error, Result};

/// Whether `x + εL ⊆ K`.
///
/// For a multi-component model the translate `x + εL` is connected and,
/// when `ε·diam(L)` is below the declared separation, it can meet at most
/// one component; containment in the union then reduces to containment in a
/// single component.
pub fn contains_set(k: &SetModel, l: &VCompact, x: &Vector, eps: f64) -> Result<bool> {
    check_dim(k.dim(), l.dim())?;
    check_dim(k.dim(), x.dim())?;
    check_scale(eps)?;
    check_separation(k, l, eps)?;
    Ok(contains_set_unchecked(k, l, x, eps))
}

pub(crate) fn check_scale(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("erosion scale must be >= 0, got {eps}")))
    }
}

pub(crate) fn check_separation(k: &SetModel, l: &VCompact, eps: f64) -> Result<()> {
    if k.components().len() > 1 {
        let span = eps * l.diameter();
        if span >= k.separation() {
            return Err(Error::PreconditionViolation(format!(
                "eps * diam(L) = {span} must be below the component separation {}",
                k.separation()
            )));
        }
    }
    Ok(())
}

#[inline]
pub(crate) fn contains_set_unchecked(k: &SetModel, l: &VCompact, x: &Vector, eps: f64) -> bool {
    k.components()
        .iter()
        .any(|c| component_contains_set(c, l, x, eps))
}

fn component_contains_set(c: &Component, l: &VCompact, x: &Vector, eps: f64) -> bool {
    match c {
        Component::Body(ConvexBody::Polytope(p)) => p
            .halfspaces()
            .iter()
            .all(|h| h.normal.dot(x) <= eroded_offset(h, l, eps)),
        Component::Body(ConvexBody::Ball(b)) => match l {
            VCompact::Ball(lb) => match eroded_ball(b, lb, eps) {
                Some(e) => e.contains(x),
                None => false,
            },
            VCompact::Hull(vs) => {
                let r2 = b.radius * b.radius;
                vs.iter()
                    .all(|v| (*x + v.scale(eps) - b.center).norm_squared() <= r2)
            }
        },
        Component::Complement(comp) => match (comp.inner(), l) {
            (ConvexBody::Ball(inner), VCompact::Ball(lb)) => {
                let c = *x + lb.center.scale(eps);
                (c - inner.center).norm() >= inner.radius + eps * lb.radius
            }
            (ConvexBody::Ball(inner), VCompact::Hull(vs)) => {
                let pts: Vec<Vector> = vs.iter().map(|v| *x + v.scale(eps)).collect();
                nearest_in_hull(&inner.center, &pts).1 >= inner.radius
            }
            (ConvexBody::Polytope(p), VCompact::Ball(lb)) => {
                let c = *x + lb.center.scale(eps);
                let r = eps * lb.radius;
                if r == 0.0 {
                    comp.contains(&c)
                } else {
                    nearest_in_hull(&c, p.vertices()).1 >= r
                }
            }
            (ConvexBody::Polytope(p), VCompact::Hull(vs)) => {
                if vs.len() == 1 || eps == 0.0 {
                    comp.contains(&(*x + vs[0].scale(eps)))
                } else {
                    let pts: Vec<Vector> = vs.iter().map(|v| *x + v.scale(eps)).collect();
                    hull_avoids_interior(&pts, p)
                }
            }
        },
    }
}

/// Offset of the eroded halfspace, shared by the predicate and the exact
/// H-representation so both evaluate the same floating-point expression.
#[inline]
fn eroded_offset(h: &Halfspace, l: &VCompact, eps: f64) -> f64 {
    h.offset - eps * l.support(&h.normal)
}

/// `B_R(c) ⊖ ε B_r(c_L) = B_{R − εr}(c − εc_L)`, empty when `εr > R`.
fn eroded_ball(k: &Ball, l: &Ball, eps: f64) -> Option<Ball> {
    let radius = k.radius - eps * l.radius;
    (radius >= 0.0).then(|| Ball {
        center: k.center - l.center.scale(eps),
        radius,
    })
}

/// Closed-form description of an erosion, when one exists.
#[derive(Clone, Debug)]
pub enum ExactErosion {
    /// Source is a single polytope: offsets shifted by `ε·h(L, u)`.
    Polytope(HPolytope),
    /// Source and structuring element are balls; `None` when empty.
    Ball(Option<Ball>),
}

#[derive(Clone, Debug)]
pub struct ErosionRegion {
    source: SetModel,
    structuring: VCompact,
    scale: f64,
    exact: Option<ExactErosion>,
}

/// `K ⊖ εL`.
pub fn erode(k: &SetModel, l: &VCompact, eps: f64) -> Result<ErosionRegion> {
    check_dim(k.dim(), l.dim())?;
    check_scale(eps)?;
    check_separation(k, l, eps)?;
    let exact = match k.as_single_body() {
        Some(ConvexBody::Polytope(p)) => {
            let hs = p
                .halfspaces()
                .iter()
                .map(|h| Halfspace {
                    normal: h.normal,
                    offset: eroded_offset(h, l, eps),
                })
                .collect();
            Some(ExactErosion::Polytope(HPolytope::from_canonical(p.dim(), hs)))
        }
        Some(ConvexBody::Ball(b)) => match l {
            VCompact::Ball(lb) => Some(ExactErosion::Ball(eroded_ball(b, lb, eps))),
            VCompact::Hull(_) => None,
        },
        None => None,
    };
    Ok(ErosionRegion {
        source: k.clone(),
        structuring: l.clone(),
        scale: eps,
        exact,
    })
}

impl ErosionRegion {
    pub fn source(&self) -> &SetModel {
        &self.source
    }

    pub fn structuring(&self) -> &VCompact {
        &self.structuring
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn exact(&self) -> Option<&ExactErosion> {
        self.exact.as_ref()
    }

    /// The exact H-representation, when the source is a single polytope.
    pub fn exact_hrep(&self) -> Option<&HPolytope> {
        match &self.exact {
            Some(ExactErosion::Polytope(p)) => Some(p),
            _ => None,
        }
    }

    /// Membership, through the closed form when available.
    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        match &self.exact {
            Some(ExactErosion::Polytope(p)) => p.contains(x),
            Some(ExactErosion::Ball(b)) => b.as_ref().is_some_and(|b| b.contains(x)),
            None => self.contains_by_predicate(x),
        }
    }

    /// Membership through `contains_set`, ignoring any closed form.
    #[inline]
    pub fn contains_by_predicate(&self, x: &Vector) -> bool {
        contains_set_unchecked(&self.source, &self.structuring, x, self.scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::body::ComplementBody;

    fn square() -> SetModel {
        SetModel::single(ConvexBody::Polytope(
            HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap(),
        ))
        .unwrap()
    }

    #[test]
    fn square_eroded_by_disk() {
        let k = square();
        let l = VCompact::centered_ball(2, 1.0).unwrap();
        let e = erode(&k, &l, 0.1).unwrap();
        let (lo, hi) = e.exact_hrep().unwrap().as_axis_box().unwrap();
        assert!((lo.get(0) - 0.1).abs() < 1e-15 && (hi.get(1) - 0.9).abs() < 1e-15);
        assert!(contains_set(&k, &l, &Vector::new2(0.5, 0.5), 0.4).unwrap());
        assert!(!contains_set(&k, &l, &Vector::new2(0.5, 0.5), 0.51).unwrap());
    }

    #[test]
    fn negative_scale_rejected() {
        let l = VCompact::origin(2);
        assert!(matches!(erode(&square(), &l, -0.1), Err(Error::DomainError(_))));
    }

    #[test]
    fn ball_erosion_subtracts_radii() {
        let k = SetModel::single(ConvexBody::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap())).unwrap();
        let l = VCompact::centered_ball(2, 0.5).unwrap();
        match erode(&k, &l, 0.4).unwrap().exact() {
            Some(ExactErosion::Ball(Some(b))) => assert!((b.radius - 0.8).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            erode(&k, &l, 3.0).unwrap().exact(),
            Some(ExactErosion::Ball(None))
        ));
    }

    #[test]
    fn union_gap_and_precondition() {
        let b = |x: f64| Component::Body(ConvexBody::Ball(Ball::new(Vector::new2(x, 0.0), 1.0).unwrap()));
        let k = SetModel::new(vec![b(0.0), b(5.0)], 3.0).unwrap();
        let l = VCompact::centered_ball(2, 1.0).unwrap();
        assert!(!contains_set(&k, &l, &Vector::new2(2.5, 0.0), 0.5).unwrap());
        assert!(contains_set(&k, &l, &Vector::new2(5.0, 0.0), 0.5).unwrap());
        assert!(matches!(
            contains_set(&k, &l, &Vector::new2(5.0, 0.0), 1.5),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn complement_membership_cases() {
        let inner = HPolytope::axis_box(&Vector::new2(-1.0, -1.0), &Vector::new2(1.0, 1.0)).unwrap();
        let k = SetModel::new(
            vec![Component::Complement(
                ComplementBody::new(ConvexBody::Polytope(inner)).unwrap(),
            )],
            1.0,
        )
        .unwrap();
        let disk = VCompact::centered_ball(2, 1.0).unwrap();
        assert!(contains_set(&k, &disk, &Vector::new2(2.0, 0.0), 1.0).unwrap());
        assert!(!contains_set(&k, &disk, &Vector::new2(1.9, 0.0), 1.0).unwrap());
        // corner region: distance from (2,2) to the box is sqrt(2)
        assert!(contains_set(&k, &disk, &Vector::new2(2.0, 2.0), 1.4).unwrap());
        assert!(!contains_set(&k, &disk, &Vector::new2(2.0, 2.0), 1.42).unwrap());
        let seg = VCompact::hull(vec![Vector::new2(0.0, 0.0), Vector::new2(1.0, 0.0)]).unwrap();
        assert!(contains_set(&k, &seg, &Vector::new2(1.0, 0.0), 1.0).unwrap());
        assert!(!contains_set(&k, &seg, &Vector::new2(0.5, 0.0), 1.0).unwrap());
        let ball_inner = SetModel::new(
            vec![Component::Complement(
                ComplementBody::new(ConvexBody::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap()))
                    .unwrap(),
            )],
            1.0,
        )
        .unwrap();
        assert!(contains_set(&ball_inner, &seg, &Vector::new2(1.0, 0.0), 1.0).unwrap());
        assert!(!contains_set(&ball_inner, &seg, &Vector::new2(-1.5, 0.0), 1.0).unwrap());
        assert!(contains_set(&ball_inner, &disk, &Vector::new2(0.0, 3.0), 2.0).unwrap());
    }
}
