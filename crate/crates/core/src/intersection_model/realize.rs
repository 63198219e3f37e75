use crate::error::{Error, Result};
use crate::geometry::{HPolytope, Halfspace, Vector};

/// An explicit `Xₙ` for a polytope `K`; `empty` when the intersection is.
#[derive(Clone, Debug)]
pub struct XnRealization {
    pub cell: HPolytope,
    pub empty: bool,
}

/// `∩ⱼ (K − ξⱼ)`: each facet `⟨u, x⟩ <= b` of `K` becomes
/// `⟨u, x⟩ <= b − maxⱼ ⟨u, ξⱼ⟩`.
pub fn realize_xn(k: &HPolytope, points: &[Vector]) -> Result<XnRealization> {
    if !k.is_bounded() {
        return Err(k_status_error(k));
    }
    let hs = k
        .halfspaces()
        .iter()
        .map(|h| {
            let reach = points
                .iter()
                .map(|p| h.normal.dot(p))
                .fold(f64::NEG_INFINITY, f64::max);
            Halfspace {
                normal: h.normal,
                offset: if points.is_empty() { h.offset } else { h.offset - reach },
            }
        })
        .collect();
    let cell = HPolytope::from_canonical(k.dim(), hs);
    let empty = cell.is_empty();
    Ok(XnRealization { cell, empty })
}

fn k_status_error(k: &HPolytope) -> Error {
    if k.is_empty() {
        Error::EmptyRegion
    } else {
        Error::UnboundedRegion
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn interval_oracle() {
        let k = HPolytope::axis_box(&Vector::new1(0.0), &Vector::new1(1.0)).unwrap();
        let x = realize_xn(&k, &[Vector::new1(0.2), Vector::new1(0.7)]).unwrap();
        let (lo, hi) = x.cell.as_axis_box().unwrap();
        assert!((lo.get(0) + 0.2).abs() < 1e-15 && (hi.get(0) - 0.3).abs() < 1e-15);
        let same = realize_xn(&k, &[Vector::new1(0.0)]).unwrap();
        assert_eq!(same.cell.as_axis_box(), k.as_axis_box());
    }

    #[test]
    fn membership_equals_all_translates() {
        let k = HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Vector> = (0..5)
            .map(|_| Vector::new2(rng.random::<f64>() * 0.5, rng.random::<f64>() * 0.5))
            .collect();
        let x = realize_xn(&k, &pts).unwrap();
        for _ in 0..10_000 {
            let y = Vector::new2(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            assert_eq!(x.cell.contains(&y), pts.iter().all(|p| k.contains(&(y + *p))));
        }
    }

    #[test]
    fn empty_intersection_is_flagged() {
        let k = HPolytope::axis_box(&Vector::new1(0.0), &Vector::new1(1.0)).unwrap();
        let x = realize_xn(&k, &[Vector::new1(0.0), Vector::new1(1.0)]).unwrap();
        assert!(!x.empty);
        let k = HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap();
        let far = realize_xn(&k, &[Vector::new2(0.0, 0.0), Vector::new2(1.5, 0.0)]).unwrap();
        assert!(far.empty);
    }
}
