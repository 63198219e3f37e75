//! Halfspace-represented polytopes in dimensions 1 to 3.
//!
//! A polytope is stored as a canonical list of closed halfspaces
//! `{x : ⟨u, x⟩ <= b}` with unit normals `u` and no repeated normals. The
//! halfspace order is preserved from the input (after merging), so per-facet
//! data supplied alongside a polytope can be indexed by position.
//!
//! Vertices are enumerated once at construction:
//! - d = 1: the two interval endpoints;
//! - d = 2: each constraint line is clipped by all other constraints and the
//!   surviving segment endpoints are collected, deduplicated and sorted
//!   counter-clockwise;
//! - d = 3: brute-force intersection of constraint triples. Fine for the
//!   handful of facets used here, not meant for large inputs.

use serde::{Deserialize, Serialize};

use super::hull::in_closed_hemisphere;
use super::tolerance::{DETERMINANT, FEASIBILITY, UNIT_NORM};
use super::vector::{check_dim, Vector};
use crate::error::{Error, Result};

/// Closed halfspace `⟨normal, x⟩ <= offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    /// Builds a halfspace, rescaling a non-unit normal (and its offset).
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        if !offset.is_finite() || !normal.is_finite() {
            return Err(Error::InvalidInput("non-finite halfspace".into()));
        }
        let n = normal.norm();
        if n <= 1e-300 {
            return Err(Error::InvalidInput("zero halfspace normal".into()));
        }
        if (n - 1.0).abs() <= UNIT_NORM {
            Ok(Self { normal, offset })
        } else {
            Ok(Self {
                normal: normal.scale(1.0 / n),
                offset: offset / n,
            })
        }
    }

    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        self.normal.dot(x) <= self.offset
    }

    /// `offset − ⟨normal, x⟩`; nonnegative inside.
    #[inline]
    pub fn slack(&self, x: &Vector) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

/// Outcome of the construction-time feasibility analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionStatus {
    /// Nonempty and bounded; vertices are available.
    Bounded,
    /// The normals lie in a closed hemisphere, so the region (if nonempty)
    /// contains a ray. Emptiness is not decided for such regions.
    Unbounded,
    /// Bounded normals but no feasible point.
    Empty,
}

#[derive(Clone, Debug)]
pub struct HPolytope {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    status: RegionStatus,
    vertices: Vec<Vector>,
}

impl HPolytope {
    /// A nonempty bounded polytope. Fails with `EmptyRegion` or
    /// `UnboundedRegion` otherwise.
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        let p = Self::region(dim, halfspaces)?;
        match p.status {
            RegionStatus::Bounded => Ok(p),
            RegionStatus::Empty => Err(Error::EmptyRegion),
            RegionStatus::Unbounded => Err(Error::UnboundedRegion),
        }
    }

    /// Any halfspace intersection; the status records whether it is bounded.
    pub fn region(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if !(1..=super::MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut canonical: Vec<Halfspace> = Vec::with_capacity(halfspaces.len());
        for h in halfspaces {
            check_dim(dim, h.normal.dim())?;
            let h = Halfspace::new(h.normal, h.offset)?;
            match canonical
                .iter_mut()
                .find(|c| (c.normal - h.normal).max_abs() <= UNIT_NORM)
            {
                Some(existing) => existing.offset = existing.offset.min(h.offset),
                None => canonical.push(h),
            }
        }
        Ok(Self::from_canonical(dim, canonical))
    }

    /// Skips normalization and merging; callers guarantee unit, distinct
    /// normals (e.g. translates of an already canonical polytope).
    pub(crate) fn from_canonical(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        let normals: Vec<Vector> = halfspaces.iter().map(|h| h.normal).collect();
        if halfspaces.is_empty() || in_closed_hemisphere(dim, &normals) {
            return Self {
                dim,
                halfspaces,
                status: RegionStatus::Unbounded,
                vertices: Vec::new(),
            };
        }
        let vertices = match dim {
            1 => interval_vertices(&halfspaces),
            2 => polygon_vertices_clipped(&halfspaces),
            _ => triple_vertices(&halfspaces),
        };
        let status = if vertices.is_empty() {
            RegionStatus::Empty
        } else {
            RegionStatus::Bounded
        };
        Self {
            dim,
            halfspaces,
            status,
            vertices,
        }
    }

    /// Axis-aligned box `[lo, hi]`. Halfspaces are ordered per axis as
    /// `x_i <= hi_i` then `−x_i <= −lo_i`.
    pub fn axis_box(lo: &Vector, hi: &Vector) -> Result<Self> {
        check_dim(lo.dim(), hi.dim())?;
        let dim = lo.dim();
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            if lo.get(i) > hi.get(i) {
                return Err(Error::EmptyRegion);
            }
            let e = Vector::basis(dim, i);
            hs.push(Halfspace {
                normal: e,
                offset: hi.get(i),
            });
            hs.push(Halfspace {
                normal: -e,
                offset: -lo.get(i),
            });
        }
        Self::new(dim, hs)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    #[inline]
    pub fn status(&self) -> RegionStatus {
        self.status
    }

    /// Nonempty and bounded (the validated-construction flag).
    #[inline]
    pub fn is_bounded(&self) -> bool {
        self.status == RegionStatus::Bounded
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.status == RegionStatus::Empty
    }

    /// Vertices of a bounded polytope (counter-clockwise in d = 2).
    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Exact membership: every constraint holds without slack.
    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn contains_with_tolerance(&self, x: &Vector, tol: f64) -> bool {
        self.halfspaces.iter().all(|h| h.slack(x) >= -tol)
    }

    /// `x ↦ x + shift`.
    pub fn translate(&self, shift: &Vector) -> Self {
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                normal: h.normal,
                offset: h.offset + h.normal.dot(shift),
            })
            .collect();
        Self::from_canonical(self.dim, hs)
    }

    /// `x ↦ factor · x` for `factor > 0`.
    pub fn scale(&self, factor: f64) -> Self {
        assert!(factor > 0.0, "scale factor must be positive");
        let hs = self
            .halfspaces
            .iter()
            .map(|h| Halfspace {
                normal: h.normal,
                offset: h.offset * factor,
            })
            .collect();
        Self::from_canonical(self.dim, hs)
    }

    pub fn intersect(&self, other: &HPolytope) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut hs = self.halfspaces.clone();
        hs.extend_from_slice(&other.halfspaces);
        Self::region(self.dim, hs)
    }

    /// Returns `(lo, hi)` if this is an axis-aligned box.
    pub fn as_axis_box(&self) -> Option<(Vector, Vector)> {
        if !self.is_bounded() || self.halfspaces.len() != 2 * self.dim {
            return None;
        }
        let mut lo = Vector::zeros(self.dim);
        let mut hi = Vector::zeros(self.dim);
        let mut seen = [[false; 2]; super::MAX_DIM];
        for h in &self.halfspaces {
            let axis = (0..self.dim).find(|&i| (h.normal.get(i).abs() - 1.0).abs() <= UNIT_NORM)?;
            if h.normal.get(axis) > 0.0 {
                hi.set(axis, h.offset);
                seen[axis][1] = true;
            } else {
                lo.set(axis, -h.offset);
                seen[axis][0] = true;
            }
        }
        seen[..self.dim]
            .iter()
            .all(|s| s[0] && s[1])
            .then_some((lo, hi))
    }

    /// max over vertices of ⟨v, u⟩. Bounded polytopes only.
    pub fn support(&self, u: &Vector) -> Result<f64> {
        if !self.is_bounded() {
            return Err(self.unbounded_or_empty());
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Vertices lying on the hyperplane of the `index`-th halfspace.
    pub fn facet_vertices(&self, index: usize) -> Vec<Vector> {
        let h = &self.halfspaces[index];
        self.vertices
            .iter()
            .copied()
            .filter(|v| h.slack(v).abs() <= FEASIBILITY * (1.0 + h.offset.abs()))
            .collect()
    }

    /// (d−1)-dimensional Hausdorff measure of the facet cut out by the
    /// `index`-th halfspace; zero for redundant constraints. In d = 1 the
    /// facet is a point and carries counting measure 1 when active.
    pub fn facet_measure(&self, index: usize) -> Result<f64> {
        if !self.is_bounded() {
            return Err(self.unbounded_or_empty());
        }
        let verts = self.facet_vertices(index);
        Ok(match self.dim {
            1 => {
                if verts.is_empty() {
                    0.0
                } else {
                    1.0
                }
            }
            2 => {
                if verts.len() < 2 {
                    0.0
                } else {
                    let mut best: f64 = 0.0;
                    for a in &verts {
                        for b in &verts {
                            best = best.max(a.distance(b));
                        }
                    }
                    best
                }
            }
            _ => planar_polygon_area(&verts, &self.halfspaces[index].normal),
        })
    }

    pub(crate) fn unbounded_or_empty(&self) -> Error {
        match self.status {
            RegionStatus::Empty => Error::EmptyRegion,
            _ => Error::UnboundedRegion,
        }
    }

    /// Point strictly inside, if the polytope has nonempty interior.
    pub fn interior_point(&self) -> Option<Vector> {
        if !self.is_bounded() {
            return None;
        }
        let n = self.vertices.len() as f64;
        let mut c = Vector::zeros(self.dim);
        for v in &self.vertices {
            c = c + *v;
        }
        let c = c.scale(1.0 / n);
        self.halfspaces
            .iter()
            .all(|h| h.slack(&c) > FEASIBILITY)
            .then_some(c)
    }
}

fn interval_vertices(hs: &[Halfspace]) -> Vec<Vector> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for h in hs {
        let u = h.normal.get(0);
        if u > 0.0 {
            hi = hi.min(h.offset / u);
        } else {
            lo = lo.max(h.offset / u);
        }
    }
    if lo > hi + FEASIBILITY {
        Vec::new()
    } else if hi - lo <= FEASIBILITY {
        vec![Vector::new1(0.5 * (lo + hi))]
    } else {
        vec![Vector::new1(lo), Vector::new1(hi)]
    }
}

/// Counter-clockwise vertex cycle of a bounded 2D halfspace intersection.
fn polygon_vertices_clipped(hs: &[Halfspace]) -> Vec<Vector> {
    let mut points = Vec::new();
    for (i, hi) in hs.iter().enumerate() {
        let p0 = hi.normal.scale(hi.offset);
        let dir = Vector::new2(-hi.normal.get(1), hi.normal.get(0));
        let mut s_lo = f64::NEG_INFINITY;
        let mut s_hi = f64::INFINITY;
        let mut feasible = true;
        for (j, hj) in hs.iter().enumerate() {
            if i == j {
                continue;
            }
            let a = hj.normal.dot(&dir);
            let c = hj.offset - hj.normal.dot(&p0);
            if a.abs() <= DETERMINANT {
                if c < -FEASIBILITY {
                    feasible = false;
                    break;
                }
            } else if a > 0.0 {
                s_hi = s_hi.min(c / a);
            } else {
                s_lo = s_lo.max(c / a);
            }
        }
        if !feasible || s_hi < s_lo - FEASIBILITY || !s_lo.is_finite() || !s_hi.is_finite() {
            continue;
        }
        if s_hi < s_lo {
            let mid = 0.5 * (s_lo + s_hi);
            s_lo = mid;
            s_hi = mid;
        }
        points.push(p0 + dir.scale(s_lo));
        points.push(p0 + dir.scale(s_hi));
    }
    order_ccw(dedup_points(points))
}

fn dedup_points(points: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::with_capacity(points.len());
    for p in points {
        let scale = 1.0 + p.max_abs();
        if !out.iter().any(|q| (*q - p).max_abs() <= FEASIBILITY * scale) {
            out.push(p);
        }
    }
    out
}

fn order_ccw(mut points: Vec<Vector>) -> Vec<Vector> {
    if points.len() < 3 {
        return points;
    }
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p.get(0)).sum::<f64>() / n;
    let cy = points.iter().map(|p| p.get(1)).sum::<f64>() / n;
    points.sort_by(|a, b| {
        let ta = (a.get(1) - cy).atan2(a.get(0) - cx);
        let tb = (b.get(1) - cy).atan2(b.get(0) - cx);
        ta.total_cmp(&tb)
    });
    points
}

fn triple_vertices(hs: &[Halfspace]) -> Vec<Vector> {
    let m = hs.len();
    let mut points = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            let nij = hs[i].normal.cross(&hs[j].normal);
            for k in (j + 1)..m {
                let det = nij.dot(&hs[k].normal);
                if det.abs() <= DETERMINANT {
                    continue;
                }
                let njk = hs[j].normal.cross(&hs[k].normal);
                let nki = hs[k].normal.cross(&hs[i].normal);
                let x = (njk.scale(hs[i].offset) + nki.scale(hs[j].offset) + nij.scale(hs[k].offset))
                    .scale(1.0 / det);
                let scale = 1.0 + x.max_abs();
                if hs.iter().all(|h| h.slack(&x) >= -FEASIBILITY * scale) {
                    points.push(x);
                }
            }
        }
    }
    dedup_points(points)
}

/// Area of a planar convex polygon in ℝ³ given its (unordered) vertices and
/// the plane normal.
pub(crate) fn planar_polygon_area(verts: &[Vector], normal: &Vector) -> f64 {
    if verts.len() < 3 {
        return 0.0;
    }
    let ordered = order_in_plane(verts, normal);
    let mut acc = Vector::zeros(3);
    let o = ordered[0];
    for w in ordered[1..].windows(2) {
        acc = acc + (w[0] - o).cross(&(w[1] - o));
    }
    0.5 * acc.dot(normal).abs()
}

/// Orders coplanar points by angle around their centroid, counter-clockwise
/// when viewed against `normal`.
pub(crate) fn order_in_plane(verts: &[Vector], normal: &Vector) -> Vec<Vector> {
    let n = verts.len() as f64;
    let mut c = Vector::zeros(3);
    for v in verts {
        c = c + *v;
    }
    let c = c.scale(1.0 / n);
    // orthonormal frame (e1, e2) of the plane
    let helper = if normal.get(0).abs() < 0.9 {
        Vector::basis(3, 0)
    } else {
        Vector::basis(3, 1)
    };
    let e1 = normal.cross(&helper).normalized().expect("nonzero");
    let e2 = normal.cross(&e1);
    let mut out = verts.to_vec();
    out.sort_by(|a, b| {
        let da = *a - c;
        let db = *b - c;
        da.dot(&e2)
            .atan2(da.dot(&e1))
            .total_cmp(&db.dot(&e2).atan2(db.dot(&e1)))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(n: &[f64], b: f64) -> Halfspace {
        Halfspace::new(Vector::new(n).unwrap(), b).unwrap()
    }

    #[test]
    fn unit_square_vertices_ccw() {
        let sq = HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap();
        let v = sq.vertices();
        assert_eq!(v.len(), 4);
        let expected = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        // cyclic rotation allowed; find the start
        let start = v
            .iter()
            .position(|p| p.get(0).abs() < 1e-12 && p.get(1).abs() < 1e-12)
            .unwrap();
        for (k, (x, y)) in expected.iter().enumerate() {
            let p = v[(start + k) % 4];
            assert!((p.get(0) - x).abs() < 1e-12 && (p.get(1) - y).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicate_normals_keep_smaller_offset() {
        let p = HPolytope::new(
            1,
            vec![hs(&[1.0], 2.0), hs(&[2.0], 2.0), hs(&[-1.0], 0.0)],
        )
        .unwrap();
        assert_eq!(p.halfspaces().len(), 2);
        assert_eq!(p.halfspaces()[0].offset, 1.0);
    }

    #[test]
    fn empty_and_unbounded_detected() {
        let empty = HPolytope::region(
            2,
            vec![hs(&[1.0, 0.0], -1.0), hs(&[-1.0, 1.0], -1.0), hs(&[-1.0, -1.0], -1.0)],
        )
        .unwrap();
        assert_eq!(empty.status(), RegionStatus::Empty);
        assert_eq!(
            HPolytope::new(2, vec![hs(&[1.0, 0.0], 1.0), hs(&[-1.0, 0.0], 1.0)]).unwrap_err(),
            Error::UnboundedRegion
        );
    }

    #[test]
    fn cube_vertices_and_facets() {
        let c = HPolytope::axis_box(&Vector::new3(0.0, 0.0, 0.0), &Vector::new3(1.0, 2.0, 3.0))
            .unwrap();
        assert_eq!(c.vertices().len(), 8);
        // facet x <= 1 has area 2 * 3
        assert!((c.facet_measure(0).unwrap() - 6.0).abs() < 1e-12);
        assert!((c.facet_measure(4).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(c.as_axis_box().unwrap().1, Vector::new3(1.0, 2.0, 3.0));
    }

    #[test]
    fn degenerate_segment_polygon() {
        let p = HPolytope::new(
            2,
            vec![
                hs(&[0.0, 1.0], 0.0),
                hs(&[0.0, -1.0], 0.0),
                hs(&[1.0, 0.0], 2.0),
                hs(&[-1.0, 0.0], 0.0),
            ],
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 2);
        assert!(p.interior_point().is_none());
    }

    #[test]
    fn translate_and_scale() {
        let sq = HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap();
        let t = sq.translate(&Vector::new2(1.0, -1.0)).scale(2.0);
        assert_eq!(
            t.as_axis_box().unwrap(),
            (Vector::new2(2.0, -2.0), Vector::new2(4.0, 0.0))
        );
    }
}
