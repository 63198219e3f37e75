//! Small exact routines on finite point sets: hemisphere containment of
//! directions, nearest point of a convex hull, and separation of a hull from
//! the interior of a polytope.

use super::polytope::HPolytope;
use super::tolerance::{DETERMINANT, FEASIBILITY};
use super::vector::Vector;

/// True iff some unit `v` has `⟨u, v⟩ >= 0` for every direction `u`.
///
/// d = 1: not both signs present. d = 2: the largest angular gap between
/// consecutive directions is at least π. d = 3: the candidate set `±u_i`,
/// `±(u_i × u_j)` and, for collinear inputs, two perpendiculars covers every
/// extreme ray and lineality direction of the dual cone.
pub fn in_closed_hemisphere(dim: usize, dirs: &[Vector]) -> bool {
    if dirs.is_empty() {
        return true;
    }
    match dim {
        1 => {
            let pos = dirs.iter().any(|u| u.get(0) > 0.0);
            let neg = dirs.iter().any(|u| u.get(0) < 0.0);
            !(pos && neg)
        }
        2 => {
            let mut angles: Vec<f64> = dirs.iter().map(|u| u.get(1).atan2(u.get(0))).collect();
            angles.sort_by(f64::total_cmp);
            let mut max_gap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
            for w in angles.windows(2) {
                max_gap = max_gap.max(w[1] - w[0]);
            }
            max_gap >= std::f64::consts::PI - FEASIBILITY
        }
        _ => {
            let feasible = |v: &Vector| dirs.iter().all(|u| u.dot(v) >= -FEASIBILITY);
            let mut candidates: Vec<Vector> = Vec::new();
            for u in dirs {
                candidates.push(*u);
                candidates.push(-*u);
            }
            let helper = |u: &Vector| {
                if u.get(0).abs() < 0.9 {
                    Vector::basis(3, 0)
                } else {
                    Vector::basis(3, 1)
                }
            };
            let p = dirs[0].cross(&helper(&dirs[0])).normalized().expect("nonzero");
            let q = dirs[0].cross(&p);
            candidates.extend([p, -p, q, -q]);
            if candidates.iter().any(feasible) {
                return true;
            }
            for (i, a) in dirs.iter().enumerate() {
                for b in &dirs[i + 1..] {
                    if let Some(n) = a.cross(b).normalized() {
                        if feasible(&n) || feasible(&-n) {
                            return true;
                        }
                    }
                }
            }
            false
        }
    }
}

/// Nearest point of `conv(points)` to `x`, and its distance.
///
/// Enumerates every subset of at most d+1 points, projects `x` onto the
/// affine hull of each affinely independent subset and keeps projections
/// with nonnegative barycentric weights. Every candidate lies in the hull and
/// the true nearest point lies in some such simplex, so the minimum is exact
/// up to rounding.
pub fn nearest_in_hull(x: &Vector, points: &[Vector]) -> (Vector, f64) {
    assert!(!points.is_empty(), "hull of an empty point set");
    let dim = x.dim();
    let mut best = (points[0], x.distance(&points[0]));
    let max_k = (dim + 1).min(points.len());
    let mut subset = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        for_each_combination(points.len(), k, &mut subset, &mut |idx| {
            if let Some(y) = project_onto_simplex_face(x, points, idx) {
                let d = x.distance(&y);
                if d < best.1 {
                    best = (y, d);
                }
            }
        });
    }
    best
}

fn for_each_combination(n: usize, k: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if buf.len() == k {
            f(buf);
            return;
        }
        for i in start..n {
            if n - i < k - buf.len() {
                break;
            }
            buf.push(i);
            rec(i + 1, n, k, buf, f);
            buf.pop();
        }
    }
    buf.clear();
    rec(0, n, k, buf, f);
}

/// Orthogonal projection of `x` onto `aff(points[idx])`, if it falls inside
/// the simplex.
fn project_onto_simplex_face(x: &Vector, points: &[Vector], idx: &[usize]) -> Option<Vector> {
    let p0 = points[idx[0]];
    if idx.len() == 1 {
        return Some(p0);
    }
    let edges: Vec<Vector> = idx[1..].iter().map(|&i| points[i] - p0).collect();
    let k = edges.len();
    let mut gram = [[0.0; 4]; 3];
    let rhs_vec = *x - p0;
    for r in 0..k {
        for c in 0..k {
            gram[r][c] = edges[r].dot(&edges[c]);
        }
        gram[r][3] = edges[r].dot(&rhs_vec);
    }
    let scale = edges.iter().map(|e| e.norm_squared()).fold(0.0, f64::max);
    let lambda = solve_augmented(&mut gram, k, DETERMINANT * scale.max(1e-300))?;
    let sum: f64 = lambda[..k].iter().sum();
    if lambda[..k].iter().any(|&l| l < -1e-12) || sum > 1.0 + 1e-12 {
        return None;
    }
    let mut y = p0;
    for (e, l) in edges.iter().zip(lambda.iter()) {
        y = y + e.scale(*l);
    }
    Some(y)
}

/// Gaussian elimination with partial pivoting on a k×(k+1) augmented matrix.
fn solve_augmented(m: &mut [[f64; 4]; 3], k: usize, pivot_tol: f64) -> Option<[f64; 3]> {
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() <= pivot_tol {
            return None;
        }
        m.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    let mut out = [0.0; 3];
    for i in 0..k {
        out[i] = m[i][3] / m[i][i];
    }
    Some(out)
}

/// True iff `conv(points)` does not meet the open interior of the bounded
/// polytope `poly`, decided by a separating-axis search.
///
/// Candidate axes: the polytope's facet normals, normals of the lines
/// (d = 2) or planes (d = 3) spanned by the point set, and in d = 3 the cross
/// products of polytope edges with point differences and the differences
/// between points and polytope vertices.
pub fn hull_avoids_interior(points: &[Vector], poly: &HPolytope) -> bool {
    let dim = poly.dim();
    let pverts = poly.vertices();
    debug_assert!(!pverts.is_empty());
    let separates = |w: &Vector| -> bool {
        let max_pts = points.iter().map(|p| p.dot(w)).fold(f64::NEG_INFINITY, f64::max);
        let min_poly = pverts.iter().map(|v| v.dot(w)).fold(f64::INFINITY, f64::min);
        let scale = 1.0 + w.norm() * (points[0].max_abs() + pverts[0].max_abs());
        max_pts <= min_poly + FEASIBILITY * scale
    };
    let try_axis = |w: &Vector| separates(w) || separates(&-*w);

    if poly.halfspaces().iter().any(|h| try_axis(&h.normal)) {
        return true;
    }
    match dim {
        1 => false,
        2 => {
            for (i, a) in points.iter().enumerate() {
                for b in &points[i + 1..] {
                    let d = *b - *a;
                    let w = Vector::new2(-d.get(1), d.get(0));
                    if w.norm() > 0.0 && try_axis(&w) {
                        return true;
                    }
                }
            }
            false
        }
        _ => {
            let mut diffs = Vec::new();
            for (i, a) in points.iter().enumerate() {
                for b in &points[i + 1..] {
                    diffs.push(*b - *a);
                }
            }
            for (i, a) in diffs.iter().enumerate() {
                for b in &diffs[i + 1..] {
                    let w = a.cross(b);
                    if w.norm() > 0.0 && try_axis(&w) {
                        return true;
                    }
                }
            }
            for e in polytope_edges(poly) {
                for d in &diffs {
                    let w = e.cross(d);
                    if w.norm() > 0.0 && try_axis(&w) {
                        return true;
                    }
                }
            }
            for p in points {
                for v in pverts {
                    let w = *p - *v;
                    if w.norm() > 0.0 && try_axis(&w) {
                        return true;
                    }
                }
            }
            false
        }
    }
}

/// Edge directions of a bounded 3D polytope: vertex pairs sharing two facets.
fn polytope_edges(poly: &HPolytope) -> Vec<Vector> {
    let verts = poly.vertices();
    let incident: Vec<Vec<usize>> = verts
        .iter()
        .map(|v| {
            poly.halfspaces()
                .iter()
                .enumerate()
                .filter(|(_, h)| h.slack(v).abs() <= FEASIBILITY * (1.0 + v.max_abs()))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            let shared = incident[i].iter().filter(|f| incident[j].contains(f)).count();
            if shared >= 2 {
                edges.push(verts[j] - verts[i]);
            }
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hemisphere_2d() {
        let axes: Vec<Vector> = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
            .iter()
            .map(|&(x, y)| Vector::new2(x, y))
            .collect();
        assert!(!in_closed_hemisphere(2, &axes));
        let upper: Vec<Vector> = (0..=10)
            .map(|k| {
                let t = PI * k as f64 / 10.0;
                Vector::new2(t.cos(), t.sin())
            })
            .collect();
        assert!(in_closed_hemisphere(2, &upper));
    }

    #[test]
    fn hemisphere_3d_collinear_and_octahedron() {
        let e = |i| Vector::basis(3, i);
        assert!(in_closed_hemisphere(3, &[e(0), -e(0)]));
        assert!(in_closed_hemisphere(3, &[e(0), -e(0), e(1), -e(1)]));
        assert!(!in_closed_hemisphere(3, &[e(0), -e(0), e(1), -e(1), e(2), -e(2)]));
        assert!(in_closed_hemisphere(3, &[e(0), e(1), e(2), -e(2)]));
    }

    #[test]
    fn nearest_point_of_triangle() {
        let tri = [
            Vector::new2(0.0, 0.0),
            Vector::new2(2.0, 0.0),
            Vector::new2(0.0, 2.0),
        ];
        let (y, d) = nearest_in_hull(&Vector::new2(2.0, 2.0), &tri);
        assert!((y.get(0) - 1.0).abs() < 1e-12 && (y.get(1) - 1.0).abs() < 1e-12);
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
        let (_, inside) = nearest_in_hull(&Vector::new2(0.5, 0.5), &tri);
        assert!(inside < 1e-12);
        let (_, below) = nearest_in_hull(&Vector::new2(1.0, -3.0), &tri);
        assert!((below - 3.0).abs() < 1e-12);
    }

    #[test]
    fn separation_from_cube_interior() {
        let cube = HPolytope::axis_box(&Vector::new3(-1.0, -1.0, -1.0), &Vector::new3(1.0, 1.0, 1.0))
            .unwrap();
        // tetrahedron touching the face x = 1 from outside
        let outside = [
            Vector::new3(1.0, 0.0, 0.0),
            Vector::new3(2.0, 0.5, 0.0),
            Vector::new3(2.0, -0.5, 0.5),
            Vector::new3(2.0, 0.0, -0.5),
        ];
        assert!(hull_avoids_interior(&outside, &cube));
        let crossing = [Vector::new3(0.9, 0.0, 0.0), Vector::new3(2.0, 0.0, 0.0)];
        assert!(!hull_avoids_interior(&crossing, &cube));
        // segment passing diagonally near an edge, outside the cube
        let diag = [Vector::new3(2.1, 0.0, 0.0), Vector::new3(0.0, 2.1, 0.0)];
        assert!(hull_avoids_interior(&diag, &cube));
        let diag_in = [Vector::new3(1.9, 0.0, 0.0), Vector::new3(0.0, 1.9, 0.0)];
        assert!(!hull_avoids_interior(&diag_in, &cube));
    }
}
