use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::body::{Ball, ConvexBody};
use super::polytope::{planar_polygon_area, HPolytope};
use super::vector::{check_dim, Vector};
use crate::error::{Error, Result};
use crate::stats::Estimate;

/// Volume `κ_d` of the unit ball.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => panic!("dimension {dim} unsupported"),
    }
}

/// Surface area `ω_d = d·κ_d` of the unit sphere (counting measure in d = 1).
pub fn unit_sphere_area(dim: usize) -> f64 {
    dim as f64 * unit_ball_volume(dim)
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    pub lo: Vector,
    pub hi: Vector,
}

impl AxisBox {
    pub fn new(lo: Vector, hi: Vector) -> Result<Self> {
        check_dim(lo.dim(), hi.dim())?;
        if (0..lo.dim()).any(|i| !(lo.get(i) <= hi.get(i))) {
            return Err(Error::InvalidInput(format!("box lo {lo:?} exceeds hi {hi:?}")));
        }
        Ok(Self { lo, hi })
    }

    /// `[−h, h]^d`.
    pub fn centered(dim: usize, half_width: f64) -> Self {
        Self {
            lo: Vector::from_fn(dim, |_| -half_width),
            hi: Vector::from_fn(dim, |_| half_width),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.hi.get(i) - self.lo.get(i)).product()
    }

    pub fn center(&self) -> Vector {
        (self.lo + self.hi).scale(0.5)
    }

    /// Radius of the ball about the center that contains the box.
    pub fn half_diagonal(&self) -> f64 {
        (self.hi - self.lo).norm() * 0.5
    }

    /// Largest distance from the origin to a point of the box.
    pub fn max_norm(&self) -> f64 {
        Vector::from_fn(self.dim(), |i| self.lo.get(i).abs().max(self.hi.get(i).abs())).norm()
    }

    #[inline]
    pub fn contains(&self, x: &Vector) -> bool {
        (0..self.dim()).all(|i| self.lo.get(i) <= x.get(i) && x.get(i) <= self.hi.get(i))
    }

    pub fn overlaps_interior(&self, other: &AxisBox) -> bool {
        (0..self.dim()).all(|i| self.lo.get(i) < other.hi.get(i) && other.lo.get(i) < self.hi.get(i))
    }

    pub fn to_polytope(&self) -> Result<HPolytope> {
        HPolytope::axis_box(&self.lo, &self.hi)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        Vector::from_fn(self.dim(), |i| {
            let (a, b) = (self.lo.get(i), self.hi.get(i));
            a + (b - a) * rng.random::<f64>()
        })
    }
}

/// Bounded sampling window for hit-or-miss estimates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SamplingWindow {
    Box(AxisBox),
    Ball(Ball),
}

impl SamplingWindow {
    pub fn volume(&self) -> f64 {
        match self {
            Self::Box(b) => b.volume(),
            Self::Ball(b) => unit_ball_volume(b.dim()) * b.radius.powi(b.dim() as i32),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        match self {
            Self::Box(b) => b.sample(rng),
            Self::Ball(b) => {
                let d = b.dim();
                loop {
                    let x = Vector::from_fn(d, |_| 2.0 * rng.random::<f64>() - 1.0);
                    if x.norm_squared() <= 1.0 {
                        return b.center + x.scale(b.radius);
                    }
                }
            }
        }
    }
}

/// Hit-or-miss volume estimate of `{x : region(x)}` inside `window`.
pub fn volume_mc<R: Rng + ?Sized>(
    region: impl Fn(&Vector) -> bool,
    window: &SamplingWindow,
    samples: u64,
    rng: &mut R,
) -> Estimate {
    assert!(samples >= 1, "need at least one sample");
    let mut hits = 0u64;
    for _ in 0..samples {
        if region(&window.sample(rng)) {
            hits += 1;
        }
    }
    Estimate::from_hits(hits, samples, window.volume())
}

/// Counter-clockwise vertex cycle of a bounded nonempty polygon.
pub fn polygon_vertices(p: &HPolytope) -> Result<Vec<Vector>> {
    if p.dim() != 2 {
        return Err(Error::UnsupportedDimension(p.dim()));
    }
    if !p.is_bounded() {
        return Err(p.unbounded_or_empty());
    }
    Ok(p.vertices().to_vec())
}

fn shoelace(v: &[Vector]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        acc += v[i].perp_dot(&v[(i + 1) % n]);
    }
    0.5 * acc.abs()
}

fn perimeter(v: &[Vector]) -> f64 {
    let n = v.len();
    match n {
        0 | 1 => 0.0,
        2 => 2.0 * v[0].distance(&v[1]),
        _ => (0..n).map(|i| v[i].distance(&v[(i + 1) % n])).sum(),
    }
}

/// Volume of a bounded polytope (d <= 3); empty regions have volume zero.
pub fn polytope_volume(p: &HPolytope) -> Result<f64> {
    if p.is_empty() {
        return Ok(0.0);
    }
    if !p.is_bounded() {
        return Err(Error::UnboundedRegion);
    }
    let v = p.vertices();
    Ok(match p.dim() {
        1 => {
            if v.len() < 2 {
                0.0
            } else {
                (v[1].get(0) - v[0].get(0)).abs()
            }
        }
        2 => shoelace(v),
        _ => {
            if v.len() < 4 {
                return Ok(0.0);
            }
            let n = v.len() as f64;
            let mut c = Vector::zeros(3);
            for x in v {
                c = c + *x;
            }
            let c = c.scale(1.0 / n);
            let mut vol = 0.0;
            for (i, h) in p.halfspaces().iter().enumerate() {
                let fv = p.facet_vertices(i);
                if fv.len() >= 3 {
                    vol += planar_polygon_area(&fv, &h.normal) * h.slack(&c) / 3.0;
                }
            }
            vol
        }
    })
}

/// Exact volume of a convex body: interval length, polygon area, polytope
/// volume via facet pyramids, or `κ_d r^d` for a ball.
pub fn volume_exact(body: &ConvexBody) -> Result<f64> {
    match body {
        ConvexBody::Polytope(p) => polytope_volume(p),
        ConvexBody::Ball(b) => Ok(unit_ball_volume(b.dim()) * b.radius.powi(b.dim() as i32)),
    }
}

/// `(V₀, V₁, V₂)` of a nonempty polygon: Euler characteristic, half the
/// perimeter and the area.
pub fn intrinsic_volumes_2d(p: &HPolytope) -> Result<[f64; 3]> {
    let v = polygon_vertices(p)?;
    Ok([1.0, 0.5 * perimeter(&v), shoelace(&v)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::polytope::Halfspace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit_square() -> HPolytope {
        HPolytope::axis_box(&Vector::new2(0.0, 0.0), &Vector::new2(1.0, 1.0)).unwrap()
    }

    #[test]
    fn exact_volumes() {
        assert_eq!(polytope_volume(&unit_square()).unwrap(), 1.0);
        let inner = HPolytope::axis_box(&Vector::new2(0.1, 0.1), &Vector::new2(0.9, 0.9)).unwrap();
        assert!((polytope_volume(&inner).unwrap() - 0.64).abs() < 1e-15);
        let disk = ConvexBody::Ball(Ball::new(Vector::zeros(2), 1.0).unwrap());
        assert_eq!(volume_exact(&disk).unwrap(), PI);
        let cube = HPolytope::axis_box(&Vector::new3(0.0, 0.0, 0.0), &Vector::new3(1.0, 2.0, 3.0))
            .unwrap();
        assert!((polytope_volume(&cube).unwrap() - 6.0).abs() < 1e-12);
        let seg = HPolytope::axis_box(&Vector::new1(-0.25), &Vector::new1(1.0)).unwrap();
        assert_eq!(polytope_volume(&seg).unwrap(), 1.25);
    }

    #[test]
    fn empty_polygon_is_an_error_for_vertices() {
        let hs = |n: [f64; 2], b| Halfspace::new(Vector::new2(n[0], n[1]), b).unwrap();
        let empty = HPolytope::region(
            2,
            vec![hs([1.0, 0.0], -1.0), hs([-1.0, 1.0], -1.0), hs([-1.0, -1.0], -1.0)],
        )
        .unwrap();
        assert_eq!(polygon_vertices(&empty).unwrap_err(), Error::EmptyRegion);
    }

    #[test]
    fn intrinsic_volumes_of_square_and_segment() {
        assert_eq!(intrinsic_volumes_2d(&unit_square()).unwrap(), [1.0, 2.0, 1.0]);
        let hs = |n: [f64; 2], b| Halfspace::new(Vector::new2(n[0], n[1]), b).unwrap();
        let flat = HPolytope::new(
            2,
            vec![hs([0.0, 1.0], 0.0), hs([0.0, -1.0], 0.0), hs([1.0, 0.0], 3.0), hs([-1.0, 0.0], 0.0)],
        )
        .unwrap();
        let iv = intrinsic_volumes_2d(&flat).unwrap();
        assert_eq!(iv[0], 1.0);
        // a segment of length 3 has half-perimeter 3 (its perimeter traverses it twice)
        assert!((iv[1] - 3.0).abs() < 1e-12);
        assert_eq!(iv[2], 0.0);
    }

    #[test]
    fn empty_region_has_zero_mc_volume() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let est = volume_mc(|_| false, &SamplingWindow::Box(AxisBox::centered(2, 1.0)), 1000, &mut rng);
        assert_eq!(est, Estimate::exact(0.0));
    }
}
