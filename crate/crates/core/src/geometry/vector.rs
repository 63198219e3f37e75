use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 3;

/// A point or direction in ℝ^d, `1 <= d <= 3`.
///
/// Stored inline so that hot sampling loops never allocate. Unused trailing
/// coordinates are kept at zero, which makes derived equality meaningful.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector {
    coords: [f64; MAX_DIM],
    dim: usize,
}

impl Vector {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let dim = coords.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinate in {coords:?}"
            )));
        }
        let mut buf = [0.0; MAX_DIM];
        buf[..dim].copy_from_slice(coords);
        Ok(Self { coords: buf, dim })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} unsupported");
        Self {
            coords: [0.0; MAX_DIM],
            dim,
        }
    }

    /// The `axis`-th standard basis vector.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[axis] = 1.0;
        v
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize) -> f64) -> Self {
        let mut v = Self::zeros(dim);
        for i in 0..dim {
            v.coords[i] = f(i);
        }
        v
    }

    /// Shorthand constructors used throughout tests and configs.
    pub fn new1(x: f64) -> Self {
        Self::from_fn(1, |_| x)
    }

    pub fn new2(x: f64, y: f64) -> Self {
        let c = [x, y];
        Self::from_fn(2, |i| c[i])
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        let c = [x, y, z];
        Self::from_fn(3, |i| c[i])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        debug_assert!(i < self.dim);
        self.coords[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: f64) {
        debug_assert!(i < self.dim);
        self.coords[i] = value;
    }

    #[inline]
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim {
            acc += self.coords[i] * other.coords[i];
        }
        acc
    }

    #[inline]
    pub fn norm_squared(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    #[inline]
    pub fn scale(&self, s: f64) -> Vector {
        let mut out = *self;
        for i in 0..self.dim {
            out.coords[i] *= s;
        }
        out
    }

    /// Unit vector in the same direction; `None` for (near) zero vectors.
    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE || !n.is_finite() {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        (*self - *other).norm()
    }

    /// 3D cross product. Panics in other dimensions.
    pub fn cross(&self, other: &Vector) -> Vector {
        assert!(self.dim == 3 && other.dim == 3, "cross product needs d = 3");
        let (a, b) = (&self.coords, &other.coords);
        Vector::new3(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    }

    /// 2D scalar cross product `x₁y₂ − x₂y₁`.
    #[inline]
    pub fn perp_dot(&self, other: &Vector) -> f64 {
        debug_assert!(self.dim == 2 && other.dim == 2);
        self.coords[0] * other.coords[1] - self.coords[1] * other.coords[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|c| c.is_finite())
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(value: Vec<f64>) -> Result<Self> {
        Vector::new(&value)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.as_slice().to_vec()
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Add for Vector {
    type Output = Vector;

    #[inline]
    fn add(mut self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            self.coords[i] += rhs.coords[i];
        }
        self
    }
}

impl Sub for Vector {
    type Output = Vector;

    #[inline]
    fn sub(mut self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            self.coords[i] -= rhs.coords[i];
        }
        self
    }
}

impl Neg for Vector {
    type Output = Vector;

    #[inline]
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;

    #[inline]
    fn mul(self, rhs: f64) -> Vector {
        self.scale(rhs)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
