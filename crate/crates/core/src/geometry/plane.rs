use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Gram-determinant threshold below which spanning vectors count as dependent.
pub const GRAM_TOLERANCE: f64 = 1e-12;

/// Projector-distance tolerance for subspace equality.
pub const SUBSPACE_TOLERANCE: f64 = 1e-8;

/// A vector of R⁴ ≅ C², with `(z, w) ↔ (Re z, Im z, Re w, Im w)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vector4(pub [f64; 4]);

impl Vector4 {
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self([a, b, c, d])
    }

    pub fn from_complex(z: Complex64, w: Complex64) -> Self {
        Self([z.re, z.im, w.re, w.im])
    }

    pub fn to_complex(self) -> (Complex64, Complex64) {
        let [a, b, c, d] = self.0;
        (Complex64::new(a, b), Complex64::new(c, d))
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Multiplication by `i` on C².
    pub fn mul_i(self) -> Self {
        let [a, b, c, d] = self.0;
        Self([-b, a, -d, c])
    }
}

impl Add for Vector4 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Vector4 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Mul<Vector4> for f64 {
    type Output = Vector4;
    fn mul(self, v: Vector4) -> Vector4 {
        Vector4(v.0.map(|c| self * c))
    }
}

impl Neg for Vector4 {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|c| -c))
    }
}

/// An unoriented real 2-plane in R⁴ ≅ C², stored by two spanning vectors.
///
/// The spanning vectors carry an orientation, which only matters for
/// [`gluck_warner`](super::gluck_warner); every other operation depends on the
/// subspace alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plane {
    v1: Vector4,
    v2: Vector4,
}

fn gram_det(v1: Vector4, v2: Vector4) -> f64 {
    v1.dot(v1) * v2.dot(v2) - v1.dot(v2).powi(2)
}

impl Plane {
    pub fn new(v1: Vector4, v2: Vector4) -> Result<Self> {
        let gram = gram_det(v1, v2);
        if !(gram >= GRAM_TOLERANCE) {
            return Err(Error::DegeneratePlane { gram });
        }
        Ok(Self { v1, v2 })
    }

    /// Builds a plane the caller knows to be nondegenerate.
    pub(crate) fn new_unchecked(v1: Vector4, v2: Vector4) -> Self {
        Self { v1, v2 }
    }

    pub fn from_complex(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> Result<Self> {
        Self::new(Vector4::from_complex(a.0, a.1), Vector4::from_complex(b.0, b.1))
    }

    /// `C × {0}`.
    pub fn first_axis() -> Self {
        Self::new_unchecked(Vector4::new(1.0, 0.0, 0.0, 0.0), Vector4::new(0.0, 1.0, 0.0, 0.0))
    }

    /// `{0} × C`.
    pub fn second_axis() -> Self {
        Self::new_unchecked(Vector4::new(0.0, 0.0, 1.0, 0.0), Vector4::new(0.0, 0.0, 0.0, 1.0))
    }

    pub fn v1(&self) -> Vector4 {
        self.v1
    }

    pub fn v2(&self) -> Vector4 {
        self.v2
    }

    pub fn gram_determinant(&self) -> f64 {
        gram_det(self.v1, self.v2)
    }

    /// The eight coordinates `v1` then `v2`.
    pub fn to_array(&self) -> [f64; 8] {
        let mut out = [0.0; 8];
        out[..4].copy_from_slice(&self.v1.0);
        out[4..].copy_from_slice(&self.v2.0);
        out
    }

    /// Orthogonal projector onto the plane.
    pub fn projector(&self) -> Matrix4<f64> {
        let o = orthonormalize_unchecked(self);
        let a = nalgebra::Vector4::from(o.v1.0);
        let b = nalgebra::Vector4::from(o.v2.0);
        a * a.transpose() + b * b.transpose()
    }

    /// Frobenius distance between orthogonal projectors.
    pub fn projector_distance(&self, other: &Plane) -> f64 {
        (self.projector() - other.projector()).norm()
    }

    /// Subspace equality at [`SUBSPACE_TOLERANCE`].
    pub fn same_subspace(&self, other: &Plane) -> bool {
        self.projector_distance(other) < SUBSPACE_TOLERANCE
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.to_array();
        for (i, c) in a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses eight reals separated by commas and/or whitespace.
impl FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let vals: Vec<f64> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad plane coordinate {t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        if vals.len() != 8 {
            return Err(Error::InvalidArgument(format!(
                "a plane needs 8 coordinates, got {}",
                vals.len()
            )));
        }
        Plane::new(
            Vector4::new(vals[0], vals[1], vals[2], vals[3]),
            Vector4::new(vals[4], vals[5], vals[6], vals[7]),
        )
    }
}

fn orthonormalize_unchecked(p: &Plane) -> Plane {
    let e1 = (1.0 / p.v1.norm()) * p.v1;
    let r = p.v2 - p.v2.dot(e1) * e1;
    let e2 = (1.0 / r.norm()) * r;
    Plane { v1: e1, v2: e2 }
}

/// Gram–Schmidt on the spanning vectors; orientation is preserved.
pub fn orthonormalize(p: &Plane) -> Result<Plane> {
    let gram = p.gram_determinant();
    if !(gram >= GRAM_TOLERANCE) {
        return Err(Error::DegeneratePlane { gram });
    }
    Ok(orthonormalize_unchecked(p))
}

/// `|⟨P, Q⟩|`: absolute determinant of the inner products of orthonormal bases,
/// i.e. the product of the cosines of the principal angles.
pub fn pairing(p: &Plane, q: &Plane) -> Result<f64> {
    let a = orthonormalize(p)?;
    let b = orthonormalize(q)?;
    let m = Matrix2::new(a.v1.dot(b.v1), a.v1.dot(b.v2), a.v2.dot(b.v1), a.v2.dot(b.v2));
    Ok(m.determinant().abs().min(1.0))
}
