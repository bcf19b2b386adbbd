//! The Gluck–Warner identification of oriented 2-planes in R⁴ with S² × S².
//!
//! For an orthonormal basis `v1, v2` the unit bivector `ω = v1 ∧ v2` splits into
//! self-dual and anti-self-dual halves. With the bases
//!
//! ```text
//! b1± = (e12 ± e34)/√2,   b2± = (e13 ∓ e24)/√2,   b3± = (e14 ± e23)/√2
//! ```
//!
//! the two sphere points are `ι₁ = Σ ⟨ω, b_k⁺⟩ √2 b_k⁺` and likewise for `ι₂`.
//! Sphere coordinates put the pole on `b1±`: `x = ⟨ι₁, b1⁺⟩` and
//! `φ₁ = atan2(⟨ι₁, b2⁺⟩, ⟨ι₁, b3⁺⟩)`, so the orbit representatives sit at
//! `φ₁ = φ₂ = 0` with `x = cos θ`, `y = cos(θ + 2ψ)`.

use serde::Serialize;

use super::plane::{orthonormalize, Plane};
use crate::error::Result;

/// Components of `ι₁` and `ι₂` in the `(b1, b2, b3)` bases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelfDualSplit {
    pub plus: [f64; 3],
    pub minus: [f64; 3],
}

/// Gluck–Warner sphere coordinates `((x, φ₁), (y, φ₂))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpherePointPair {
    pub x: f64,
    pub phi1: f64,
    pub y: f64,
    pub phi2: f64,
}

fn sphere_point(h: f64, phi: f64) -> [f64; 3] {
    let r = (1.0 - h * h).max(0.0).sqrt();
    [r * phi.cos(), r * phi.sin(), h]
}

impl SpherePointPair {
    /// `ξ(x, φ₁) = (√(1−x²) cos φ₁, √(1−x²) sin φ₁, x)`.
    pub fn xi(&self) -> [f64; 3] {
        sphere_point(self.x, self.phi1)
    }

    /// `η(y, φ₂)`, same layout as [`xi`](Self::xi).
    pub fn eta(&self) -> [f64; 3] {
        sphere_point(self.y, self.phi2)
    }

    /// The pair naming the same unoriented plane with the opposite orientation.
    pub fn antipodal(&self) -> Self {
        use std::f64::consts::PI;
        Self {
            x: -self.x,
            phi1: self.phi1 + PI,
            y: -self.y,
            phi2: self.phi2 + PI,
        }
    }
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `|⟨ξ_P, ξ_Q⟩ + ⟨η_P, η_Q⟩| / 2`, which equals the plane pairing.
pub fn sphere_pairing(p: &SpherePointPair, q: &SpherePointPair) -> f64 {
    0.5 * (dot3(p.xi(), q.xi()) + dot3(p.eta(), q.eta())).abs()
}

/// Self-dual / anti-self-dual coefficients of the plane, oriented by its
/// spanning vectors.
pub fn self_dual_split(p: &Plane) -> Result<SelfDualSplit> {
    let o = orthonormalize(p)?;
    let (a, b) = (o.v1().0, o.v2().0);
    let w = |i: usize, j: usize| a[i] * b[j] - a[j] * b[i];
    let (w12, w13, w14, w23, w24, w34) = (w(0, 1), w(0, 2), w(0, 3), w(1, 2), w(1, 3), w(2, 3));
    Ok(SelfDualSplit {
        plus: [w12 + w34, w13 - w24, w14 + w23],
        minus: [w12 - w34, w13 + w24, w14 - w23],
    })
}

pub fn gluck_warner(p: &Plane) -> Result<SpherePointPair> {
    let s = self_dual_split(p)?;
    Ok(SpherePointPair {
        x: s.plus[0].clamp(-1.0, 1.0),
        phi1: s.plus[1].atan2(s.plus[2]),
        y: s.minus[0].clamp(-1.0, 1.0),
        phi2: s.minus[1].atan2(s.minus[2]),
    })
}
