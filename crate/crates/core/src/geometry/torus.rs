use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::plane::{Plane, Vector4};
use crate::error::{Error, Result};

/// An element `(e^{iα}, e^{iβ})` of U(1) × U(1), angles kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusElement {
    pub alpha: f64,
    pub beta: f64,
}

impl TorusElement {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self {
            alpha: wrap_angle(alpha),
            beta: wrap_angle(beta),
        }
    }

    pub fn identity() -> Self {
        Self { alpha: 0.0, beta: 0.0 }
    }

    pub fn compose(self, other: Self) -> Self {
        Self::new(self.alpha + other.alpha, self.beta + other.beta)
    }

    pub fn inverse(self) -> Self {
        Self::new(-self.alpha, -self.beta)
    }

    /// Applies `(z, w) ↦ (e^{iα} z, e^{iβ} w)` to a vector.
    pub fn apply(self, v: Vector4) -> Vector4 {
        let (z, w) = v.to_complex();
        Vector4::from_complex(
            Complex64::from_polar(1.0, self.alpha) * z,
            Complex64::from_polar(1.0, self.beta) * w,
        )
    }
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Orbit label `(θ, ψ)` of the torus action on planes.
///
/// `θ ∈ [0, π/2]` and `ψ ∈ [0, π)`. Orbits with `θ + 2ψ ≤ π` (the usual
/// parameter square) are always labelled with `ψ ≤ π/2`; the orbits with
/// `cos θ < cos(θ + 2ψ)` need `ψ ∈ (π/2, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitParams {
    pub theta: f64,
    pub psi: f64,
}

impl OrbitParams {
    pub fn new(theta: f64, psi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidArgument(format!("theta = {theta} outside [0, pi/2]")));
        }
        if !(0.0..PI).contains(&psi) {
            return Err(Error::InvalidArgument(format!("psi = {psi} outside [0, pi)")));
        }
        Ok(Self { theta, psi })
    }

    /// Gluck–Warner heights `(x, y) = (cos θ, cos(θ + 2ψ))`, the orbit invariants.
    pub fn heights(&self) -> (f64, f64) {
        (self.theta.cos(), (self.theta + 2.0 * self.psi).cos())
    }
}

/// `span_R((cos ψ, sin ψ), i (cos(θ+ψ), sin(θ+ψ)))`.
pub fn orbit_representative(o: OrbitParams) -> Plane {
    let (s, c) = o.psi.sin_cos();
    let (s2, c2) = (o.theta + o.psi).sin_cos();
    Plane::new_unchecked(Vector4::new(c, 0.0, s, 0.0), Vector4::new(0.0, c2, 0.0, s2))
}

/// Acts on both spanning vectors.
pub fn torus_act(t: TorusElement, p: &Plane) -> Plane {
    Plane::new_unchecked(t.apply(p.v1()), t.apply(p.v2()))
}
