//! Orbit reduction through quasi-J-characteristic vectors.
//!
//! For `J_{r,s}(z, w) = (i r z, i s w)` the determinant of the stacked system
//! `[v1; v2; J v1; J v2]` is a quadratic form `A r² + B r s + C s²` with
//! `A = C = det M₁₁ det M₂₂` (`M₁₁`, `M₂₂` the z- and w-blocks of the basis).
//! The two complex structures `(1, 1)` and `(1, −1)` give determinants of
//! opposite sign, so a real root always exists. At a real root the four rows are dependent, so the plane contains
//! a vector `q` with `J_{r,s} q` also in the plane; a torus element then makes
//! `q` real and the plane takes the shape `span(v(ψ), i u(φ))`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Matrix4;
use serde::Serialize;

use super::gluck_warner::{self_dual_split, SelfDualSplit};
use super::plane::{orthonormalize, Plane, Vector4};
use super::torus::{OrbitParams, TorusElement};
use crate::error::Result;

/// Coefficients of `det = A r² + B r s + C s²`, computed on the orthonormalized
/// spanning vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiJCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuasiJCoefficients {
    pub fn eval(&self, r: f64, s: f64) -> f64 {
        self.a * r * r + self.b * r * s + self.c * s * s
    }
}

fn j_rs(v: Vector4, r: f64, s: f64) -> Vector4 {
    let [x, y, u, w] = v.0;
    Vector4::new(-r * y, r * x, -s * w, s * u)
}

fn stacked(p: &Plane, r: f64, s: f64) -> Matrix4<f64> {
    let (a, b) = (p.v1(), p.v2());
    let (c, d) = (j_rs(a, r, s), j_rs(b, r, s));
    Matrix4::from_rows(&[
        nalgebra::RowVector4::from(a.0),
        nalgebra::RowVector4::from(b.0),
        nalgebra::RowVector4::from(c.0),
        nalgebra::RowVector4::from(d.0),
    ])
}

/// The 4×4 determinant of the stacked system at `(r, s)`, evaluated on the
/// orthonormalized basis of `p`.
pub fn quasi_j_determinant(p: &Plane, r: f64, s: f64) -> Result<f64> {
    let o = orthonormalize(p)?;
    Ok(stacked(&o, r, s).determinant())
}

/// Interpolates the quadratic through `(1,0)`, `(0,1)` and `(1,1)`.
pub fn quasi_j_coefficients(p: &Plane) -> Result<QuasiJCoefficients> {
    let o = orthonormalize(p)?;
    let a = stacked(&o, 1.0, 0.0).determinant();
    let c = stacked(&o, 0.0, 1.0).determinant();
    let b = stacked(&o, 1.0, 1.0).determinant() - a - c;
    Ok(QuasiJCoefficients { a, b, c })
}

/// A nontrivial real root of `A r² + B r s + C s² = 0`.
///
/// With `A ≠ 0` the root is returned as `(t, 1)`, taking the root of smaller
/// modulus and the positive one on ties; with `A = 0` it is `(1, 0)`; the identically-zero form gives `(1, 1)`.
pub fn solve_quasi_j_coefficients(q: &QuasiJCoefficients) -> (f64, f64) {
    const ZERO: f64 = 1e-12;
    let QuasiJCoefficients { a, b, c } = *q;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale < ZERO {
        return (1.0, 1.0);
    }
    if a.abs() < ZERO * scale.max(1.0) {
        return (1.0, 0.0);
    }
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let sign = if b >= 0.0 { 1.0 } else { -1.0 };
    let qq = -0.5 * (b + sign * disc);
    let t1 = qq / a;
    let t2 = if qq != 0.0 { c / qq } else { t1 };
    // with A = C the roots are reciprocal; the one inside [−1, 1] keeps the
    // stacked system well scaled
    let t = match t1.abs().total_cmp(&t2.abs()) {
        std::cmp::Ordering::Less => t1,
        std::cmp::Ordering::Greater => t2,
        std::cmp::Ordering::Equal => t1.max(t2),
    };
    (t, 1.0)
}

pub fn solve_quasi_j(p: &Plane) -> Result<(f64, f64)> {
    Ok(solve_quasi_j_coefficients(&quasi_j_coefficients(p)?))
}

/// A quasi-J-characteristic vector `q ∈ P` with `J_{r,s} q ∈ P`, or `None`
/// when `J_{r,s} q` vanishes (the plane lies in the torus family).
pub fn quasi_j_vector(p: &Plane) -> Result<Option<(Vector4, (f64, f64))>> {
    let o = orthonormalize(p)?;
    let (r, s) = solve_quasi_j(&o)?;
    // left null vector of the stack, taken from V of the transpose: U columns
    // belonging to vanishing singular values are not reliable
    let svd = stacked(&o, r, s).transpose().svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(3);
    let coeffs = v_t.row(k);
    let q = coeffs[2] * o.v1() + coeffs[3] * o.v2();
    let q = (1.0 / q.norm()) * q;
    if j_rs(q, r, s).norm() < 1e-8 {
        return Ok(None);
    }
    Ok(Some((q, (r, s))))
}

fn phase(re: f64, im: f64) -> f64 {
    if re.hypot(im) < 1e-14 {
        0.0
    } else {
        im.atan2(re)
    }
}

/// `P = g · span((cos ψ, sin ψ), i (r cos ψ, s sin ψ))`, read off from a
/// quasi-J-characteristic vector. `phi` is the angle of the second vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiJDecomposition {
    pub r: f64,
    pub s: f64,
    pub psi: f64,
    pub phi: f64,
    pub torus: TorusElement,
}

impl QuasiJDecomposition {
    pub fn plane(&self) -> Plane {
        let (sp, cp) = self.psi.sin_cos();
        let (sf, cf) = self.phi.sin_cos();
        let p = Plane::new_unchecked(Vector4::new(cp, 0.0, sp, 0.0), Vector4::new(0.0, cf, 0.0, sf));
        super::torus::torus_act(self.torus, &p)
    }
}

/// The decomposition through a quasi-J vector; `None` on the torus family,
/// where `J_{r,s} q` vanishes.
pub fn quasi_j_decomposition(p: &Plane) -> Result<Option<QuasiJDecomposition>> {
    let Some((q, (r, s))) = quasi_j_vector(p)? else {
        return Ok(None);
    };
    let (z0, w0) = q.to_complex();
    let torus = TorusElement::new(phase(z0.re, z0.im), phase(w0.re, w0.im));
    let psi = w0.norm().atan2(z0.norm());
    let phi = (s * w0.norm()).atan2(r * z0.norm());
    Ok(Some(QuasiJDecomposition { r, s, psi, phi, torus }))
}

/// Finds `(θ, ψ)` and a torus element `g` with `g · P_{θ,ψ} = P`.
///
/// The torus-acted representative has sphere coordinates `x = cos θ`,
/// `y = cos(θ + 2ψ)`, `φ₁ = −(α + β)` and `φ₂ = α − β` (plus `π` when
/// `sin(θ + 2ψ) < 0`), so all four numbers are read off the Gluck–Warner
/// point of the plane, oriented with `x ≥ 0`. Of the two `ψ` naming an orbit
/// the smaller is returned. `g` is unique up to the stabilizer of the
/// representative and is reported with `α ∈ [0, π)`.
pub fn reduce_to_orbit(p: &Plane) -> Result<(OrbitParams, TorusElement)> {
    let split = self_dual_split(p)?;
    let flipped = SelfDualSplit {
        plus: split.plus.map(|c| -c),
        minus: split.minus.map(|c| -c),
    };
    let (first, second) = if split.plus[0] >= 0.0 {
        (split, flipped)
    } else {
        (flipped, split)
    };
    let mut best = reduce_oriented(&first);
    if first.plus[0].abs() < 1e-12 {
        let other = reduce_oriented(&second);
        if other.0.psi < best.0.psi - 1e-12 {
            best = other;
        }
    }
    Ok(best)
}

/// Reduction for a split oriented with nonnegative `x`. Angles come from
/// `atan2` so that `θ` and `θ + 2ψ` stay accurate near the poles.
fn reduce_oriented(s: &SelfDualSplit) -> (OrbitParams, TorusElement) {
    let [x, p1, p2] = s.plus;
    let [y, m1, m2] = s.minus;
    let theta = p1.hypot(p2).atan2(x).min(FRAC_PI_2);
    let ay = m1.hypot(m2).atan2(y);
    let (psi, lower) = if ay >= theta {
        (0.5 * (ay - theta), true)
    } else {
        (0.5 * (TAU - ay - theta), false)
    };
    let psi = if psi >= PI { 0.0 } else { psi.max(0.0) };
    // azimuths are meaningless at the poles; the stabilizer absorbs the choice
    let sum = if theta < 1e-12 { 0.0 } else { -p1.atan2(p2) };
    let diff = if ay < 1e-12 || PI - ay < 1e-12 {
        0.0
    } else if lower {
        m1.atan2(m2)
    } else {
        m1.atan2(m2) - PI
    };
    let g = TorusElement::new(0.5 * (sum + diff), 0.5 * (sum - diff));
    // (π, π) acts as −1 and fixes every plane
    let g = if g.alpha >= PI - 1e-12 {
        g.compose(TorusElement::new(PI, PI))
    } else {
        g
    };
    (OrbitParams { theta, psi }, g)
}
