//! The Klain function of the Holmes–Thompson area of complex `l¹` on C².
//!
//! Its Crofton measure is `δ_{C×0} + δ_{0×C} + λ_T / (4π)` with `λ_T` the
//! standard measure on the torus family `T`. At the orbit with heights
//! `(x, y)` this gives
//!
//! ```text
//! Kl(x, y) = max(|x|, |y|) + I′(√(1−x²), √(1−y²)) / (8π),
//! ```
//!
//! the atoms contributing `(|x+y| + |x−y|)/2` and the torus family
//! `I / (4π)`, where `I = I′/2` is the integral of the pairing over `T`.

mod elliptic;
mod torus_integral;

use std::f64::consts::{FRAC_1_PI, PI};

use serde::Serialize;

pub use elliptic::{abs_cos_integral, complete_elliptic_e, elliptic_e_series};
pub use torus_integral::torus_family_integral;

use crate::geometry::{orbit_representative, pairing, OrbitParams, Plane};
use crate::spectral::{binom_neg_half, gauss_legendre_cached, moments_2d, MomentKind, MomentMatrix};
use crate::{Error, Result};

/// Beyond this `k²` the binomial series is abandoned for the AGM.
pub const SERIES_SWITCH_K2: f64 = 0.95;

/// Gauss order per piece for the torus-family quadrature.
pub const TORUS_QUADRATURE_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KlainMethod {
    Quadrature,
    Elliptic,
    Series,
}

impl std::str::FromStr for KlainMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadrature" => Ok(Self::Quadrature),
            "elliptic" => Ok(Self::Elliptic),
            "series" => Ok(Self::Series),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KlainValue {
    pub value: f64,
    pub method: KlainMethod,
    pub estimated_error: f64,
}

/// The Crofton measure of complex `l¹`: unit atoms at the two coordinate
/// lines and a constant density on the torus family.
#[derive(Debug, Clone, PartialEq)]
pub struct CroftonMeasureL1 {
    pub atoms: [(Plane, f64); 2],
    pub torus_density: f64,
}

impl Default for CroftonMeasureL1 {
    fn default() -> Self {
        Self {
            atoms: [(Plane::first_axis(), 1.0), (Plane::second_axis(), 1.0)],
            torus_density: 0.25 * FRAC_1_PI,
        }
    }
}

impl CroftonMeasureL1 {
    /// `∫ |⟨P, Q⟩| dμ(Q)`, evaluated from the definition: the atoms through
    /// the plane pairing and the torus part by quadrature over `T`.
    pub fn klain(&self, p: &Plane, order: usize) -> Result<f64> {
        let mut acc = 0.0;
        for (q, mass) in &self.atoms {
            acc += mass * pairing(p, q)?;
        }
        Ok(acc + self.torus_density * torus_family_integral(p, order)?)
    }
}

/// `(θ, ψ)` with `θ + 2ψ ≤ π` naming the orbit at heights `(x, y)`.
///
/// `Kl` only depends on `|x|` and `|y|` and is symmetric, so the larger
/// modulus becomes `cos θ` and the smaller `cos(θ + 2ψ)`.
pub fn orbit_from_heights(x: f64, y: f64) -> OrbitParams {
    let (hi, lo) = if x.abs() >= y.abs() {
        (x.abs(), y.abs())
    } else {
        (y.abs(), x.abs())
    };
    let theta = hi.min(1.0).acos();
    let psi = (0.5 * (lo.min(1.0).acos() - theta)).max(0.0);
    OrbitParams { theta, psi }
}

fn check_heights(x: f64, y: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) || !(-1.0..=1.0).contains(&y) {
        return Err(Error::InvalidArgument(format!("heights ({x}, {y}) outside [-1, 1]")));
    }
    Ok(())
}

/// `Kl(x, y)` from the elliptic closed form.
pub fn klain_l1(x: f64, y: f64) -> Result<KlainValue> {
    check_heights(x, y)?;
    let a = (1.0 - x * x).max(0.0).sqrt();
    let b = (1.0 - y * y).max(0.0).sqrt();
    let value = x.abs().max(y.abs()) + abs_cos_integral(a, b) / (8.0 * PI);
    Ok(KlainValue {
        value,
        method: KlainMethod::Elliptic,
        estimated_error: 8.0 * f64::EPSILON * value,
    })
}

/// `Kl(x, y)` by the requested method. Quadrature and series go through the
/// orbit label of [`orbit_from_heights`].
pub fn klain_l1_with(x: f64, y: f64, method: KlainMethod) -> Result<KlainValue> {
    check_heights(x, y)?;
    match method {
        KlainMethod::Elliptic => klain_l1(x, y),
        KlainMethod::Quadrature => klain_l1_orbit(orbit_from_heights(x, y)),
        KlainMethod::Series => {
            let o = orbit_from_heights(x, y);
            let s = series_i(o.theta, o.psi, 30)?;
            let value = atom_term(o) + s.value / (4.0 * PI);
            Ok(KlainValue {
                value,
                method: KlainMethod::Series,
                estimated_error: s.tail_bound / (4.0 * PI),
            })
        }
    }
}

/// `|cos ψ cos(θ+ψ)| + |sin ψ sin(θ+ψ)|`, the pairing of the representative
/// with the two atoms.
fn atom_term(o: OrbitParams) -> f64 {
    let (s, c) = o.psi.sin_cos();
    let (s2, c2) = (o.theta + o.psi).sin_cos();
    (c * c2).abs() + (s * s2).abs()
}

/// `I(θ, ψ)`, the torus-family integral at the representative, by direct
/// quadrature. Returns the value and the change against half the order.
pub fn orbit_integral_quadrature(o: OrbitParams, order: usize) -> Result<(f64, f64)> {
    let p = orbit_representative(o);
    let fine = torus_family_integral(&p, order)?;
    let coarse = torus_family_integral(&p, (order / 2).max(2))?;
    Ok((fine, (fine - coarse).abs()))
}

/// `A = cos ψ sin(θ+ψ)` and `k² = sin θ sin(θ+2ψ) / A²`, on the label with
/// `θ + 2ψ ≤ π`.
fn elliptic_parameters(o: OrbitParams) -> (f64, f64) {
    let psi = if o.theta + 2.0 * o.psi > PI {
        PI - o.theta - o.psi
    } else {
        o.psi
    };
    let a = psi.cos() * (o.theta + psi).sin();
    if a.abs() < 1e-300 {
        return (0.0, 0.0);
    }
    let k2 = (o.theta.sin() * (o.theta + 2.0 * psi).sin() / (a * a)).clamp(0.0, 1.0);
    (a, k2)
}

/// `I(θ, ψ) = 16·A·E(k)`.
pub fn orbit_integral_elliptic(o: OrbitParams) -> f64 {
    let (a, k2) = elliptic_parameters(o);
    16.0 * a * complete_elliptic_e(k2.sqrt())
}

/// `Kl` at the orbit `(θ, ψ)`: atom pairings plus the directly integrated
/// torus part.
pub fn klain_l1_orbit(o: OrbitParams) -> Result<KlainValue> {
    let (i, err) = orbit_integral_quadrature(o, TORUS_QUADRATURE_ORDER)?;
    Ok(KlainValue {
        value: atom_term(o) + i / (4.0 * PI),
        method: KlainMethod::Quadrature,
        estimated_error: err / (4.0 * PI) + 4.0 * f64::EPSILON,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub k_squared: f64,
    pub terms: usize,
    /// Bound on the omitted tail; zero when the AGM was used instead.
    pub tail_bound: f64,
    /// Set when `k² > 0.95`: the series converges too slowly and the value
    /// comes from the AGM.
    pub slow_convergence: bool,
}

/// `I(θ, ψ) = 16·A·(π/2)·Σ_{m<terms} binom(−1/2, m)² k^{2m} / (1 − 2m)`.
pub fn series_i(theta: f64, psi: f64, terms: usize) -> Result<SeriesValue> {
    let o = OrbitParams::new(theta, psi)?;
    if theta + 2.0 * psi > PI + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "series needs theta + 2 psi <= pi, got {}",
            theta + 2.0 * psi
        )));
    }
    if terms == 0 {
        return Err(Error::InvalidArgument("series needs at least one term".into()));
    }
    let (a, k2) = elliptic_parameters(o);
    if k2 > SERIES_SWITCH_K2 {
        return Ok(SeriesValue {
            value: 16.0 * a * complete_elliptic_e(k2.sqrt()),
            k_squared: k2,
            terms,
            tail_bound: 0.0,
            slow_convergence: true,
        });
    }
    let value = 16.0 * a * elliptic_e_series(k2.sqrt(), terms);
    // term ratios are below k², so the tail is a geometric bound on the next term
    let b = binom_neg_half(terms);
    let next = b * b * k2.powi(terms as i32) / (2.0 * terms as f64 - 1.0);
    let tail_bound = 16.0 * a.abs() * std::f64::consts::FRAC_PI_2 * next / (1.0 - k2);
    Ok(SeriesValue {
        value,
        k_squared: k2,
        terms,
        tail_bound,
        slow_convergence: false,
    })
}

/// `c sin²θ / Kl²`, the factor relating mixed volumes to areas.
pub fn volume_ratio(theta: f64, kl: f64, c: f64) -> Result<f64> {
    if !(kl > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need kl > 0 and c > 0, got kl = {kl}, c = {c}"
        )));
    }
    let s = theta.sin();
    Ok(c * s * s / (kl * kl))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentVerdictClass {
    /// `m` or `n` odd: zero because `Kl` is even in each variable.
    Parity,
    /// Even indices with `|m − n| ≥ 4`.
    Kernel,
    /// Even indices with `|m − n| ≤ 2`; reported only.
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentVerdict {
    pub m: usize,
    pub n: usize,
    pub moment: f64,
    pub relative: f64,
    pub class: MomentVerdictClass,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub moments: MomentMatrix,
    pub verdicts: Vec<MomentVerdict>,
    pub tolerance: f64,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass != Some(false))
    }
}

/// Raw Legendre moments of `Kl` up to `degree`, with a verdict per index.
pub fn klain_structure_report(degree: usize, order: usize, tolerance: f64) -> Result<StructureReport> {
    if degree > 12 {
        return Err(Error::InvalidArgument(format!("degree {degree} above 12")));
    }
    let rule = gauss_legendre_cached(order);
    let kl = |x: f64, y: f64| {
        klain_l1(x.clamp(-1.0, 1.0), y.clamp(-1.0, 1.0))
            .map(|v| v.value)
            .unwrap_or(f64::NAN)
    };
    let moments = moments_2d(kl, degree, &rule, true);
    let m00 = moments.get(0, 0);
    let verdicts = moments
        .iter()
        .map(|(m, n, v)| {
            let relative = v.abs() / m00;
            let (class, pass) = if m % 2 == 1 || n % 2 == 1 {
                (MomentVerdictClass::Parity, Some(relative <= tolerance))
            } else if m.abs_diff(n) >= 4 {
                (MomentVerdictClass::Kernel, Some(relative <= tolerance))
            } else {
                (MomentVerdictClass::Image, None)
            };
            MomentVerdict {
                m,
                n,
                moment: v,
                relative,
                class,
                pass,
            }
        })
        .collect();
    debug_assert_eq!(moments.kind(), MomentKind::Raw);
    Ok(StructureReport {
        moments,
        verdicts,
        tolerance,
    })
}
