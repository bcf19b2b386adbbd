use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::geometry::{orthonormalize, Plane};
use crate::spectral::gauss_legendre_cached;
use crate::Result;

/// `∫₀^{2π}∫₀^{2π} |⟨P, T(x, y)⟩| dx dy` over the torus family
/// `T(x, y) = span((e^{ix}, 0), (0, e^{iy}))`.
///
/// For fixed `x` the pairing is `|α(x) cos y + β(x) sin y|`, so the inner
/// integral is split at its two zeros and every piece is smooth. The outer
/// integrand `4·hypot(α, β)` kinks where `α` and `β` vanish together and is
/// nearly kinked where `α² + β²` has a small minimum. The outer breakpoints
/// are the quadrant points, the zeros of `α` and `β` and the two minima of
/// `α² + β²`; every outer piece is mapped through `x = mid + half·(3s − s³)/2`
/// to flatten its endpoints. Each piece uses an `order`-point Gauss rule.
pub fn torus_family_integral(p: &Plane, order: usize) -> Result<f64> {
    let o = orthonormalize(p)?;
    let (a, b) = (o.v1().0, o.v2().0);
    // α(x) = ca₀ cos x + ca₁ sin x, β(x) = cb₀ cos x + cb₁ sin x
    let ca = [a[0] * b[2] - b[0] * a[2], a[1] * b[2] - b[1] * a[2]];
    let cb = [a[0] * b[3] - b[0] * a[3], a[1] * b[3] - b[1] * a[3]];
    let rule = gauss_legendre_cached(order);

    let mut breaks = vec![FRAC_PI_2, PI, 1.5 * PI];
    for c in [ca, cb] {
        if c[0] != 0.0 || c[1] != 0.0 {
            let z = (-c[0]).atan2(c[1]).rem_euclid(PI);
            breaks.extend([z, z + PI]);
        }
    }
    // α² + β² = vᵀ M v with v = (cos x, sin x); its minimum lies along the
    // eigenvector of the smaller eigenvalue of M
    let m00 = ca[0] * ca[0] + cb[0] * cb[0];
    let m11 = ca[1] * ca[1] + cb[1] * cb[1];
    let m01 = ca[0] * ca[1] + cb[0] * cb[1];
    let x_min = (0.5 * (2.0 * m01).atan2(m00 - m11) + FRAC_PI_2).rem_euclid(PI);
    breaks.extend([x_min, x_min + PI]);
    breaks.retain(|b| b.is_finite() && *b > 0.0 && *b < TAU);
    breaks.sort_by(f64::total_cmp);

    let inner = |x: f64| {
        let (s, c) = x.sin_cos();
        let alpha = ca[0] * c + ca[1] * s;
        let beta = cb[0] * c + cb[1] * s;
        if alpha == 0.0 && beta == 0.0 {
            return 0.0;
        }
        // α cos y + β sin y = R cos(y − γ) vanishes at γ ± π/2
        let gamma = beta.atan2(alpha);
        let z1 = (gamma + FRAC_PI_2).rem_euclid(TAU);
        let z2 = (gamma - FRAC_PI_2).rem_euclid(TAU);
        rule.integrate_split(0.0, TAU, &[z1, z2], |y| (alpha * y.cos() + beta * y.sin()).abs())
    };
    let mut acc = 0.0;
    let mut lo = 0.0;
    for hi in breaks.into_iter().chain([TAU]) {
        if hi - lo > 1e-15 {
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
                let x = mid + half * 0.5 * s * (3.0 - s * s);
                acc += w * half * 1.5 * (1.0 - s * s) * inner(x);
            }
        }
        lo = hi;
    }
    Ok(acc)
}
