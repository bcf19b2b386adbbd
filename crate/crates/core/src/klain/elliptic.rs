//! Complete elliptic integral of the second kind and the double integral
//! `I′(a, b) = ∫₀^{2π}∫₀^{2π} |a cos φ₁ + b cos φ₂| dφ₁ dφ₂`.
//!
//! `E` uses the modulus convention: `E(k) = ∫₀^{π/2} √(1 − k² sin² t) dt`.

use std::f64::consts::FRAC_PI_2;

use crate::spectral::binom_neg_half;

/// `E(k)` by the arithmetic-geometric mean.
///
/// With `a₀ = 1`, `b₀ = √(1−k²)`, `c₀ = k` and the AGM recursion,
/// `E = K·(1 − Σₙ 2ⁿ⁻¹ cₙ²)` where `K = π / (2 a_∞)`.
pub fn complete_elliptic_e(k: f64) -> f64 {
    let k = k.abs().min(1.0);
    if k == 1.0 {
        return 1.0;
    }
    let mut a = 1.0;
    let mut b = (1.0 - k * k).sqrt();
    let mut c = k;
    let mut sum = 0.5 * k * k;
    let mut pow = 0.5;
    // c_{n+1} = c_n² / (4 a_{n+1}) instead of (a_n − b_n)/2, which stalls
    // at rounding level and would keep feeding 2ⁿ c² into the sum
    while c > f64::EPSILON * a {
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        c = c * c / (4.0 * next);
        a = next;
        pow *= 2.0;
        sum += pow * c * c;
    }
    FRAC_PI_2 / a * (1.0 - sum)
}

/// The binomial series `E(k) = (π/2) Σ_m binom(−1/2, m)² k^{2m} / (1 − 2m)`,
/// truncated after `terms` terms.
pub fn elliptic_e_series(k: f64, terms: usize) -> f64 {
    let k2 = k * k;
    let mut pow = 1.0;
    let mut acc = 0.0;
    for m in 0..terms {
        let b = binom_neg_half(m);
        acc += b * b * pow / (1.0 - 2.0 * m as f64);
        pow *= k2;
    }
    FRAC_PI_2 * acc
}

/// `I′(a, b)`, through `16 (a + b) E(2√(ab) / (a + b))`.
///
/// The integrand is invariant under `a ↦ −a` (shift `φ₁` by `π`), so signs
/// are dropped.
pub fn abs_cos_integral(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    let s = a + b;
    if s == 0.0 {
        return 0.0;
    }
    // 2√(ab)/(a+b) loses accuracy when a ≪ b; the ratio form keeps it
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let r = lo / hi;
    let k = 2.0 * r.sqrt() / (1.0 + r);
    16.0 * s * complete_elliptic_e(k)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(complete_elliptic_e(0.0), FRAC_PI_2);
        assert_eq!(complete_elliptic_e(1.0), 1.0);
        // E(1/√2) = π^{3/2}/Γ(1/4)² + Γ(1/4)²/(8√π)
        let g = 3.625_609_908_221_908_f64;
        let expect = PI.powf(1.5) / (g * g) + g * g / (8.0 * PI.sqrt());
        assert!((complete_elliptic_e(0.5_f64.sqrt()) - expect).abs() < 4e-16);
    }

    #[test]
    fn near_one_is_continuous() {
        let e = complete_elliptic_e(1.0 - 1e-14);
        assert!((e - 1.0).abs() < 1e-12, "{e}");
        assert!(complete_elliptic_e(0.999) > e);
    }

    #[test]
    fn series_matches_agm() {
        for &k in &[0.0, 0.1, 0.5, 0.8] {
            assert!((elliptic_e_series(k, 200) - complete_elliptic_e(k)).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_values() {
        assert!((abs_cos_integral(1.0, 0.0) - 8.0 * PI).abs() < 1e-13);
        assert!((abs_cos_integral(1.0, 1.0) - 32.0).abs() < 1e-13);
        assert!((abs_cos_integral(0.5, 0.5) - 16.0).abs() < 1e-13);
        assert_eq!(abs_cos_integral(0.0, 0.0), 0.0);
        assert_eq!(abs_cos_integral(0.3, 0.7), abs_cos_integral(0.7, -0.3));
    }
}
