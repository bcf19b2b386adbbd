//! The orbit-averaged pairing `K_T(x, y; x′, y′)` and its node table.
//!
//! In Gluck–Warner coordinates the pairing of two planes is
//! `|xx′ + a cos(φ₁−φ₁′) + yy′ + b cos(φ₂−φ₂′)| / 2` with
//! `a = √(1−x²)√(1−x′²)` and `b = √(1−y²)√(1−y′²)`. The torus moves the two
//! azimuth differences independently and uniformly, so
//!
//! ```text
//! K_T = (1/(8π²)) ∫₀^{2π} g(d + a cos u, b) du,   d = xx′ + yy′,
//! ```
//!
//! where `g(m, b) = ∫₀^{2π} |m + b cos v| dv` is known in closed form.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::spectral::{gauss_legendre, gauss_legendre_cached, QuadratureRule};

/// Gauss order per smooth piece of the `u` integral.
pub const KERNEL_ORDER: usize = 32;

/// `∫₀^{2π} |m + b cos v| dv` for `b ≥ 0`.
pub fn abs_affine_cos_integral(m: f64, b: f64) -> f64 {
    let (m, b) = (m.abs(), b.abs());
    if m >= b {
        2.0 * PI * m
    } else {
        let r = (m / b).min(1.0);
        4.0 * (b * b - m * m).sqrt() + 4.0 * m * r.asin()
    }
}

/// `K_T` at two orbits.
pub fn reduced_kernel(x: f64, y: f64, xp: f64, yp: f64) -> f64 {
    let rule = gauss_legendre_cached(KERNEL_ORDER);
    kernel_from_parts(x * xp + y * yp, side(x) * side(xp), side(y) * side(yp), &rule)
}

/// As [`reduced_kernel`] with an explicit per-piece order.
pub fn reduced_kernel_with_order(x: f64, y: f64, xp: f64, yp: f64, order: usize) -> f64 {
    let rule = gauss_legendre_cached(order);
    kernel_from_parts(x * xp + y * yp, side(x) * side(xp), side(y) * side(yp), &rule)
}

fn side(h: f64) -> f64 {
    (1.0 - h * h).max(0.0).sqrt()
}

/// `(1/(4π²)) ∫₀^π g(d + a cos u, b) du`.
///
/// `g(·, b)` is C¹ with a square-root singularity in its second derivative at
/// `|m| = b`; the integral is split there and each piece is mapped through
/// `u = mid + half·(3s − s³)/2`, which flattens the singular endpoints.
pub(crate) fn kernel_from_parts(d: f64, a: f64, b: f64, rule: &QuadratureRule) -> f64 {
    let scale = 1.0 / (4.0 * PI * PI);
    if a <= 1e-15 {
        return scale * PI * abs_affine_cos_integral(d, b);
    }
    let mut pts = [0.0; 4];
    let mut len = 0;
    pts[len] = 0.0;
    len += 1;
    let mut inner = [f64::NAN; 2];
    for (slot, t) in inner.iter_mut().zip([b - d, -b - d]) {
        let c = t / a;
        if c > -1.0 && c < 1.0 {
            *slot = c.acos();
        }
    }
    if inner[0] > inner[1] {
        inner.swap(0, 1);
    }
    for u in inner {
        if u.is_finite() && u > pts[len - 1] && u < PI {
            pts[len] = u;
            len += 1;
        }
    }
    pts[len] = PI;
    len += 1;

    let mut acc = 0.0;
    for w in pts[..len].windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        let mid = 0.5 * (w[0] + w[1]);
        for (&s, &wt) in rule.nodes.iter().zip(&rule.weights) {
            let u = mid + half * 0.5 * s * (3.0 - s * s);
            let jac = half * 1.5 * (1.0 - s * s);
            acc += wt * jac * abs_affine_cos_integral(d + a * u.cos(), b);
        }
    }
    scale * acc
}

/// `K_T` on the product Gauss grid of order `n` on the square.
///
/// An entry depends on the node pair in `x` only through `(x_i x_k, a_ik)`,
/// which is unchanged by reflecting both nodes or swapping them; likewise in
/// `y`. Pairs are
/// folded to one representative per reflection class and the table stores one
/// value per pair of classes. Swapping the roles of `x` and `y` leaves the
/// kernel unchanged, so only the upper triangle is computed.
#[derive(Debug, Clone)]
pub struct ReducedKernelTable {
    rule: QuadratureRule,
    pair_index: Vec<u32>,
    classes: usize,
    values: Vec<f64>,
}

impl ReducedKernelTable {
    pub fn new(order: usize) -> Self {
        Self::with_kernel_order(order, KERNEL_ORDER)
    }

    pub fn with_kernel_order(order: usize, kernel_order: usize) -> Self {
        assert!(order >= 2, "table order must be at least 2");
        let rule = gauss_legendre(order);
        let n = order;
        let mut pair_index = vec![u32::MAX; n * n];
        let mut reps: Vec<(f64, f64)> = Vec::new();
        for i in 0..n {
            for k in 0..n {
                let (ri, rk) = (n - 1 - i, n - 1 - k);
                let mirror = [ri * n + rk, k * n + i, rk * n + ri]
                    .into_iter()
                    .map(|idx| pair_index[idx])
                    .find(|&id| id != u32::MAX)
                    .unwrap_or(u32::MAX);
                if mirror != u32::MAX {
                    pair_index[i * n + k] = mirror;
                } else {
                    pair_index[i * n + k] = reps.len() as u32;
                    let (xi, xk) = (rule.nodes[i], rule.nodes[k]);
                    reps.push((xi * xk, side(xi) * side(xk)));
                }
            }
        }
        let classes = reps.len();
        let kr = gauss_legendre(kernel_order);
        let rows: Vec<Vec<f64>> = (0..classes)
            .into_par_iter()
            .map(|p| {
                (p..classes)
                    .map(|q| kernel_from_parts(reps[p].0 + reps[q].0, reps[p].1, reps[q].1, &kr))
                    .collect()
            })
            .collect();
        let mut values = vec![0.0; classes * classes];
        for (p, row) in rows.iter().enumerate() {
            for (off, &v) in row.iter().enumerate() {
                let q = p + off;
                values[p * classes + q] = v;
                values[q * classes + p] = v;
            }
        }
        Self {
            rule,
            pair_index,
            classes,
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.rule.len()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// `K_T(x_i, y_j; x_k, y_l)` on the grid.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.order();
        let p = self.pair_index[i * n + k] as usize;
        let q = self.pair_index[j * n + l] as usize;
        self.values[p * self.classes + q]
    }

    /// `(C_T f)(x_i, y_j) = (1/4) Σ_{k,l} w_k w_l K_T(i, j; k, l) f(k, l)` for
    /// `f` given row-major on the grid (`f[k * n + l]` at `(x_k, y_l)`).
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let n = self.order();
        assert_eq!(f.len(), n * n, "grid values have the wrong length");
        let w = &self.rule.weights;
        let wf: Vec<f64> = (0..n * n).map(|kl| 0.25 * w[kl / n] * w[kl % n] * f[kl]).collect();
        (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                let mut acc = 0.0;
                for k in 0..n {
                    let row = &self.values[self.pair_index[i * n + k] as usize * self.classes..];
                    let cols = &self.pair_index[j * n..(j + 1) * n];
                    let wrow = &wf[k * n..(k + 1) * n];
                    for (l, &q) in cols.iter().enumerate() {
                        acc += row[q as usize] * wrow[l];
                    }
                }
                acc
            })
            .collect()
    }

    /// Largest `|K(i,j;k,l) − K(k,l;i,j)|` over the grid.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.order();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        worst = worst.max((self.get(i, j, k, l) - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// A table per order, built on first use and shared afterwards.
pub fn cached_table(order: usize) -> Arc<ReducedKernelTable> {
    use std::collections::HashMap;
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ReducedKernelTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&order) {
        return t.clone();
    }
    // built outside the lock so other orders are not blocked
    let table = Arc::new(ReducedKernelTable::new(order));
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .entry(order)
        .or_insert(table)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid_g(m: f64, b: f64) -> f64 {
        let n = 2_000_000;
        let h = 2.0 * PI / n as f64;
        (0..n).map(|i| (m + b * (i as f64 * h).cos()).abs()).sum::<f64>() * h
    }

    #[test]
    fn closed_form_g() {
        assert!((abs_affine_cos_integral(0.0, 1.0) - 4.0).abs() < 1e-15);
        assert!((abs_affine_cos_integral(2.0, 1.0) - 4.0 * PI).abs() < 1e-15);
        let b = 0.7;
        assert!((abs_affine_cos_integral(b, b) - 2.0 * PI * b).abs() < 1e-15);
        assert!((abs_affine_cos_integral(b * (1.0 - 1e-12), b) - 2.0 * PI * b).abs() < 1e-9);
        for (m, b) in [(0.3, 0.9), (-0.5, 0.6), (0.1, 0.1)] {
            assert!((abs_affine_cos_integral(m, b) - trapezoid_g(m, b)).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_corners() {
        assert!((reduced_kernel(1.0, 1.0, 1.0, 1.0) - 1.0).abs() < 1e-14);
        assert!(reduced_kernel(1.0, 1.0, 1.0, -1.0).abs() < 1e-14);
        assert!((reduced_kernel(0.0, 0.0, 0.0, 0.0) - 32.0 / (8.0 * PI * PI)).abs() < 1e-12);
    }

    #[test]
    fn kernel_converged_at_default_order() {
        for &(x, y, xp, yp) in &[(0.3, -0.2, 0.7, 0.1), (0.9, 0.5, -0.4, 0.6), (0.0, 0.99, 0.2, -0.3)] {
            let lo = reduced_kernel(x, y, xp, yp);
            let hi = reduced_kernel_with_order(x, y, xp, yp, 256);
            assert!((lo - hi).abs() < 1e-11, "{lo} vs {hi}");
        }
    }

    #[test]
    fn small_table_properties() {
        let t = ReducedKernelTable::new(8);
        assert_eq!(t.symmetry_defect(), 0.0);
        let (lo, hi) = t.min_max();
        assert!(lo >= 0.0 && hi <= 1.0);
        let r = t.rule().clone();
        let v = reduced_kernel(r.nodes[1], r.nodes[6], r.nodes[3], r.nodes[0]);
        assert!((t.get(1, 6, 3, 0) - v).abs() < 1e-15);
    }
}
