//! The cosine transform restricted to torus-invariant functions.
//!
//! A torus-invariant function on the Grassmannian is a function of the
//! Gluck–Warner heights `(x, y) ∈ [−1, 1]²`, even under `(x, y) ↦ (−x, −y)`.
//! The uniform measure on each sphere projects to `dx/2` (Archimedes), so the
//! transform becomes
//!
//! ```text
//! (C_T f)(x, y) = (1/4) ∫∫ K_T(x, y; x′, y′) f(x′, y′) dx′ dy′.
//! ```
//!
//! On products `p_m(x) p_n(y)` with `m − n` even, `C_T` vanishes for
//! `|m − n| ≥ 4` and is injective for `|m − n| ∈ {0, 2}`.

mod kernel;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

pub use kernel::{
    abs_affine_cos_integral, cached_table, reduced_kernel, reduced_kernel_with_order, ReducedKernelTable, KERNEL_ORDER,
};

use crate::sampling::radical_inverse;
use crate::spectral::{classify_index, legendre_all, legendre_eval, IndexClass, MomentKind, MomentMatrix};
use crate::{Error, Result};

type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A function of the orbit heights `(x, y)`.
#[derive(Clone)]
pub struct TorusInvariantFunction {
    label: String,
    f: Evaluator,
}

impl fmt::Debug for TorusInvariantFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusInvariantFunction")
            .field("label", &self.label)
            .finish()
    }
}

impl TorusInvariantFunction {
    pub fn new(label: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_, _| c)
    }

    /// `p_m(x) p_n(y)`.
    pub fn legendre_product(m: usize, n: usize) -> Self {
        Self::new(format!("p{m}(x)p{n}(y)"), move |x, y| {
            legendre_eval(m, x) * legendre_eval(n, y)
        })
    }

    /// `Σ c_{m,n} p_m(x) p_n(y)` from normalized coefficients.
    pub fn from_coefficients(label: impl Into<String>, coeffs: MomentMatrix) -> Self {
        let c = coeffs.to_normalized();
        Self::new(label, move |x, y| c.evaluate_series(x, y))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }

    /// Checks `f(x, y) = f(−x, −y)` on a fixed scatter of points.
    pub fn check_antipodal(&self, tol: f64) -> Result<()> {
        for (x, y) in scatter_points(32) {
            let (a, b) = (self.eval(x, y), self.eval(-x, -y));
            if (a - b).abs() > tol * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "{} is not antipodally even: f({x}, {y}) = {a}, f(-x, -y) = {b}",
                    self.label
                )));
            }
        }
        Ok(())
    }
}

/// Deterministic points in the open square, from a 2-3 Halton sequence.
pub fn scatter_points(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| (2.0 * radical_inverse(i, 2) - 1.0, 2.0 * radical_inverse(i, 3) - 1.0))
        .collect()
}

/// The discretized operator on the product Gauss grid of one order.
#[derive(Debug, Clone)]
pub struct CosineOperator {
    table: Arc<ReducedKernelTable>,
}

impl CosineOperator {
    /// Shares a process-wide table for `order`.
    pub fn new(order: usize) -> Self {
        Self {
            table: cached_table(order),
        }
    }

    pub fn from_table(table: Arc<ReducedKernelTable>) -> Self {
        Self { table }
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn table(&self) -> &ReducedKernelTable {
        &self.table
    }

    /// Grid values of `f`, row-major in `(x, y)`.
    pub fn sample(&self, f: &TorusInvariantFunction) -> Vec<f64> {
        let nodes = &self.table.rule().nodes;
        nodes
            .iter()
            .flat_map(|&x| nodes.iter().map(move |&y| f.eval(x, y)))
            .collect()
    }

    pub fn apply_values(&self, values: &[f64]) -> Vec<f64> {
        self.table.apply(values)
    }

    pub fn apply(&self, f: &TorusInvariantFunction) -> CosineImage {
        let input = self.sample(f);
        let values = self.table.apply(&input);
        CosineImage {
            label: format!("C_T[{}]", f.label()),
            table: self.table.clone(),
            input,
            values,
        }
    }

    /// `∫∫ u v dx dy / 4` on the grid.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let w = &self.table.rule().weights;
        let n = w.len();
        u.iter()
            .zip(v)
            .enumerate()
            .map(|(kl, (a, b))| 0.25 * w[kl / n] * w[kl % n] * a * b)
            .sum()
    }

    /// `⟨C_T(p_m p_n), p_{m′} p_{n′}⟩` for all index pairs up to `degree`,
    /// ordered `(m, n)` row-major.
    pub fn moment_operator(&self, degree: usize) -> DMatrix<f64> {
        let nodes = &self.table.rule().nodes;
        let p: Vec<Vec<f64>> = nodes.iter().map(|&x| legendre_all(degree, x)).collect();
        let d1 = degree + 1;
        let basis: Vec<Vec<f64>> = (0..d1 * d1)
            .map(|mn| {
                let (m, n) = (mn / d1, mn % d1);
                p.iter().flat_map(|px| p.iter().map(move |py| px[m] * py[n])).collect()
            })
            .collect();
        let images: Vec<Vec<f64>> = basis.iter().map(|b| self.table.apply(b)).collect();
        DMatrix::from_fn(d1 * d1, d1 * d1, |r, c| self.inner(&images[c], &basis[r]))
    }
}

/// `C_T f` on the grid, with pointwise evaluation by the Nyström formula.
#[derive(Debug, Clone)]
pub struct CosineImage {
    label: String,
    table: Arc<ReducedKernelTable>,
    input: Vec<f64>,
    values: Vec<f64>,
}

impl CosineImage {
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Values at the grid nodes, row-major in `(x, y)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(1/4) Σ w_k w_l K_T(x, y; x_k, y_l) f(x_k, y_l)` at any point.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let rule = self.table.rule();
        let n = rule.len();
        let mut acc = 0.0;
        for k in 0..n {
            for l in 0..n {
                let k_val = reduced_kernel(x, y, rule.nodes[k], rule.nodes[l]);
                acc += rule.weights[k] * rule.weights[l] * k_val * self.input[k * n + l];
            }
        }
        0.25 * acc
    }

    /// Raw Legendre moments of the grid values.
    pub fn moments(&self, degree: usize) -> MomentMatrix {
        let rule = self.table.rule();
        let n = rule.len();
        let p: Vec<Vec<f64>> = rule.nodes.iter().map(|&x| legendre_all(degree, x)).collect();
        MomentMatrix::from_fn(degree, MomentKind::Raw, |m, mm| {
            let mut acc = 0.0;
            for k in 0..n {
                for l in 0..n {
                    acc += rule.weights[k] * rule.weights[l] * self.values[k * n + l] * p[k][m] * p[l][mm];
                }
            }
            acc
        })
    }

    pub fn into_function(self) -> TorusInvariantFunction {
        let label = self.label.clone();
        let img = Arc::new(self);
        TorusInvariantFunction::new(label, move |x, y| img.eval(x, y))
    }
}

/// `C_T f` at `order` nodes per axis.
pub fn apply_cosine(f: &TorusInvariantFunction, order: usize) -> CosineImage {
    CosineOperator::new(order).apply(f)
}

/// Keeps even-difference entries with `|m − n| ≥ 4`.
pub fn kernel_projection(m: &MomentMatrix) -> MomentMatrix {
    m.filtered(|a, b| classify_index(a, b) == IndexClass::Kernel)
}

/// Keeps entries with `|m − n| ∈ {0, 2}`.
pub fn image_projection(m: &MomentMatrix) -> MomentMatrix {
    m.filtered(|a, b| classify_index(a, b) == IndexClass::Image)
}

/// `|⟨C_T f, g⟩ − ⟨f, C_T g⟩|` on the grid.
pub fn self_adjointness_defect(f: &TorusInvariantFunction, g: &TorusInvariantFunction, order: usize) -> f64 {
    let op = CosineOperator::new(order);
    let (fv, gv) = (op.sample(f), op.sample(g));
    let (cf, cg) = (op.apply_values(&fv), op.apply_values(&gv));
    (op.inner(&cf, &gv) - op.inner(&fv, &cg)).abs()
}

/// `(∫∫ f² dx dy / 4)^{1/2}` on the grid.
pub fn grid_norm(f: &TorusInvariantFunction, order: usize) -> f64 {
    let op = CosineOperator::new(order);
    let v = op.sample(f);
    op.inner(&v, &v).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct AnnihilationCheck {
    pub indices: (usize, usize),
    pub norm: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// `‖C_T(p_m p_n)‖∞` against `factor · ‖C_T 1‖∞`. For kernel indices the
/// check passes when the norm is below the threshold, otherwise when above.
pub fn annihilation_check(op: &CosineOperator, m: usize, n: usize, factor: f64) -> AnnihilationCheck {
    let reference = op.apply(&TorusInvariantFunction::constant(1.0)).sup_norm();
    let norm = op.apply(&TorusInvariantFunction::legendre_product(m, n)).sup_norm();
    let threshold = factor * reference;
    let pass = if classify_index(m, n) == IndexClass::Kernel {
        norm <= threshold
    } else {
        norm >= threshold
    };
    AnnihilationCheck {
        indices: (m, n),
        norm,
        threshold,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projections_split_indices() {
        let k = MomentMatrix::single(8, MomentKind::Raw, 4, 0, 1.0);
        assert_eq!(kernel_projection(&k), k);
        assert_eq!(image_projection(&k).max_abs(), 0.0);
        let i = MomentMatrix::single(8, MomentKind::Raw, 2, 2, 1.0);
        assert_eq!(image_projection(&i), i);
        assert_eq!(kernel_projection(&i).max_abs(), 0.0);
        let o = MomentMatrix::single(8, MomentKind::Raw, 3, 2, 1.0);
        assert_eq!(kernel_projection(&o).max_abs() + image_projection(&o).max_abs(), 0.0);
    }

    #[test]
    fn constant_maps_to_constant() {
        let img = apply_cosine(&TorusInvariantFunction::constant(1.0), 16);
        let v = img.values();
        let (lo, hi) = v
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!(hi - lo < 1e-3 * hi, "{lo} {hi}");
    }

    #[test]
    fn self_adjoint_on_small_grid() {
        let f = TorusInvariantFunction::legendre_product(2, 0);
        let g = TorusInvariantFunction::new("xy", |x, y| x * y + 1.0);
        assert!(self_adjointness_defect(&f, &g, 12) < 1e-15);
        assert_eq!(self_adjointness_defect(&f, &f, 12), 0.0);
    }

    #[test]
    fn antipodal_check() {
        assert!(TorusInvariantFunction::legendre_product(1, 1)
            .check_antipodal(1e-12)
            .is_ok());
        assert!(TorusInvariantFunction::new("x", |x, _| x)
            .check_antipodal(1e-12)
            .is_err());
    }
}
