//! Integral equations behind the existence of Crofton measures for
//! torus-invariant metrics on C².
//!
//! Restricted to the unit sphere, a torus-invariant metric is a function
//! `F(η)` of `η ∈ [0, π/2]` and a torus-invariant Crofton density is a
//! function `f(η)`; the two are related by the first-kind equation
//! `∫ K(η, η̄) f(η) w(η) dη = F(η̄)` with `K(η, η̄) = I′(cos η cos η̄, sin η sin η̄)`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::klain::abs_cos_integral;
use crate::spectral::gauss_legendre_cached;
use crate::{Error, Result};

/// Condition number beyond which a system is treated as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// `K(η, η̄) = ∫∫ |cos(ξ₁) cos η cos η̄ + cos(ξ₂) sin η sin η̄| dξ₁ dξ₂`.
pub fn surjectivity_kernel(eta: f64, eta_bar: f64) -> f64 {
    abs_cos_integral(eta.cos() * eta_bar.cos(), eta.sin() * eta_bar.sin())
}

type Kernel = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Gauss nodes on `[a, b]` with the kernel sampled at every node pair.
#[derive(Debug, Clone, Serialize)]
pub struct NystromSystem {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    #[serde(skip)]
    pub kernel_matrix: DMatrix<f64>,
}

impl NystromSystem {
    pub fn new(kernel: impl Fn(f64, f64) -> f64, a: f64, b: f64, n: usize) -> Result<Self> {
        if n == 0 || !(b > a) {
            return Err(Error::InvalidArgument(format!(
                "need n > 0 and a < b, got n = {n}, [{a}, {b}]"
            )));
        }
        let (nodes, weights) = gauss_legendre_cached(n).mapped(a, b);
        let kernel_matrix = DMatrix::from_fn(n, n, |i, j| kernel(nodes[i], nodes[j]));
        Ok(Self {
            nodes,
            weights,
            kernel_matrix,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `K W`, the matrix of `φ ↦ ∫ K(·, y) φ(y) dy` on the nodes.
    pub fn operator(&self) -> DMatrix<f64> {
        let mut m = self.kernel_matrix.clone();
        for (j, &w) in self.weights.iter().enumerate() {
            m.column_mut(j).scale_mut(w);
        }
        m
    }

    pub fn symmetry_defect(&self) -> f64 {
        (&self.kernel_matrix - self.kernel_matrix.transpose()).abs().max()
    }
}

/// Nyström solution of `λ φ − ∫ K φ = f`.
#[derive(Clone)]
pub struct SecondKindSolution {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub lambda: f64,
    /// `‖λφ − KWφ − f‖∞` on the nodes.
    pub residual: f64,
    pub condition: f64,
    /// Set when `λ` is an eigenvalue and `f` satisfied the solvability
    /// condition; `values` is then the minimum-norm solution.
    pub on_spectrum: bool,
    kernel: Kernel,
    rhs: Func,
}

impl fmt::Debug for SecondKindSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SecondKindSolution")
            .field("nodes", &self.nodes)
            .field("values", &self.values)
            .field("lambda", &self.lambda)
            .field("residual", &self.residual)
            .field("condition", &self.condition)
            .field("on_spectrum", &self.on_spectrum)
            .finish()
    }
}

impl SecondKindSolution {
    /// Nyström interpolation `φ(x) = (f(x) + Σ w_j K(x, x_j) φ_j) / λ`.
    pub fn eval(&self, x: f64) -> f64 {
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&t, &w), &v)| w * (self.kernel)(x, t) * v)
            .sum();
        ((self.rhs)(x) + s) / self.lambda
    }
}

/// Solves `λ φ(x) − ∫_a^b K(x, y) φ(y) dy = f(x)` on `n` Gauss nodes.
///
/// When `λ I − K W` is singular (condition above 10¹²) the Fredholm
/// alternative decides: with `ψ` spanning the adjoint null space, the system
/// is solvable iff `∫ ψ f = 0`. Solvable cases return the minimum-norm
/// solution; otherwise [`Error::SingularSystem`] reports `∫ ψ f` for `ψ` of
/// unit L² norm.
pub fn solve_second_kind(
    lambda: f64,
    kernel: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    rhs: impl Fn(f64) -> f64 + Send + Sync + 'static,
    interval: (f64, f64),
    n: usize,
) -> Result<SecondKindSolution> {
    if lambda == 0.0 {
        return Err(Error::InvalidArgument("lambda = 0 is a first-kind equation".into()));
    }
    let kernel: Kernel = Arc::new(kernel);
    let rhs: Func = Arc::new(rhs);
    let sys = NystromSystem::new(|x, y| kernel(x, y), interval.0, interval.1, n)?;
    let m = DMatrix::identity(n, n) * lambda - sys.operator();
    let f = DVector::from_iterator(n, sys.nodes.iter().map(|&x| rhs(x)));

    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };

    let (values, on_spectrum) = if condition <= SINGULAR_CONDITION {
        let lu = m.clone().lu();
        (
            lu.solve(&f).ok_or(Error::SingularSystem {
                condition,
                inner_product: f64::NAN,
            })?,
            false,
        )
    } else {
        let tol = smax * 1e-12;
        // adjoint null vectors from V of the transpose
        let t_svd = m.transpose().svd(false, true);
        let v_t = t_svd.v_t.as_ref().expect("requested V");
        let fnorm = l2_norm(&f, &sys.weights);
        let mut worst: f64 = 0.0;
        for (k, &s) in t_svd.singular_values.iter().enumerate() {
            if s > tol {
                continue;
            }
            // ψ_i = u_i / w_i makes Σ w_i ψ_i f_i = u · f
            let psi: Vec<f64> = (0..n).map(|i| v_t[(k, i)] / sys.weights[i]).collect();
            let psi_norm = psi.iter().zip(&sys.weights).map(|(p, w)| w * p * p).sum::<f64>().sqrt();
            let ip = psi
                .iter()
                .zip(&sys.weights)
                .zip(f.iter())
                .map(|((p, w), fi)| w * p * fi)
                .sum::<f64>()
                / psi_norm;
            if ip.abs() > worst.abs() {
                worst = ip;
            }
        }
        if worst.abs() > 1e-8 * fnorm.max(f64::MIN_POSITIVE) {
            return Err(Error::SingularSystem {
                condition,
                inner_product: worst,
            });
        }
        let x = svd.solve(&f, tol).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        (x, true)
    };

    let r = &m * &values - &f;
    Ok(SecondKindSolution {
        nodes: sys.nodes,
        weights: sys.weights,
        values: values.iter().copied().collect(),
        lambda,
        residual: r.amax(),
        condition,
        on_spectrum,
        kernel,
        rhs,
    })
}

fn l2_norm(v: &DVector<f64>, w: &[f64]) -> f64 {
    v.iter().zip(w).map(|(x, w)| w * x * x).sum::<f64>().sqrt()
}

/// `F(η) = ‖(cos η, sin η)‖` for a torus-invariant metric.
#[derive(Clone)]
pub struct MetricProfile {
    label: String,
    f: Func,
}

impl fmt::Debug for MetricProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricProfile").field("label", &self.label).finish()
    }
}

impl MetricProfile {
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn euclidean() -> Self {
        Self::new("euclid", |_| 1.0)
    }

    pub fn l1() -> Self {
        Self::new("l1", |e: f64| e.cos() + e.sin())
    }

    pub fn linf() -> Self {
        Self::new("linf", |e: f64| e.cos().max(e.sin()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, eta: f64) -> f64 {
        (self.f)(eta)
    }
}

/// The profile `F(η) = norm(cos η, sin η)` of the torus-invariant metric
/// `(z, w) ↦ norm(|z|, |w|)`.
///
/// The norm is checked for positivity and 1-homogeneity at scales
/// `0.5, 3, 10` along a fan of directions.
pub fn metric_from_r2_norm(
    label: impl Into<String>,
    norm: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
) -> Result<MetricProfile> {
    for i in 0..=16 {
        let eta = FRAC_PI_2 * i as f64 / 16.0;
        let (c, s) = (eta.cos(), eta.sin());
        let base = norm(c, s);
        if !(base > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "norm not positive at eta = {eta}: {base}"
            )));
        }
        for t in [0.5, 3.0, 10.0] {
            let scaled = norm(t * c, t * s);
            let expected = t * base;
            if (scaled - expected).abs() > 1e-10 * expected {
                return Err(Error::NotHomogeneous {
                    scale: t,
                    scaled,
                    expected,
                });
            }
        }
    }
    Ok(MetricProfile::new(label, move |e: f64| norm(e.cos(), e.sin())))
}

/// Orbit weight in `∫ K f w dη`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitWeight {
    /// `sin η cos η`, the volume of the torus orbit through `η` in S³.
    Sphere,
    /// `1`.
    Flat,
}

impl OrbitWeight {
    pub fn eval(self, eta: f64) -> f64 {
        match self {
            Self::Sphere => eta.sin() * eta.cos(),
            Self::Flat => 1.0,
        }
    }
}

impl std::str::FromStr for OrbitWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Self::Sphere),
            "flat" => Ok(Self::Flat),
            other => Err(Error::InvalidArgument(format!("unknown weight '{other}'"))),
        }
    }
}

/// Settings for [`solve_first_kind_with`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FirstKindOptions {
    pub nodes: usize,
    pub reg: f64,
    pub weight: OrbitWeight,
    /// Adds point masses on the degenerate orbits `η = 0` and `η = π/2`
    /// (the circles in `C×{0}` and `{0}×C`) as two extra unknowns.
    pub endpoint_atoms: bool,
}

impl Default for FirstKindOptions {
    fn default() -> Self {
        Self {
            nodes: 64,
            reg: 1e-10,
            weight: OrbitWeight::Sphere,
            endpoint_atoms: true,
        }
    }
}

/// Regularized solution of the first-kind Crofton equation.
#[derive(Debug, Clone, Serialize)]
pub struct FirstKindSolution {
    pub nodes: Vec<f64>,
    #[serde(skip)]
    pub quadrature_weights: Vec<f64>,
    pub density: Vec<f64>,
    /// Masses at `η = 0` and `η = π/2`; zero when atoms are disabled.
    pub atoms: [f64; 2],
    /// `‖A f − F‖∞ / ‖F‖∞` on the nodes.
    pub residual: f64,
    /// Condition number of the unregularized matrix.
    pub condition: f64,
    pub reg: f64,
    pub weight: OrbitWeight,
    /// The unregularized system is beyond 10¹²: a first-kind equation, the
    /// density is only as meaningful as the regularization makes it.
    pub ill_conditioned: bool,
}

/// The forward matrix `A_ij = K(η_i, η_j) w(η_j) ω_j` on `n` Gauss nodes of
/// `[0, π/2]`, with its nodes.
pub fn crofton_forward_matrix(n: usize, weight: OrbitWeight) -> (Vec<f64>, DMatrix<f64>) {
    let (nodes, wq) = gauss_legendre_cached(n).mapped(0.0, FRAC_PI_2);
    let a = DMatrix::from_fn(n, n, |i, j| {
        surjectivity_kernel(nodes[j], nodes[i]) * weight.eval(nodes[j]) * wq[j]
    });
    (nodes, a)
}

/// [`solve_first_kind_with`] without endpoint atoms.
pub fn solve_first_kind(profile: &MetricProfile, n: usize, reg: f64, weight: OrbitWeight) -> Result<FirstKindSolution> {
    solve_first_kind_with(
        profile,
        &FirstKindOptions {
            nodes: n,
            reg,
            weight,
            endpoint_atoms: false,
        },
    )
}

/// Minimizes `‖A f − F‖² + reg ‖f‖²` through the QR factorization of the
/// stacked matrix `[A; √reg I]`.
pub fn solve_first_kind_with(profile: &MetricProfile, opts: &FirstKindOptions) -> Result<FirstKindSolution> {
    let (n, reg) = (opts.nodes, opts.reg);
    if n == 0 || !(reg >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need n > 0 and reg >= 0, got n = {n}, reg = {reg}"
        )));
    }
    let (nodes, mut a) = crofton_forward_matrix(n, opts.weight);
    if opts.endpoint_atoms {
        a = a.insert_columns(n, 2, 0.0);
        for (i, &eb) in nodes.iter().enumerate() {
            a[(i, n)] = surjectivity_kernel(0.0, eb);
            a[(i, n + 1)] = surjectivity_kernel(FRAC_PI_2, eb);
        }
    }
    let rhs = DVector::from_iterator(n, nodes.iter().map(|&e| profile.eval(e)));
    if rhs.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "profile {} is not positive",
            profile.label()
        )));
    }
    let sv = a.clone().singular_values();
    let condition = sv.max() / sv.min();
    let x = tikhonov(&a, &rhs, reg)?;
    let residual = (&a * &x - &rhs).amax() / rhs.amax();
    let atoms = if opts.endpoint_atoms {
        [x[n], x[n + 1]]
    } else {
        [0.0; 2]
    };
    let quadrature_weights = gauss_legendre_cached(n).mapped(0.0, FRAC_PI_2).1;
    Ok(FirstKindSolution {
        nodes,
        quadrature_weights,
        density: x.rows(0, n).iter().copied().collect(),
        atoms,
        residual,
        condition,
        reg,
        weight: opts.weight,
        ill_conditioned: condition > SINGULAR_CONDITION,
    })
}

fn tikhonov(a: &DMatrix<f64>, rhs: &DVector<f64>, reg: f64) -> Result<DVector<f64>> {
    let (m, n) = a.shape();
    let mut stacked = DMatrix::zeros(m + n, n);
    stacked.view_mut((0, 0), (m, n)).copy_from(a);
    let s = reg.sqrt();
    for i in 0..n {
        stacked[(m + i, i)] = s;
    }
    let mut b = DVector::zeros(m + n);
    b.rows_mut(0, m).copy_from(rhs);
    let qr = stacked.qr();
    let qtb = qr.q().transpose() * b;
    let r = qr.r();
    r.solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::InvalidArgument("regularized system is singular; use reg > 0".into()))
}

impl FirstKindSolution {
    /// The Nyström forward image `Σ_j ω_j w(η_j) K(η_j, η̄) f_j` plus the
    /// atom contributions, at any `η̄`.
    pub fn forward(&self, eta_bar: f64) -> f64 {
        let body: f64 = self
            .nodes
            .iter()
            .zip(&self.quadrature_weights)
            .zip(&self.density)
            .map(|((&e, &w), &f)| w * self.weight.eval(e) * surjectivity_kernel(e, eta_bar) * f)
            .sum();
        body + self.atoms[0] * surjectivity_kernel(0.0, eta_bar)
            + self.atoms[1] * surjectivity_kernel(FRAC_PI_2, eta_bar)
    }

    /// `max |forward − F| / max |F|` over `samples + 1` equispaced points of
    /// `[0, π/2]`, most of which are not nodes.
    pub fn off_grid_residual(&self, profile: &MetricProfile, samples: usize) -> f64 {
        let samples = samples.max(1);
        let (mut worst, mut scale): (f64, f64) = (0.0, 0.0);
        for i in 0..=samples {
            let eb = FRAC_PI_2 * i as f64 / samples as f64;
            let target = profile.eval(eb);
            worst = worst.max((self.forward(eb) - target).abs());
            scale = scale.max(target.abs());
        }
        worst / scale
    }
}

/// Applies the discrete forward operator to `f0`, solves the resulting
/// first-kind problem and returns the recovered density with its
/// L²-relative distance to `f0` on the nodes.
pub fn first_kind_round_trip(f0: impl Fn(f64) -> f64, opts: &FirstKindOptions) -> Result<(FirstKindSolution, f64)> {
    let (nodes, a) = crofton_forward_matrix(opts.nodes, opts.weight);
    let truth = DVector::from_iterator(nodes.len(), nodes.iter().map(|&e| f0(e)));
    let image: Vec<f64> = (&a * &truth).iter().copied().collect();
    let table = nodes.clone();
    let profile = MetricProfile::new("forward image", move |e| {
        let i = table
            .iter()
            .position(|&x| x == e)
            .expect("profile is only sampled on the nodes");
        image[i]
    });
    let sol = solve_first_kind_with(&profile, opts)?;
    let err = sol
        .density
        .iter()
        .zip(truth.iter())
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt()
        / truth.norm();
    Ok((sol, err))
}

/// Regularization grid searched by [`select_reg_discrepancy`].
pub const REG_GRID: [f64; 11] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12];

/// Quadrature error of the forward operator at `n` nodes, estimated as the
/// change in the image of the unit density when the order is doubled.
pub fn forward_quadrature_error(n: usize, weight: OrbitWeight) -> f64 {
    let img = |k: usize, eta_bar: f64| {
        let (nodes, wq) = gauss_legendre_cached(k).mapped(0.0, FRAC_PI_2);
        nodes
            .iter()
            .zip(&wq)
            .map(|(&e, &w)| w * weight.eval(e) * surjectivity_kernel(e, eta_bar))
            .sum::<f64>()
    };
    (0..=8)
        .map(|i| {
            let eb = FRAC_PI_2 * i as f64 / 8.0;
            (img(n, eb) - img(2 * n, eb)).abs() / img(2 * n, eb).abs().max(1e-300)
        })
        .fold(0.0, f64::max)
}

/// The largest `reg` in [`REG_GRID`] whose residual is at most twice the
/// forward quadrature error (discrepancy principle). Falls back to the
/// smallest grid value.
pub fn select_reg_discrepancy(profile: &MetricProfile, opts: &FirstKindOptions) -> Result<FirstKindSolution> {
    let target = 2.0 * forward_quadrature_error(opts.nodes, opts.weight);
    let mut last = None;
    for &reg in &REG_GRID {
        let sol = solve_first_kind_with(profile, &FirstKindOptions { reg, ..*opts })?;
        if sol.residual <= target {
            return Ok(sol);
        }
        last = Some(sol);
    }
    Ok(last.expect("grid is nonempty"))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn kernel_values() {
        assert!((surjectivity_kernel(0.0, 0.0) - 8.0 * PI).abs() < 1e-13);
        assert!(surjectivity_kernel(FRAC_PI_2, 0.0).abs() < 1e-13);
        let q = PI / 4.0;
        assert!((surjectivity_kernel(q, q) - 16.0).abs() < 1e-13);
        assert_eq!(surjectivity_kernel(0.3, 1.1), surjectivity_kernel(1.1, 0.3));
    }

    #[test]
    fn separable_kernel() {
        let s = solve_second_kind(1.0, |x, y| x * y, |x| x, (0.0, 1.0), 32).unwrap();
        for (&x, &v) in s.nodes.iter().zip(&s.values) {
            assert!((v - 1.5 * x).abs() < 1e-13);
        }
        assert!((s.eval(0.77) - 1.5 * 0.77).abs() < 1e-13);
        assert!(!s.on_spectrum);
    }

    #[test]
    fn zero_kernel_scales() {
        let s = solve_second_kind(2.0, |_, _| 0.0, |x: f64| x.sin(), (0.0, 1.0), 8).unwrap();
        for (&x, &v) in s.nodes.iter().zip(&s.values) {
            assert!((v - 0.5 * x.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn alternative_on_eigenvalue() {
        // K = xy on [0, 1] has eigenvalue 1/3 with eigenfunction x
        match solve_second_kind(1.0 / 3.0, |x, y| x * y, |x| x, (0.0, 1.0), 16) {
            Err(Error::SingularSystem { inner_product, .. }) => assert!(inner_product.abs() > 0.1),
            other => panic!("expected SingularSystem, got {other:?}"),
        }
        let s = solve_second_kind(1.0 / 3.0, |x, y| x * y, |x| 1.0 - 1.5 * x, (0.0, 1.0), 16).unwrap();
        assert!(s.on_spectrum && s.residual < 1e-8);
    }

    #[test]
    fn l1_profile_is_two_atoms() {
        let s = solve_first_kind_with(&MetricProfile::l1(), &FirstKindOptions::default()).unwrap();
        assert!(s.residual < 1e-9);
        for m in s.atoms {
            assert!((m - 1.0 / (8.0 * PI)).abs() < 1e-8);
        }
        assert!(s.density.iter().all(|d| d.abs() < 1e-4));
    }

    #[test]
    fn round_trip_vanishing_density() {
        let f0 = |e: f64| (2.0 * e).sin().powi(2);
        for atoms in [false, true] {
            let opts = FirstKindOptions {
                endpoint_atoms: atoms,
                ..FirstKindOptions::default()
            };
            let (sol, err) = first_kind_round_trip(f0, &opts).unwrap();
            assert!(err < 1e-4, "atoms {atoms}: {err}");
            assert!(sol.atoms.iter().all(|m| m.abs() < 1e-6));
        }
    }

    #[test]
    fn profiles_from_norms() {
        let e = metric_from_r2_norm("euclid", |a: f64, b: f64| a.hypot(b)).unwrap();
        assert!((e.eval(0.4) - 1.0).abs() < 1e-15);
        let l1 = metric_from_r2_norm("l1", |a: f64, b: f64| a.abs() + b.abs()).unwrap();
        assert!((l1.eval(0.4) - MetricProfile::l1().eval(0.4)).abs() < 1e-15);
        let sq = metric_from_r2_norm("sq", |a: f64, b: f64| a * a + b * b);
        assert!(matches!(sq, Err(Error::NotHomogeneous { .. })));
    }
}
