use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use super::legendre::legendre_with_derivative;

/// An n-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are stored in increasing order and are exactly antisymmetric:
/// `nodes[n - 1 - i] == -nodes[i]`, which the kernel tables rely on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_{-1}^{1} f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `∫_a^b f` with the rule mapped affinely onto `[a, b]`.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate(|t| f(mid + half * t))
    }

    /// `∫_a^b f` split at the given interior breakpoints (those outside `(a, b)`
    /// are ignored). Use this for integrands with kinks at known locations.
    pub fn integrate_split<F: Fn(f64) -> f64>(&self, a: f64, b: f64, breaks: &[f64], f: F) -> f64 {
        let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
        pts.push(a);
        pts.extend(breaks.iter().copied().filter(|&t| t > a && t < b));
        pts.push(b);
        pts.sort_by(|p, q| p.total_cmp(q));
        pts.windows(2)
            .filter(|w| w[1] > w[0])
            .map(|w| self.integrate_on(w[0], w[1], &f))
            .sum()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|&t| mid + half * t).collect();
        let weights = self.weights.iter().map(|&w| half * w).collect();
        (nodes, weights)
    }
}

/// A shared copy of `gauss_legendre(n)`, built once per order.
pub fn gauss_legendre_cached(n: usize) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard.entry(n).or_insert_with(|| Arc::new(gauss_legendre(n))).clone()
}

/// Gauss–Legendre nodes and weights by Newton iteration on `p_n`.
///
/// # Panics
/// Panics if `n == 0`.
pub fn gauss_legendre(n: usize) -> QuadratureRule {
    assert!(n >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let half = n / 2;
    for i in 0..half {
        // Tricomi's initial guess for the i-th largest root.
        let k = (i + 1) as f64;
        let theta = std::f64::consts::PI * (4.0 * k - 1.0) / (4.0 * nf + 2.0);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_with_derivative(n, 0.0);
        nodes[half] = 0.0;
        weights[half] = 2.0 / (dp * dp);
    }
    QuadratureRule { nodes, weights }
}
