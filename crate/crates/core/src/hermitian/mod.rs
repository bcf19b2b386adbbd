//! Deciding whether a complex norm comes from a Hermitian form.
//!
//! On a complex line `L = C·e` the projection of the square spanned by `v`
//! and `iv` has area `|⟨v, e⟩|²`. Averaging against a density on CP^{n−1}
//! therefore produces `Σ h_ij v_i v̄_j` for a Hermitian `h`, so a norm whose
//! square is reached this way must itself be Hermitian. Numerically, the
//! squared norm is fitted in the `n²`-dimensional real space of Hermitian
//! forms and the misfit decides.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::sampling::halton_point;
use crate::{Error, Result};

/// Relative singular-value cutoff for the rank of the fitting system.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Default threshold on the fit residual for a Hermitian verdict.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(pub Vec<Complex64>);

impl ComplexVector {
    pub fn new(components: Vec<Complex64>) -> Self {
        Self(components)
    }

    pub fn from_parts(re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::InvalidArgument(format!(
                "{} real parts but {} imaginary parts",
                re.len(),
                im.len()
            )));
        }
        Ok(Self(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨v, e⟩ = Σ v_i ē_i`.
    pub fn inner(&self, e: &Self) -> Complex64 {
        self.0.iter().zip(&e.0).map(|(v, e)| v * e.conj()).sum()
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    /// Rotates the phase so that the first nonzero component is real and
    /// positive.
    pub fn canonical_phase(&self) -> Self {
        match self.0.iter().find(|z| z.norm() > 0.0) {
            Some(z) => self.scaled(z.conj() / z.norm()),
            None => self.clone(),
        }
    }
}

/// Area of the projection of the square spanned by `v` and `iv` onto the
/// complex line through the unit vector `e`: `|⟨v, e⟩|²`.
pub fn projection_area(v: &ComplexVector, e: &ComplexVector) -> Result<f64> {
    let norm = e.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit { norm });
    }
    if v.dim() != e.dim() {
        return Err(Error::InvalidArgument(format!(
            "dimensions {} and {} differ",
            v.dim(),
            e.dim()
        )));
    }
    Ok(v.inner(e).norm_sqr())
}

/// `n × n` complex matrix with `h_ij = conj(h_ji)`, acting by
/// `Q(z) = Σ h_ij z_i z̄_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    entries: DMatrix<Complex64>,
}

impl HermitianForm {
    /// Accepts `h` if it is Hermitian within `1e−12` and stores its exact
    /// Hermitian part.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidArgument("Hermitian form needs a square matrix".into()));
        }
        let defect = (&entries - entries.adjoint())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if defect > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not Hermitian (defect {defect:e})"
            )));
        }
        Ok(Self::symmetrized(entries))
    }

    /// Builds `h = re + i·im` from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n || re.iter().chain(im).any(|row| row.len() != n) {
            return Err(Error::InvalidArgument(
                "real and imaginary parts must both be n x n".into(),
            ));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| Complex64::new(re[i][j], im[i][j])))
    }

    fn symmetrized(m: DMatrix<Complex64>) -> Self {
        let adj = m.adjoint();
        Self {
            entries: (m + adj).map(|z| z * 0.5),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// `Σ h_ij z_i z̄_j`, real for Hermitian `h`.
    pub fn quadratic(&self, z: &ComplexVector) -> f64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.entries[(i, j)] * z.0[i] * z.0[j].conj();
            }
        }
        acc.re
    }

    pub fn hermitian_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entrywise distance to another form.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// The norm `z ↦ Q(z)^{1/2}`; `h` should be positive definite.
    pub fn induced_norm(&self) -> impl Fn(&ComplexVector) -> f64 + Clone + '_ {
        move |z| self.quadratic(z).max(0.0).sqrt()
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().map(|z| z.im).collect())
            .collect()
    }
}

impl Serialize for HermitianForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Parts {
            re: Vec<Vec<f64>>,
            im: Vec<Vec<f64>>,
        }
        Parts {
            re: self.real_parts(),
            im: self.imag_parts(),
        }
        .serialize(s)
    }
}

/// Unit vectors standing for lines in CP^{n−1}, with positive weights
/// summing to one.
#[derive(Debug, Clone)]
pub struct ProjectiveSample {
    points: Vec<ComplexVector>,
    weights: Vec<f64>,
}

impl ProjectiveSample {
    pub fn new(points: Vec<ComplexVector>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "sample needs as many weights as points, and at least one".into(),
            ));
        }
        let dim = points[0].dim();
        for p in &points {
            let norm = p.norm();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::NotUnit { norm });
            }
            if p.dim() != dim {
                return Err(Error::InvalidArgument("sample points differ in dimension".into()));
            }
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        let weights = weights.into_iter().map(|w| w / total).collect();
        Ok(Self { points, weights })
    }

    /// `size` points from a Halton sequence in `2n` dimensions, pushed to
    /// Gaussians by Box–Muller, normalized and phase-canonicalized. Equal
    /// weights.
    pub fn halton(n: usize, size: usize) -> Result<Self> {
        if n == 0 || 2 * n > crate::sampling::HALTON_BASES.len() {
            return Err(Error::InvalidArgument(format!("dimension {n} outside 1..=16")));
        }
        if size == 0 {
            return Err(Error::InvalidArgument("sample size must be positive".into()));
        }
        let points = (1..=size)
            .map(|i| {
                let u = halton_point(i, 2 * n);
                let z: Vec<Complex64> = (0..n)
                    .map(|k| {
                        let r = (-2.0 * u[2 * k].ln()).sqrt();
                        Complex64::from_polar(r, std::f64::consts::TAU * u[2 * k + 1])
                    })
                    .collect();
                let v = ComplexVector(z);
                let norm = v.norm();
                v.scaled(Complex64::new(1.0 / norm, 0.0)).canonical_phase()
            })
            .collect();
        Self::new(points, vec![1.0 / size as f64; size])
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ComplexVector] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `h_ij = Σ_k w_k conj(e_{k,i}) e_{k,j} f(e_k)`, symmetrized.
pub fn hermitian_moments(density: impl Fn(&ComplexVector) -> f64, sample: &ProjectiveSample) -> HermitianForm {
    let n = sample.dim();
    let mut h = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (e, &w) in sample.points.iter().zip(&sample.weights) {
        let f = density(e) * w;
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] += e.0[i].conj() * e.0[j] * f;
            }
        }
    }
    HermitianForm::symmetrized(h)
}

#[derive(Debug, Clone, Serialize)]
pub struct HermitianFit {
    pub form: HermitianForm,
    /// Weighted RMS misfit `(Σ w_k (F²(e_k) − Q(e_k))²)^{1/2}`.
    pub residual: f64,
    /// Rank of the fitting system; `n²` on a generic sample.
    pub rank: usize,
}

/// Values of the `n²` real basis forms at `z`: `|z_i|²` on the diagonal and
/// `2 Re(z_i z̄_j)`, `−2 Im(z_i z̄_j)` for `i < j`.
fn features(z: &ComplexVector) -> Vec<f64> {
    let n = z.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(z.0[i].norm_sqr());
    }
    for i in 0..n {
        for j in i + 1..n {
            let p = z.0[i] * z.0[j].conj();
            out.push(2.0 * p.re);
            out.push(-2.0 * p.im);
        }
    }
    out
}

fn form_from_params(n: usize, params: &[f64]) -> HermitianForm {
    let mut h = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        h[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = Complex64::new(params[k], params[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    HermitianForm { entries: h }
}

/// Weighted least-squares fit of `F²` by `Q(z) = Σ h_ij z_i z̄_j` over
/// Hermitian `h`.
pub fn fit_hermitian(f2: impl Fn(&ComplexVector) -> f64, sample: &ProjectiveSample) -> Result<HermitianFit> {
    let n = sample.dim();
    let params = n * n;
    if sample.len() < params {
        return Err(Error::RankDeficientSample {
            rank: sample.len(),
            expected: params,
        });
    }
    let rows = sample.len();
    let mut a = DMatrix::zeros(rows, params);
    let mut b = DVector::zeros(rows);
    for (r, (e, &w)) in sample.points.iter().zip(&sample.weights).enumerate() {
        let sw = w.sqrt();
        for (c, v) in features(e).into_iter().enumerate() {
            a[(r, c)] = sw * v;
        }
        b[r] = sw * f2(e);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_TOLERANCE * smax)
        .count();
    if rank < params {
        return Err(Error::RankDeficientSample { rank, expected: params });
    }
    let x = svd
        .solve(&b, RANK_TOLERANCE * smax)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let residual = (&a * &x - &b).norm();
    Ok(HermitianFit {
        form: form_from_params(n, x.as_slice()),
        residual,
        rank,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HermitianVerdict {
    pub hermitian: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub rank: usize,
    pub form: HermitianForm,
}

/// Checks positivity and homogeneity of `norm` on the sample, fits `norm²`
/// and compares the residual with `tol`.
pub fn is_hermitian_metric(
    norm: impl Fn(&ComplexVector) -> f64,
    n: usize,
    tol: f64,
    sample_size: usize,
) -> Result<HermitianVerdict> {
    let sample = ProjectiveSample::halton(n, sample_size)?;
    for e in sample.points.iter().take(32) {
        let base = norm(e);
        if !(base > 0.0) {
            return Err(Error::InvalidArgument(format!("norm not positive: {base}")));
        }
        for t in [0.5, 3.0] {
            let scaled = norm(&e.scaled(Complex64::new(t, 0.0)));
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
    let fit = fit_hermitian(|z| norm(z).powi(2), &sample)?;
    Ok(HermitianVerdict {
        hermitian: fit.residual <= tol,
        residual: fit.residual,
        tolerance: tol,
        rank: fit.rank,
        form: fit.form,
    })
}

/// `(z_1, …, z_n) ↦ Σ |z_i|`.
pub fn complex_l1_norm(z: &ComplexVector) -> f64 {
    z.0.iter().map(|c| c.norm()).sum()
}

/// `(z_1, …, z_n) ↦ (Σ |z_i|²)^{1/2}`.
pub fn euclidean_norm(z: &ComplexVector) -> f64 {
    z.norm()
}
