use gcos_core::hermitian::*;
use gcos_core::Error;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit(rng: &mut impl Rng, n: usize) -> ComplexVector {
    let v = ComplexVector::new(
        (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    );
    let r = v.norm();
    v.scaled(c(1.0 / r, 0.0))
}

/// `Σ_k w_k |⟨v, e_k⟩|²` summed term by term, sharing nothing with the
/// moment accumulation.
fn averaged_area(v: &ComplexVector, sample: &ProjectiveSample, density: impl Fn(&ComplexVector) -> f64) -> f64 {
    sample
        .points()
        .iter()
        .zip(sample.weights())
        .map(|(e, w)| w * density(e) * projection_area(v, e).unwrap())
        .sum()
}

#[test]
fn phase_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (v, e) = (unit(&mut rng, 3), unit(&mut rng, 3));
        let a = projection_area(&v, &e).unwrap();
        for t in [0.3, 1.7, 4.0] {
            let rot = Complex64::from_polar(1.0, t);
            assert!((projection_area(&v.scaled(rot), &e).unwrap() - a).abs() < 1e-14);
            assert!((projection_area(&v, &e.scaled(rot)).unwrap() - a).abs() < 1e-14);
        }
    }
}

#[test]
fn constant_density_gives_half_identity_on_c2() {
    // the uniform measure on CP¹ has E[|e_1|²] = 1/2 and E[e_1 ē_2] = 0
    let sample = ProjectiveSample::halton(2, 20_000).unwrap();
    let h = hermitian_moments(|_| 1.0, &sample);
    let half = HermitianForm::identity(2);
    for i in 0..2 {
        for j in 0..2 {
            let expect = 0.5 * half.get(i, j);
            assert!((h.get(i, j) - expect).norm() < 5e-3, "h[{i}{j}] = {}", h.get(i, j));
        }
    }
    assert_eq!(h.hermitian_defect(), 0.0);
}

#[test]
fn moments_reproduce_averaged_areas() {
    let sample = ProjectiveSample::halton(3, 500).unwrap();
    let density = |e: &ComplexVector| 1.0 + e.0[0].norm_sqr() + 0.5 * (e.0[1] * e.0[2].conj()).re;
    let h = hermitian_moments(density, &sample);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let v = unit(&mut rng, 3).scaled(c(rng.gen_range(0.5..2.0), 0.0));
        let direct = averaged_area(&v, &sample, density);
        assert!((h.quadratic(&v) - direct).abs() < 1e-13 * direct.max(1.0));
    }
}

#[test]
fn euclidean_is_hermitian_with_identity() {
    for n in 1..=4 {
        let v = is_hermitian_metric(euclidean_norm, n, DEFAULT_TOLERANCE, 128).unwrap();
        assert!(v.hermitian && v.residual <= 1e-10, "n = {n}: {}", v.residual);
        assert_eq!(v.rank, n * n);
        assert!(v.form.distance(&HermitianForm::identity(n)) < 1e-10);
    }
}

#[test]
fn recovers_synthetic_form() {
    let h0 = HermitianForm::new(DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.3), c(0.0, -0.3), c(2.0, 0.0)],
    ))
    .unwrap();
    let norm = h0.induced_norm();
    let v = is_hermitian_metric(|z: &ComplexVector| norm(z), 2, DEFAULT_TOLERANCE, 200).unwrap();
    assert!(v.hermitian);
    assert!(v.form.distance(&h0) < 1e-8, "{:?}", v.form);
}

#[test]
fn complex_l1_is_not_hermitian() {
    for n in [2, 3] {
        let v = is_hermitian_metric(complex_l1_norm, n, DEFAULT_TOLERANCE, 400).unwrap();
        assert!(!v.hermitian);
        assert!(v.residual > 1e-2, "n = {n}: {}", v.residual);
    }
    // sup norm as well
    let sup = |z: &ComplexVector| z.0.iter().map(|w| w.norm()).fold(0.0, f64::max);
    assert!(!is_hermitian_metric(sup, 2, DEFAULT_TOLERANCE, 400).unwrap().hermitian);
}

#[test]
fn errors() {
    let v = ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]);
    assert!(matches!(projection_area(&v, &v), Err(Error::NotUnit { .. })));
    let sample = ProjectiveSample::halton(3, 8).unwrap();
    assert!(matches!(
        fit_hermitian(|z| z.norm(), &sample),
        Err(Error::RankDeficientSample { expected: 9, .. })
    ));
    // a sample concentrated on one line cannot see the off-diagonal terms
    let e = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
    let flat = ProjectiveSample::new(vec![e; 10], vec![1.0; 10]).unwrap();
    assert!(matches!(
        fit_hermitian(|z| z.norm(), &flat),
        Err(Error::RankDeficientSample { rank: 1, expected: 4 })
    ));
    let squared = |z: &ComplexVector| z.norm().powi(2);
    assert!(matches!(
        is_hermitian_metric(squared, 2, 1e-8, 64),
        Err(Error::NotHomogeneous { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fit_recovers_random_positive_forms(a in prop::collection::vec(-1.0..1.0f64, 9)) {
        // h = BᴴB + I is positive definite
        let b = DMatrix::from_fn(3, 3, |i, j| c(a[3 * i + j], a[(3 * j + i + 1) % 9]));
        let h = HermitianForm::new(b.adjoint() * &b + DMatrix::identity(3, 3)).unwrap();
        let norm = h.induced_norm();
        let v = is_hermitian_metric(|z: &ComplexVector| norm(z), 3, DEFAULT_TOLERANCE, 100).unwrap();
        prop_assert!(v.hermitian);
        prop_assert!(v.form.distance(&h) < 1e-9);
    }

    #[test]
    fn canonical_phase_keeps_the_line(re in prop::collection::vec(-1.0..1.0f64, 3), im in prop::collection::vec(-1.0..1.0f64, 3)) {
        let v = ComplexVector::from_parts(&re, &im).unwrap();
        prop_assume!(v.norm() > 1e-3);
        let w = v.canonical_phase();
        let ratio = w.inner(&v) / v.norm().powi(2);
        prop_assert!((ratio.norm() - 1.0).abs() < 1e-12);
    }
}
