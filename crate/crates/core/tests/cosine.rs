use std::f64::consts::{PI, TAU};

use gcos_core::cosine::*;
use gcos_core::geometry::{orbit_representative, pairing, torus_act, OrbitParams, TorusElement};
use gcos_core::spectral::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORDER: usize = 64;

/// `(1/(8π²)) ∫∫ |d + a cos s + b cos t| ds dt` by nested Gauss rules split
/// at the zeros in `t` and at the kinks in `s`.
fn kernel_oracle(x: f64, y: f64, xp: f64, yp: f64) -> f64 {
    let side = |h: f64| (1.0 - h * h).max(0.0).sqrt();
    let (d, a, b) = (x * xp + y * yp, side(x) * side(xp), side(y) * side(yp));
    let rule = gauss_legendre(48);
    let inner = |s: f64| {
        let m = d + a * s.cos();
        if b <= m.abs() {
            return TAU * m.abs();
        }
        let z = (-m / b).acos();
        rule.integrate_split(0.0, TAU, &[z, TAU - z], |t| (m + b * t.cos()).abs())
    };
    let mut breaks = vec![PI];
    if a > 0.0 {
        for c in [(b - d) / a, (-b - d) / a] {
            if c.abs() < 1.0 {
                breaks.extend([c.acos(), TAU - c.acos()]);
            }
        }
    }
    rule.integrate_split(0.0, TAU, &breaks, inner) / (8.0 * PI * PI)
}

/// An orbit with heights `(x, y)`, `x ≥ 0`.
fn orbit_at(x: f64, y: f64) -> OrbitParams {
    let theta = x.acos();
    let top = y.acos();
    let psi = if top >= theta {
        0.5 * (top - theta)
    } else {
        0.5 * (TAU - top - theta)
    };
    OrbitParams::new(theta, psi).unwrap()
}

fn coarse_torus_average(o: OrbitParams, op: OrbitParams, n: usize) -> f64 {
    let (p, q) = (orbit_representative(o), orbit_representative(op));
    let h = TAU / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let g = TorusElement::new((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            acc += pairing(&p, &torus_act(g, &q)).unwrap();
        }
    }
    acc / (n * n) as f64
}

#[test]
fn kernel_matches_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (x, xp) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let (y, yp) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let k = reduced_kernel(x, y, xp, yp);
        let o = kernel_oracle(x, y, xp, yp);
        assert!((k - o).abs() < 1e-8, "{k} vs {o}");
        assert!((k - reduced_kernel(xp, yp, x, y)).abs() < 1e-15);
        assert!((k - reduced_kernel(-x, -y, xp, yp)).abs() < 1e-13);
    }
    // the torus average of the plane pairing itself, midpoint rule
    for &(x, y, xp, yp) in &[(0.3, 0.1, 0.8, -0.4), (0.9, 0.85, 0.2, 0.6)] {
        let avg = coarse_torus_average(orbit_at(x, y), orbit_at(xp, yp), 400);
        assert!((avg - reduced_kernel(x, y, xp, yp)).abs() < 1e-4);
    }
}

#[test]
fn kernel_table_invariants() {
    let t = cached_table(ORDER);
    assert_eq!(t.symmetry_defect(), 0.0);
    let (lo, hi) = t.min_max();
    assert!(lo >= 0.0 && hi <= 1.0);
}

#[test]
fn constant_maps_to_constant() {
    let img = apply_cosine(&TorusInvariantFunction::constant(1.0), ORDER);
    let vals: Vec<f64> = scatter_points(10).into_iter().map(|(x, y)| img.eval(x, y)).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    for v in &vals {
        assert!((v - mean).abs() <= 1e-6, "{v} vs {mean}");
    }
    assert!((mean - 1.0 / 3.0).abs() < 1e-6);
}

#[test]
fn annihilation_and_image() {
    let op = CosineOperator::new(ORDER);
    let mut largest_annihilated: f64 = 0.0;
    for (m, n) in [(4, 0), (0, 4), (6, 2), (2, 6), (6, 0), (5, 1), (8, 4)] {
        let c = annihilation_check(&op, m, n, 1e-3);
        assert!(c.pass && c.norm <= 1e-6, "{c:?}");
        largest_annihilated = largest_annihilated.max(c.norm);
    }
    let c = annihilation_check(&op, 2, 0, 1e-2);
    assert!(c.pass, "{c:?}");
    // image norms decay with degree, but stay far above the annihilated ones
    for (m, n) in [(2, 2), (4, 2), (1, 1), (3, 1), (6, 4)] {
        let norm = op.apply(&TorusInvariantFunction::legendre_product(m, n)).sup_norm();
        assert!(norm > 100.0 * largest_annihilated, "({m},{n}) {norm}");
    }
}

#[test]
fn image_moments_stay_on_image_indices() {
    let op = CosineOperator::new(ORDER);
    for (m, n) in [(0, 0), (2, 0), (2, 2), (4, 2), (4, 4)] {
        let mom = op.apply(&TorusInvariantFunction::legendre_product(m, n)).moments(10);
        let scale = mom.max_abs();
        let leak = kernel_projection(&mom).max_abs();
        assert!(leak <= 1e-4 * scale, "({m},{n}): {leak} vs {scale}");
    }
}

fn image_block(op: &CosineOperator, degree: usize) -> (DMatrix<f64>, Vec<f64>) {
    let m = op.moment_operator(degree);
    let d1 = degree + 1;
    let idx: Vec<usize> = (0..d1 * d1)
        .filter(|&r| classify_index(r / d1, r % d1) == IndexClass::Image)
        .collect();
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
    let mut ev: Vec<f64> = sub.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    (m, ev)
}

#[test]
fn moment_operator_symmetric_injective_indefinite() {
    let (m, ev) = image_block(&CosineOperator::new(ORDER), 8);
    assert!((&m - m.transpose()).amax() <= 1e-10 * m.amax());
    // injective on the image block
    assert!(ev.iter().all(|v| v.abs() > 1e-7), "{ev:?}");
    // and indefinite, stably under refinement
    assert!(ev[0] < -3e-4);
    let (_, coarse) = image_block(&CosineOperator::new(48), 8);
    for (a, b) in ev.iter().zip(&coarse) {
        assert!((a - b).abs() <= 1e-4 * a.abs() + 1e-9, "{a} vs {b}");
    }
}

#[test]
fn delta_image_pattern() {
    let c = delta_torus_coefficients(5, 5);
    let img = image_projection(&c);
    for (m, n, v) in img.iter() {
        let expect_nonzero = m % 2 == 0 && n % 2 == 0 && (m / 2).abs_diff(n / 2) <= 1;
        assert_eq!(v != 0.0, expect_nonzero, "({m},{n})");
        if expect_nonzero {
            assert_eq!(v, c.get(m, n));
        }
    }
}

#[test]
fn positivity_and_linearity() {
    let op = CosineOperator::new(32);
    let f = TorusInvariantFunction::new("bump", |x, y| (-(x * x + y * y)).exp());
    let g = TorusInvariantFunction::legendre_product(2, 0);
    let cf = op.apply(&f);
    assert!(cf.values().iter().all(|&v| v > 0.0));
    let h = TorusInvariantFunction::new("f+2g", |x, y| (-(x * x + y * y)).exp() + 2.0 * legendre_eval(2, x));
    let ch = op.apply(&h);
    let cg = op.apply(&g);
    for ((a, b), c) in ch.values().iter().zip(cf.values()).zip(cg.values()) {
        assert!((a - b - 2.0 * c).abs() < 1e-13);
    }
}

fn poly_from(coeffs: Vec<f64>) -> TorusInvariantFunction {
    // even total degree so the function is antipodally even
    TorusInvariantFunction::new("poly", move |x, y| {
        let px = legendre_all(6, x);
        let py = legendre_all(6, y);
        let mut acc = 0.0;
        let mut k = 0;
        for m in 0..=6 {
            for n in 0..=6 {
                if (m + n) % 2 == 0 {
                    acc += coeffs[k] * px[m] * py[n];
                    k += 1;
                }
            }
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn self_adjoint_on_random_polynomials(
        a in prop::collection::vec(-1.0..1.0f64, 25),
        b in prop::collection::vec(-1.0..1.0f64, 25),
    ) {
        let (f, g) = (poly_from(a), poly_from(b));
        let defect = self_adjointness_defect(&f, &g, ORDER);
        let scale = grid_norm(&f, ORDER) * grid_norm(&g, ORDER);
        prop_assert!(defect <= 1e-10 * scale, "{} vs {}", defect, scale);
        prop_assert!(f.check_antipodal(1e-10).is_ok());
    }
}
