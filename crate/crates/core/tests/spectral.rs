use gcos_core::spectral::*;
use proptest::prelude::*;

/// Monomial coefficients of `p_n` from Bonnet's recurrence.
fn legendre_coeffs(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += (2 * k + 1) as f64 * c / (k + 1) as f64;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= k as f64 * c / (k + 1) as f64;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn antiderivative(a: &[f64]) -> Vec<f64> {
    std::iter::once(0.0)
        .chain(a.iter().enumerate().map(|(i, c)| c / (i + 1) as f64))
        .collect()
}

fn eval(a: &[f64], x: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Polynomial `q(x)` composed with `x ↦ s·x` for a scalar `s`.
fn scale_arg(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().enumerate().map(|(i, c)| c * s.powi(i as i32)).collect()
}

/// `∫∫ max(|x|, |y|) p_m(x) p_n(y)` over the square, exactly on the triangles
/// `0 ≤ y ≤ x ≤ 1` and `0 ≤ x ≤ y ≤ 1`.
fn max_moment(m: usize, n: usize) -> f64 {
    if m % 2 == 1 || n % 2 == 1 {
        return 0.0;
    }
    // T(m, n) = ∫₀¹ x p_m(x) ∫₀ˣ p_n(y) dy dx
    let t = |m: usize, n: usize| {
        let inner = antiderivative(&legendre_coeffs(n)); // vanishes at 0
        let integrand = mul(&mul(&[0.0, 1.0], &legendre_coeffs(m)), &inner);
        eval(&antiderivative(&integrand), 1.0)
    };
    4.0 * (t(m, n) + t(n, m))
}

/// `∫∫ |x + y| p_m(x) p_n(y)` over the square, exactly on `x + y ≥ 0`
/// (and its reflection, which contributes the same for `m + n` even).
fn abs_sum_moment(m: usize, n: usize) -> f64 {
    if (m + n) % 2 == 1 {
        return 0.0;
    }
    // inner(x) = ∫_{-x}^{1} (x + y) p_n(y) dy
    let pn = legendre_coeffs(n);
    let y_pn = mul(&[0.0, 1.0], &pn);
    let a_pn = antiderivative(&pn);
    let a_ypn = antiderivative(&y_pn);
    let upper_a = eval(&a_pn, 1.0);
    let upper_b = eval(&a_ypn, 1.0);
    // x·(A(1) − A(−x)) + (B(1) − B(−x))
    let a_neg = scale_arg(&a_pn, -1.0);
    let b_neg = scale_arg(&a_ypn, -1.0);
    let mut first: Vec<f64> = a_neg.iter().map(|c| -c).collect();
    first[0] += upper_a;
    let mut inner = mul(&[0.0, 1.0], &first);
    let mut second: Vec<f64> = b_neg.iter().map(|c| -c).collect();
    second[0] += upper_b;
    if inner.len() < second.len() {
        inner.resize(second.len(), 0.0);
    }
    for (i, c) in second.iter().enumerate() {
        inner[i] += c;
    }
    let total = antiderivative(&mul(&legendre_coeffs(m), &inner));
    2.0 * (eval(&total, 1.0) - eval(&total, -1.0))
}

fn split_rule() -> QuadratureRule {
    gauss_legendre(DEFAULT_ORDER)
}

#[test]
fn quadrature_examples() {
    let one = gauss_legendre(1);
    assert_eq!((one.nodes[0], one.weights[0]), (0.0, 2.0));
    let two = gauss_legendre(2);
    assert!((two.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!((two.weights[0] - 1.0).abs() < 1e-15);
    let r = gauss_legendre(64);
    assert!((r.integrate(|x| x.powi(10)) - 2.0 / 11.0).abs() < 1e-14);
}

#[test]
fn oracle_reproduces_known_values() {
    assert!((max_moment(0, 0) - 8.0 / 3.0).abs() < 1e-14);
    assert!((abs_sum_moment(0, 0) - 8.0 / 3.0).abs() < 1e-14);
}

#[test]
fn max_moments_match_expansion_values() {
    let mom = moments_2d(|x: f64, y: f64| x.abs().max(y.abs()), 12, &split_rule(), true);
    let listed = [
        (0, 0, 8.0 / 3.0),
        (2, 0, 4.0 / 15.0),
        (0, 2, 4.0 / 15.0),
        (2, 2, -8.0 / 105.0),
        (2, 4, 4.0 / 315.0),
        (4, 2, 4.0 / 315.0),
        (4, 4, -8.0 / 693.0),
    ];
    for (m, n, v) in listed {
        assert!((mom.get(m, n) - v).abs() < 1e-9, "({m},{n}) {} vs {v}", mom.get(m, n));
    }
    for (m, n, v) in mom.iter() {
        assert!(
            (v - max_moment(m, n)).abs() < 1e-10,
            "({m},{n}) {v} vs {}",
            max_moment(m, n)
        );
    }
}

#[test]
fn abs_sum_vanishing_pattern() {
    let mom = moments_2d(|x: f64, y: f64| (x + y).abs(), 12, &split_rule(), true);
    for (m, n, v) in mom.iter() {
        let exact = abs_sum_moment(m, n);
        assert!((v - exact).abs() < 1e-10, "({m},{n}) {v} vs {exact}");
        if m % 2 == 0 && n % 2 == 0 {
            if m.abs_diff(n) >= 4 {
                assert!(exact.abs() < 1e-12, "({m},{n}) {exact}");
            } else {
                assert!(exact.abs() > 1e-4, "({m},{n}) {exact}");
            }
        }
    }
    // the listed expansion values of max(|x|, |y|) reappear here
    assert!((abs_sum_moment(2, 2) + 8.0 / 105.0).abs() < 1e-14);
    assert!((abs_sum_moment(2, 0) - 4.0 / 15.0).abs() < 1e-14);
}

#[test]
fn delta_coefficients() {
    let c = delta_torus_coefficients(5, 5);
    for k in 0..=5 {
        for l in 0..=5 {
            let expect =
                legendre_eval(2 * k, 0.0) * legendre_eval(2 * l, 0.0) * ((4 * k + 1) * (4 * l + 1)) as f64 / 4.0;
            assert!((c.get(2 * k, 2 * l) - expect).abs() <= 1e-14 * expect.abs().max(1.0));
            if k < 5 {
                assert_eq!(c.get(2 * k + 1, 2 * l), 0.0);
            }
        }
    }
    assert!((legendre_eval(4, 0.0) - 3.0 / 8.0).abs() < 1e-16);
}

#[test]
fn csv_layout() {
    let m = MomentMatrix::single(2, MomentKind::Raw, 1, 2, 0.5);
    let csv = m.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,0,1,2");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("1,"));
    assert!(lines[2].ends_with("5.00000000000000000e-1"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn coefficient_round_trip(coeffs in prop::collection::vec(-1.0..1.0f64, 25)) {
        let c = MomentMatrix::from_fn(4, MomentKind::Normalized, |m, n| coeffs[m * 5 + n]);
        let rule = gauss_legendre(16);
        let raw = moments_2d(|x, y| c.evaluate_series(x, y), 4, &rule, false);
        let back = raw.to_normalized();
        for (m, n, v) in back.iter() {
            prop_assert!((v - c.get(m, n)).abs() < 1e-10);
        }
    }

    #[test]
    fn parity_kills_odd_moments(a in -1.0..1.0f64, b in -1.0..1.0f64) {
        let f = move |x: f64, y: f64| (a * x + b * y).abs() + (x * y).cos();
        let mom = moments_2d(f, 5, &gauss_legendre(24), true);
        for (m, n, v) in mom.iter() {
            if (m + n) % 2 == 1 {
                prop_assert!(v.abs() < 1e-13);
            }
        }
    }
}
