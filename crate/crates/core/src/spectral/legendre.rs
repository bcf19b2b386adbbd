//! Legendre polynomials `p_n` on `[-1, 1]`, normalized so that `p_n(1) = 1`.

/// Evaluates `p_n(x)` by the three-term recurrence
/// `(k+1) p_{k+1} = (2k+1) x p_k - k p_{k-1}`.
pub fn legendre_eval(n: usize, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for k in 1..n {
                let kf = k as f64;
                let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// All of `p_0(x), ..., p_n(x)` in one pass.
pub fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `(p_n(x), p_n'(x))`. The derivative uses `(x^2 - 1) p_n' = n (x p_n - p_{n-1})`
/// and is only meaningful for `|x| < 1`.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let d = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, d)
}

/// `‖p_n‖² = ∫ p_n² = 2 / (2n + 1)`.
pub fn legendre_norm_sq(n: usize) -> f64 {
    2.0 / (2.0 * n as f64 + 1.0)
}

/// Generalized binomial coefficient `binom(-1/2, k)`, which equals `p_{2k}(0)`.
pub fn binom_neg_half(k: usize) -> f64 {
    let mut c = 1.0;
    for j in 0..k {
        c *= (-0.5 - j as f64) / (j as f64 + 1.0);
    }
    c
}
