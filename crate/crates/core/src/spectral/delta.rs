use super::legendre::binom_neg_half;
use super::moments::{MomentKind, MomentMatrix};

/// Legendre coefficients of `δ(x)δ(y)` truncated at `p_{2K}(x) p_{2L}(y)`:
/// `c_{2k,2l} = (4k+1)(4l+1)/4 · binom(-1/2,k) · binom(-1/2,l)`, odd rows and
/// columns zero. The returned matrix has degree `2·max(K, L)` and
/// [`MomentKind::Normalized`] entries.
pub fn delta_torus_coefficients(max_k: usize, max_l: usize) -> MomentMatrix {
    let degree = 2 * max_k.max(max_l);
    let mut out = MomentMatrix::zeros(degree, MomentKind::Normalized);
    for k in 0..=max_k {
        for l in 0..=max_l {
            let c = (4 * k + 1) as f64 * (4 * l + 1) as f64 / 4.0 * binom_neg_half(k) * binom_neg_half(l);
            out.set(2 * k, 2 * l, c);
        }
    }
    out
}
