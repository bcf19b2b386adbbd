//! Deterministic low-discrepancy points.

/// The first primes, used as Halton bases.
pub const HALTON_BASES: [usize; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131,
];

/// Van der Corput radical inverse of `i` in `base`, in `[0, 1)`.
pub fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += scale * (i % base) as f64;
        i /= base;
        scale *= inv;
    }
    acc
}

/// The `i`-th Halton point in `dims ≤ 32` dimensions. Points with `i ≥ 1`
/// lie in the open unit cube.
pub fn halton_point(i: usize, dims: usize) -> Vec<f64> {
    assert!(
        dims <= HALTON_BASES.len(),
        "at most {} Halton dimensions",
        HALTON_BASES.len()
    );
    HALTON_BASES[..dims].iter().map(|&b| radical_inverse(i, b)).collect()
}
