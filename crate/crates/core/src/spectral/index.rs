use serde::Serialize;

/// Where a Legendre index pair sits relative to the reduced cosine transform.
///
/// Even differences `|m − n| ∈ {0, 2}` span the image, even differences of at
/// least 4 the kernel. Odd differences belong to neither family; antipodally
/// even functions have no moments there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexClass {
    Image,
    Kernel,
    OddDifference,
}

pub fn classify_index(m: usize, n: usize) -> IndexClass {
    match m.abs_diff(n) {
        d if d % 2 == 1 => IndexClass::OddDifference,
        0 | 2 => IndexClass::Image,
        _ => IndexClass::Kernel,
    }
}
