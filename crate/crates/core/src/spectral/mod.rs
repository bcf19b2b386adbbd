//! Legendre polynomials, Gauss–Legendre rules and 2-D Legendre moments.

mod delta;
mod index;
mod legendre;
mod moments;
mod quadrature;

pub use delta::delta_torus_coefficients;
pub use index::{classify_index, IndexClass};
pub use legendre::{binom_neg_half, legendre_all, legendre_eval, legendre_norm_sq, legendre_with_derivative};
pub use moments::{moments_2d, square_points, MomentKind, MomentMatrix};
pub use quadrature::{gauss_legendre, gauss_legendre_cached, QuadratureRule};

/// Default Gauss–Legendre order per axis per cell.
pub const DEFAULT_ORDER: usize = 64;
