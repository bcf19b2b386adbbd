use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Spanning vectors of a plane are (numerically) linearly dependent.
    #[error("degenerate plane: Gram determinant {gram:e} below threshold")]
    DegeneratePlane { gram: f64 },

    /// The Nyström matrix `λI − KW` is singular and the right-hand side violates
    /// the solvability condition. `inner_product` is the quadrature value of
    /// `∫ψ f` for the computed adjoint null vector `ψ` (unit L² norm).
    #[error("singular second-kind system (condition {condition:e}); <psi, f> = {inner_product:e}")]
    SingularSystem { condition: f64, inner_product: f64 },

    #[error("norm is not 1-homogeneous: f(t v) = {scaled} but t f(v) = {expected} at t = {scale}")]
    NotHomogeneous { scale: f64, scaled: f64, expected: f64 },

    #[error("vector is not unit: |e| = {norm}")]
    NotUnit { norm: f64 },

    #[error("moment system has rank {rank}, expected {expected}")]
    RankDeficientSample { rank: usize, expected: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
