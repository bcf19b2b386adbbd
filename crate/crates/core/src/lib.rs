//! Numerical tools for the absolute-value cosine transform on the
//! Grassmannian of real 2-planes in C², reduced by the U(1) × U(1) action.

pub mod cosine;
pub mod error;
pub mod fredholm;
pub mod geometry;
pub mod hermitian;
pub mod klain;
pub mod sampling;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
