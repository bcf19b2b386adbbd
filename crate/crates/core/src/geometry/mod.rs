//! Planes in R⁴ ≅ C², the torus action, orbit reduction and the
//! Gluck–Warner sphere coordinates.

mod gluck_warner;
mod plane;
mod quasi_j;
mod torus;

pub use gluck_warner::{gluck_warner, self_dual_split, sphere_pairing, SelfDualSplit, SpherePointPair};
pub use plane::{orthonormalize, pairing, Plane, Vector4, GRAM_TOLERANCE, SUBSPACE_TOLERANCE};
pub use quasi_j::{
    quasi_j_coefficients, quasi_j_decomposition, quasi_j_determinant, quasi_j_vector, reduce_to_orbit, solve_quasi_j,
    solve_quasi_j_coefficients, QuasiJCoefficients, QuasiJDecomposition,
};
pub use torus::{orbit_representative, torus_act, OrbitParams, TorusElement};
