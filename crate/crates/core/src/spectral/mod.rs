//! Field representation on the strip and the operators acting on it.

mod field;
mod ops;
mod transform;

pub use field::{PhysicalField, SpectralField};
pub use ops::{curl, derivative_x, derivative_y, divergence, neg_laplacian, poisson_inverse, velocity_from_vorticity};
pub use transform::{to_physical, to_spectral, to_spectral_with_tolerance, PARITY_TOLERANCE};
