//! Differential operators, Dirichlet Poisson inversion and the velocity.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::SpectralField;
use crate::error::Result;
use crate::grid::Parity;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `d/dx`: multiplies by `i xi`.
pub fn derivative_x(f: &SpectralField) -> SpectralField {
    f.map_symbol(|xi, _| I * xi)
}

/// `d/dy`: sine rows map to cosine rows with factor `+k pi`, cosine rows to
/// sine rows with factor `-k pi`. The cosine row `k = ny` has no sine
/// counterpart on the grid and is dropped.
pub fn derivative_y(f: &SpectralField) -> SpectralField {
    let grid = *f.grid();
    let parity = f.parity().flipped();
    let factor = match f.parity() {
        Parity::Odd => PI,
        Parity::Even => -PI,
    };
    let mut coeff = f.coeff().to_vec();
    let nx = grid.nx();
    for k in 0..grid.rows() {
        let keep = grid.row_active(parity, k);
        for c in &mut coeff[k * nx..(k + 1) * nx] {
            *c = if keep {
                *c * (factor * k as f64)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
    }
    SpectralField::from_raw(grid, parity, coeff)
}

/// `(-Delta)^{-1}` with homogeneous Dirichlet conditions on both walls.
pub fn poisson_inverse(f: &SpectralField) -> Result<SpectralField> {
    f.ensure_parity(Parity::Odd)?;
    Ok(f.map_symbol(|xi, k| Complex64::new(1.0 / (xi * xi + PI * PI * (k * k) as f64), 0.0)))
}

/// `-Delta`, the inverse of [`poisson_inverse`].
pub fn neg_laplacian(f: &SpectralField) -> SpectralField {
    f.map_symbol(|xi, k| Complex64::new(xi * xi + PI * PI * (k * k) as f64, 0.0))
}

/// Velocity `u = (d_y psi, -d_x psi)` with `psi = (-Delta)^{-1} omega`.
/// Returns `(u1, u2)` with `u1` even and `u2` odd.
pub fn velocity_from_vorticity(omega: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let psi = poisson_inverse(omega)?;
    let u1 = derivative_y(&psi);
    let u2 = derivative_x(&psi).scaled(-1.0);
    Ok((u1, u2))
}

/// Scalar curl `d_x u2 - d_y u1`.
pub fn curl(u1: &SpectralField, u2: &SpectralField) -> Result<SpectralField> {
    derivative_x(u2).sub(&derivative_y(u1))
}

/// Divergence `d_x u1 + d_y u2`.
pub fn divergence(u1: &SpectralField, u2: &SpectralField) -> Result<SpectralField> {
    derivative_x(u1).add(&derivative_y(u2))
}
