use crate::error::Result;
use crate::grid::Parity;
use crate::spectral::{
    derivative_x, derivative_y, poisson_inverse, to_physical, to_spectral_with_tolerance, velocity_from_vorticity,
    PhysicalField, SpectralField,
};
use crate::state::FlowState;

/// Relative size of wall values in a product that counts as a parity
/// violation.
pub const PRODUCT_PARITY_TOLERANCE: f64 = 1e-10;

/// Transport `u . grad g` of an odd field by the velocity `(u1, u2)` given on
/// the nodes, followed by the dealiasing mask.
fn transport(u1: &PhysicalField, u2: &PhysicalField, g: &SpectralField, fraction: f64) -> Result<SpectralField> {
    let gx = to_physical(&derivative_x(g));
    let gy = to_physical(&derivative_y(g));
    let mut prod = u1.product(&gx)?;
    prod.add_assign(&u2.product(&gy)?)?;
    debug_assert_eq!(prod.parity(), Parity::Odd);
    let mut out = to_spectral_with_tolerance(&prod, PRODUCT_PARITY_TOLERANCE)?;
    out.apply_band_limit(fraction);
    Ok(out)
}

/// Dealiased transport terms `(u . grad omega, u . grad theta)`.
///
/// Factors are multiplied on the shared collocation nodes and transformed
/// back; modes with `|j| > fraction nx / 2` or `k > fraction ny` are then
/// zeroed. Even times odd is odd, so both results are sine fields.
pub fn nonlinear_term(state: &FlowState, dealias_fraction: f64) -> Result<(SpectralField, SpectralField)> {
    let (u1, u2) = velocity_from_vorticity(&state.omega)?;
    let u1 = to_physical(&u1);
    let u2 = to_physical(&u2);
    let n_omega = transport(&u1, &u2, &state.omega, dealias_fraction)?;
    let n_theta = transport(&u1, &u2, &state.theta, dealias_fraction)?;
    Ok((n_omega, n_theta))
}

/// Forcing of the vorticity equation written as a heat equation:
/// `f1 = -u . grad omega + d_x theta`, which is what the evolved system
/// implies.
pub fn forcing_f1(state: &FlowState, dealias_fraction: f64) -> Result<SpectralField> {
    let (n_omega, _) = nonlinear_term(state, dealias_fraction)?;
    derivative_x(&state.theta).sub(&n_omega)
}

/// Forcing of the second-order temperature equation,
///
/// ```text
/// f2 = -u_t . grad theta - u . grad theta_t - d_x (-Delta)^{-1} (u . grad omega)
///      + nu Delta (u . grad theta)
/// ```
///
/// with the time derivatives taken from the equations of motion. Exposed for
/// inspection only.
pub fn forcing_f2(state: &FlowState, dealias_fraction: f64) -> Result<SpectralField> {
    let grid = *state.grid();
    let nu = grid.nu();
    let (n_omega, n_theta) = nonlinear_term(state, dealias_fraction)?;
    let (u1, u2) = velocity_from_vorticity(&state.omega)?;

    // omega_t = nu Delta omega + d_x theta - u . grad omega
    let lap_omega = crate::spectral::neg_laplacian(&state.omega).scaled(-nu);
    let omega_t = lap_omega.add(&derivative_x(&state.theta))?.sub(&n_omega)?;
    // theta_t = -u2 - u . grad theta
    let theta_t = u2.scaled(-1.0).sub(&n_theta)?;

    let (ut1, ut2) = velocity_from_vorticity(&omega_t)?;
    let (ut1, ut2) = (to_physical(&ut1), to_physical(&ut2));
    let (u1, u2) = (to_physical(&u1), to_physical(&u2));

    let a = transport(&ut1, &ut2, &state.theta, dealias_fraction)?;
    let b = transport(&u1, &u2, &theta_t, dealias_fraction)?;
    let c = derivative_x(&poisson_inverse(&n_omega)?);
    let d = crate::spectral::neg_laplacian(&n_theta).scaled(-nu);
    a.scaled(-1.0).sub(&b)?.sub(&c)?.add(&d)
}
