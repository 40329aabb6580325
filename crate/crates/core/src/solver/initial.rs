use num_complex::Complex64;

use crate::diagnostics::{norm, NormId, NormKind, Weight};
use crate::error::Result;
use crate::grid::{Parity, StripGrid};
use crate::profile::{Component, Profile};
use crate::spectral::{derivative_x, derivative_y, to_physical, SpectralField};
use crate::state::FlowState;

/// Size of initial data in the norms entering the smallness hypothesis.
/// `W^{m,1}` values are surrogates: node quadratures of `|d^a f|` summed
/// over all derivatives of order up to `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialDataReport {
    pub theta_w81: f64,
    pub theta_w51: f64,
    pub omega_w51: f64,
    pub theta_l2: f64,
    pub omega_l2: f64,
    pub theta_h4: f64,
}

/// Surrogate of `||f||_{W^{m,1}}`: sum over `a + b <= m` of the node
/// quadrature of `|d_x^a d_y^b f|`.
pub fn w_m1_surrogate(f: &SpectralField, m: usize) -> f64 {
    let mut total = 0.0;
    let mut dy = f.clone();
    for b in 0..=m {
        let mut d = dy.clone();
        for a in 0..=(m - b) {
            total += to_physical(&d).quadrature(f64::abs);
            if a < m - b {
                d = derivative_x(&d);
            }
        }
        if b < m {
            dy = derivative_y(&dy);
        }
    }
    total
}

fn sample(profile: &Profile, component: Component, grid: StripGrid) -> SpectralField {
    let mut f = SpectralField::from_fn(grid, Parity::Odd, |_, xi, k| {
        Complex64::new(profile.value(component, xi, k), 0.0)
    });
    f.apply_band_limit(profile.band_fraction);
    f.enforce_hermitian();
    f
}

/// Samples the profile on the grid as sine fields at `t = 0`, so every
/// even-order `y` derivative vanishes on the walls.
pub fn make_initial_data(profile: &Profile, grid: StripGrid) -> Result<(FlowState, InitialDataReport)> {
    profile.validate()?;
    let omega = sample(profile, Component::Omega, grid);
    let theta = sample(profile, Component::Theta, grid);
    let report = InitialDataReport {
        theta_w81: w_m1_surrogate(&theta, 8),
        theta_w51: w_m1_surrogate(&theta, 5),
        omega_w51: w_m1_surrogate(&omega, 5),
        theta_l2: norm(&theta, NormId::new(NormKind::L2Hat, Weight::One)),
        omega_l2: norm(&omega, NormId::new(NormKind::L2Hat, Weight::One)),
        theta_h4: norm(&theta, NormId::new(NormKind::Hm(4), Weight::One)),
    };
    Ok((FlowState::new(0.0, omega, theta)?, report))
}
