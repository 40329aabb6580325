use crate::error::{Error, Result};
use crate::grid::{Parity, StripGrid};
use crate::spectral::SpectralField;

/// Vorticity and temperature perturbations at time `t`.
///
/// Both fields are sine series on a shared grid, which is what makes the
/// walls slip and vorticity free.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub omega: SpectralField,
    pub theta: SpectralField,
}

impl FlowState {
    pub fn new(t: f64, omega: SpectralField, theta: SpectralField) -> Result<Self> {
        omega.ensure_parity(Parity::Odd)?;
        theta.ensure_parity(Parity::Odd)?;
        omega.ensure_same_grid(&theta)?;
        if !t.is_finite() {
            return Err(Error::invalid(format!("state time must be finite, got {t}")));
        }
        Ok(FlowState { t, omega, theta })
    }

    pub fn zeros(grid: StripGrid, t: f64) -> Self {
        FlowState {
            t,
            omega: SpectralField::zeros(grid, Parity::Odd),
            theta: SpectralField::zeros(grid, Parity::Odd),
        }
    }

    pub fn grid(&self) -> &StripGrid {
        self.omega.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.omega.is_finite() && self.theta.is_finite()
    }

    /// `L^2` distance `sqrt(||d omega||^2 + ||d theta||^2)` between two states.
    pub fn l2_distance(&self, other: &FlowState) -> Result<f64> {
        let dw = self.omega.sub(&other.omega)?;
        let dt = self.theta.sub(&other.theta)?;
        Ok((dw.l2_norm_sq() + dt.l2_norm_sq()).sqrt())
    }

    pub fn l2_norm(&self) -> f64 {
        (self.omega.l2_norm_sq() + self.theta.l2_norm_sq()).sqrt()
    }
}
