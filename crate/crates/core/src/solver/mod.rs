//! Pseudo-spectral integration of the full nonlinear system.

mod initial;
mod nonlinear;
mod stepper;

pub use initial::{make_initial_data, w_m1_surrogate, InitialDataReport};
pub use nonlinear::{forcing_f1, forcing_f2, nonlinear_term, PRODUCT_PARITY_TOLERANCE};
pub use stepper::{run_trajectory, run_with, step, Scheme, Stepper, StepperConfig, Trajectory};
