//! Spectral toolkit for the two-dimensional Boussinesq system without
//! thermal conduction on the strip `R x (0, 1)`, linearized around the
//! stratified rest state.
//!
//! The perturbation vorticity `omega` and temperature `theta` obey
//!
//! ```text
//! omega_t - nu Delta omega + u . grad omega = d_x theta
//! theta_t + u . grad theta = -u_2
//! ```
//!
//! with slip walls, so both are sine series in `y`. The crate provides the
//! transforms and operators ([`spectral`]), exact per-mode propagators of the
//! linear system ([`propagator`]), continuum-frequency checks
//! ([`frequency`]), a pseudo-spectral solver ([`solver`]) and norms, rate
//! fits and energy bookkeeping ([`diagnostics`]).

// Comparisons are written negated so that NaN fails every guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod frequency;
pub mod grid;
pub mod io;
pub mod ode;
pub mod profile;
pub mod propagator;
pub mod quadrature;
pub mod solver;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use grid::{Parity, StripGrid};
pub use profile::{Component, Profile, ProfileTerm};
pub use spectral::{PhysicalField, SpectralField};
pub use state::FlowState;
