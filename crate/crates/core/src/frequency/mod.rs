//! Checks carried out directly in continuum frequency space.

mod continuum;
mod kernel;
mod nu_star;
mod regions;

pub use continuum::{continuum_linear_decay, QuadratureSpec, XiRule};
pub use kernel::{kernel_cutoff, kernel_decay_integral};
pub use nu_star::{critical_ratio, nu_star, nu_star_grid_search, nu_star_sq, NuStarSearch};
pub use regions::{
    bound_times, classify_lattice, envelopes, region_intervals, region_nonempty, sup_region_ratio,
    verify_symbol_bounds, BoundOutcome, SymbolBoundReport, BOUND_K_MAX, BOUND_QUANTITIES, BOUND_XI_MAX,
};
