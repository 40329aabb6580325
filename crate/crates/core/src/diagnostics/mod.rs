//! Norms, decay-rate fits and energy bookkeeping.

mod energy;
mod fit;
mod ladder;
mod norms;

pub use energy::{energy_report, energy_report_with, EnergyReport};
pub use fit::{fit_rate, log_times, DecayCurve, RateFit, MIN_FIT_SAMPLES};
pub use ladder::{
    check_window, decay_ladder, fit_ladder, ladder_curve, ladder_suite, vorticity_l2_entry, LadderEntry, LadderResult,
    MIN_WINDOW_RATIO,
};
pub use norms::{norm, NormId, NormKind, Weight};
