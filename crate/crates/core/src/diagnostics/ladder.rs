use super::fit::{fit_rate, DecayCurve, RateFit};
use super::norms::{norm, NormId, NormKind, Weight};
use crate::error::{Error, Result};
use crate::profile::Component;
use crate::state::FlowState;

/// A fit window must span at least this ratio `t_max / t_min`.
pub const MIN_WINDOW_RATIO: f64 = 10.0;

/// One decaying quantity and its predicted algebraic rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderEntry {
    pub component: Component,
    pub norm: NormId,
    pub expected: f64,
}

impl LadderEntry {
    pub const fn new(component: Component, kind: NormKind, weight: Weight, expected: f64) -> Self {
        LadderEntry {
            component,
            norm: NormId::new(kind, weight),
            expected,
        }
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.component.name(), self.norm)
    }
}

/// The nine decay rates of small solutions. Maximum norms are
/// represented by their `L1Hat` majorants.
pub fn decay_ladder() -> Vec<LadderEntry> {
    use Component::{Omega, Theta};
    use NormKind::{Hm, L1Hat, L2Hat};
    vec![
        LadderEntry::new(Theta, Hm(4), Weight::One, -0.25),
        LadderEntry::new(Omega, Hm(2), Weight::One, -0.75),
        LadderEntry::new(Theta, Hm(2), Weight::Xi, -0.75),
        LadderEntry::new(Omega, L2Hat, Weight::Xi, -1.25),
        LadderEntry::new(Theta, L2Hat, Weight::Xi2, -1.25),
        LadderEntry::new(Theta, L1Hat, Weight::One, -0.5),
        LadderEntry::new(Theta, L1Hat, Weight::KPi, -0.5),
        LadderEntry::new(Theta, L1Hat, Weight::Xi, -1.0),
        LadderEntry::new(Omega, L1Hat, Weight::One, -1.0),
    ]
}

/// The `L^2` rate of the linear vorticity, `-3/4`.
pub fn vorticity_l2_entry() -> LadderEntry {
    LadderEntry::new(Component::Omega, NormKind::L2Hat, Weight::One, -0.75)
}

/// A ladder quantity with its sampled curve and fitted rate.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderResult {
    pub entry: LadderEntry,
    pub curve: DecayCurve,
    pub fit: RateFit,
}

impl LadderResult {
    pub fn deviation(&self) -> f64 {
        (self.fit.exponent - self.entry.expected).abs()
    }
}

pub fn check_window(window: (f64, f64)) -> Result<()> {
    let (t_min, t_max) = window;
    if !(t_min > 0.0 && t_max >= MIN_WINDOW_RATIO * t_min) {
        return Err(Error::WindowTooShort {
            t_min,
            t_max,
            required_ratio: MIN_WINDOW_RATIO,
        });
    }
    Ok(())
}

/// Curve of one ladder quantity over a trajectory.
pub fn ladder_curve(traj: &[FlowState], entry: &LadderEntry) -> Result<DecayCurve> {
    let values = traj
        .iter()
        .map(|s| {
            let f = match entry.component {
                Component::Omega => &s.omega,
                Component::Theta => &s.theta,
            };
            norm(f, entry.norm)
        })
        .collect();
    DecayCurve::new(entry.label(), traj.iter().map(|s| s.t).collect(), values)
}

/// Fits precomputed curves, one per entry.
pub fn fit_ladder(entries: &[LadderEntry], curves: Vec<DecayCurve>, window: (f64, f64)) -> Result<Vec<LadderResult>> {
    check_window(window)?;
    entries
        .iter()
        .zip(curves)
        .map(|(entry, curve)| {
            let fit = fit_rate(&curve, window)?;
            Ok(LadderResult {
                entry: *entry,
                curve,
                fit,
            })
        })
        .collect()
}

/// Samples and fits every quantity of [`decay_ladder`] over a trajectory.
pub fn ladder_suite(traj: &[FlowState], window: (f64, f64)) -> Result<Vec<LadderResult>> {
    check_window(window)?;
    let entries = decay_ladder();
    let curves = entries
        .iter()
        .map(|e| ladder_curve(traj, e))
        .collect::<Result<Vec<_>>>()?;
    fit_ladder(&entries, curves, window)
}
