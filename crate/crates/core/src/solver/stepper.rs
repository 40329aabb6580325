use num_complex::Complex64;

use super::nonlinear::nonlinear_term;
use crate::error::{Error, Result};
use crate::grid::StripGrid;
use crate::propagator::LinearPairPropagator;
use crate::spectral::{to_physical, velocity_from_vorticity};
use crate::state::FlowState;

/// Explicit rule used for the nonlinear substep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Explicit midpoint rule.
    StrangRk2,
    /// Classical four-stage Runge-Kutta.
    StrangRk4,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::StrangRk2 => "strang-rk2",
            Scheme::StrangRk4 => "strang-rk4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "strang-rk2" => Some(Scheme::StrangRk2),
            "strang-rk4" => Some(Scheme::StrangRk4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub cfl_safety: f64,
    pub dealias_fraction: f64,
    pub scheme: Scheme,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            dt: 0.5,
            cfl_safety: 0.5,
            dealias_fraction: 2.0 / 3.0,
            scheme: Scheme::StrangRk2,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::invalid(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::invalid(format!(
                "dealias_fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            )));
        }
        Ok(())
    }
}

/// Strang splitting: exact linear half step, explicit nonlinear step, exact
/// linear half step. The half-step exponential is computed once.
#[derive(Debug, Clone)]
pub struct Stepper {
    cfg: StepperConfig,
    half: LinearPairPropagator,
}

impl Stepper {
    pub fn new(grid: StripGrid, cfg: StepperConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Stepper {
            cfg,
            half: LinearPairPropagator::new(grid, 0.5 * cfg.dt)?,
        })
    }

    pub fn config(&self) -> &StepperConfig {
        &self.cfg
    }

    /// Largest step allowed by `dt <= cfl dx / max|u1|` and the same in `y`;
    /// infinite for a fluid at rest.
    pub fn admissible_dt(&self, state: &FlowState) -> Result<f64> {
        let (u1, u2) = velocity_from_vorticity(&state.omega)?;
        let m1 = to_physical(&u1).max_abs();
        let m2 = to_physical(&u2).max_abs();
        let g = state.grid();
        let limit = |d: f64, m: f64| if m > 0.0 { d / m } else { f64::INFINITY };
        Ok(self.cfg.cfl_safety * limit(g.dx(), m1).min(limit(g.dy(), m2)))
    }

    /// `d/dt (omega, theta) = -(N_omega, N_theta)`, returned as a state with
    /// the time stamp of the input.
    fn rhs(&self, s: &FlowState) -> Result<FlowState> {
        let (nw, nq) = nonlinear_term(s, self.cfg.dealias_fraction)?;
        Ok(FlowState {
            t: s.t,
            omega: nw.scaled(-1.0),
            theta: nq.scaled(-1.0),
        })
    }

    fn combine(base: &FlowState, parts: &[(f64, &FlowState)]) -> Result<FlowState> {
        let mut out = base.clone();
        for (a, p) in parts {
            out.omega.axpy(Complex64::new(*a, 0.0), &p.omega)?;
            out.theta.axpy(Complex64::new(*a, 0.0), &p.theta)?;
        }
        Ok(out)
    }

    fn nonlinear_substep(&self, s: &FlowState) -> Result<FlowState> {
        let h = self.cfg.dt;
        match self.cfg.scheme {
            Scheme::StrangRk2 => {
                let k1 = self.rhs(s)?;
                let mid = Self::combine(s, &[(0.5 * h, &k1)])?;
                let k2 = self.rhs(&mid)?;
                Self::combine(s, &[(h, &k2)])
            }
            Scheme::StrangRk4 => {
                let k1 = self.rhs(s)?;
                let k2 = self.rhs(&Self::combine(s, &[(0.5 * h, &k1)])?)?;
                let k3 = self.rhs(&Self::combine(s, &[(0.5 * h, &k2)])?)?;
                let k4 = self.rhs(&Self::combine(s, &[(h, &k3)])?)?;
                Self::combine(s, &[(h / 6.0, &k1), (h / 3.0, &k2), (h / 3.0, &k3), (h / 6.0, &k4)])
            }
        }
    }

    /// Advances `state` by one step of size `dt`.
    pub fn step(&self, state: &FlowState) -> Result<FlowState> {
        if *state.grid() != *self.half.grid() {
            return Err(Error::GridMismatch);
        }
        let admissible = self.admissible_dt(state)?;
        if self.cfg.dt > admissible {
            return Err(Error::CflViolation {
                dt: self.cfg.dt,
                admissible,
            });
        }
        let a = self.half.apply(state)?;
        let mut b = self.nonlinear_substep(&a)?;
        b.omega.enforce_hermitian();
        b.theta.enforce_hermitian();
        let mut c = self.half.apply(&b)?;
        c.t = state.t + self.cfg.dt;
        for f in [&c.omega, &c.theta] {
            if let Some((j, k)) = f.first_non_finite() {
                return Err(Error::NonFinite { j, k, t: c.t });
            }
        }
        Ok(c)
    }
}

/// One step with a freshly built [`Stepper`].
pub fn step(state: &FlowState, cfg: &StepperConfig) -> Result<FlowState> {
    Stepper::new(*state.grid(), *cfg)?.step(state)
}

/// Snapshots of a run, plus the error that stopped it early, if any.
#[derive(Debug)]
pub struct Trajectory {
    pub snapshots: Vec<FlowState>,
    pub failure: Option<Error>,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }
}

/// Integrates from `state0` to `t_end`, recording the state at the step
/// boundary nearest to each sample time. Step `i` sits at exactly
/// `state0.t + i dt`; samples that round to the same step are recorded once.
pub fn run_trajectory(state0: &FlowState, cfg: &StepperConfig, t_end: f64, sample_times: &[f64]) -> Result<Trajectory> {
    let stepper = Stepper::new(*state0.grid(), *cfg)?;
    run_with(&stepper, state0, t_end, sample_times)
}

pub fn run_with(stepper: &Stepper, state0: &FlowState, t_end: f64, sample_times: &[f64]) -> Result<Trajectory> {
    let t0 = state0.t;
    let dt = stepper.config().dt;
    if !(t_end >= t0) {
        return Err(Error::invalid(format!(
            "t_end = {t_end} precedes the initial time {t0}"
        )));
    }
    if sample_times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("sample times must be strictly increasing"));
    }
    if let Some(&s) = sample_times
        .iter()
        .find(|&&s| s > t_end + 1e-12 * t_end.abs().max(1.0) || s < t0)
    {
        return Err(Error::invalid(format!("sample time {s} lies outside [{t0}, {t_end}]")));
    }
    let n_steps = ((t_end - t0) / dt - 1e-9).ceil().max(0.0) as usize;
    let mut marks: Vec<usize> = sample_times
        .iter()
        .map(|&s| (((s - t0) / dt).round() as usize).min(n_steps))
        .collect();
    marks.dedup();

    let mut snapshots = Vec::with_capacity(marks.len());
    let mut next = 0;
    let mut state = state0.clone();
    for i in 0..=n_steps {
        while next < marks.len() && marks[next] == i {
            snapshots.push(state.clone());
            next += 1;
        }
        if i == n_steps {
            break;
        }
        match stepper.step(&state) {
            Ok(mut s) => {
                s.t = t0 + (i + 1) as f64 * dt;
                state = s;
            }
            Err(e) => {
                return Ok(Trajectory {
                    snapshots,
                    failure: Some(e),
                })
            }
        }
    }
    Ok(Trajectory {
        snapshots,
        failure: None,
    })
}
