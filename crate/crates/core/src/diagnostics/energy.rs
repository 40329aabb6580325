use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::solver::nonlinear_term;
use crate::spectral::{derivative_x, poisson_inverse};
use crate::state::FlowState;

/// Energy bookkeeping of a trajectory for `E = ||grad theta||^2 + ||omega||^2`,
/// which obeys
///
/// ```text
/// dE/dt + 2 nu ||grad omega||^2 = 2 (B1 + B2),
/// B1 = -<u . grad omega, omega>,   B2 = -<grad (u . grad theta), grad theta>
/// ```
///
/// once the linear coupling `B3 = <grad d_x psi, grad theta> + <d_x theta, omega>`
/// has cancelled. Time integrals use the trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    /// `2 nu ||grad omega||^2` at each snapshot.
    pub dissipation_rate: Vec<f64>,
    /// `2 (B1 + B2)` at each snapshot.
    pub flux: Vec<f64>,
    pub b3: Vec<f64>,
    /// `||d_x theta|| ||omega||`, the natural size of each term of `B3`.
    pub b3_scale: Vec<f64>,
    pub dissipation_integral: f64,
    pub flux_integral: f64,
    /// `E(t_end) - E(t_0) + int dissipation - int flux`.
    pub residual: f64,
    /// Residual over the larger of the dissipated energy and `|E(t_end) - E(t_0)|`.
    pub relative_residual: f64,
    pub max_b3_relative: f64,
}

pub fn energy_report(traj: &[FlowState], nu: f64) -> Result<EnergyReport> {
    energy_report_with(traj, nu, 2.0 / 3.0)
}

pub fn energy_report_with(traj: &[FlowState], nu: f64, dealias_fraction: f64) -> Result<EnergyReport> {
    if traj.len() < 3 {
        return Err(Error::TooFewSamples {
            found: traj.len(),
            required: 3,
        });
    }
    for s in &traj[1..] {
        if s.grid() != traj[0].grid() {
            return Err(Error::GridMismatch);
        }
    }
    let h = traj[1].t - traj[0].t;
    if !(h > 0.0) {
        return Err(Error::invalid("snapshot times must increase"));
    }
    let span = traj[traj.len() - 1].t - traj[0].t;
    for (i, s) in traj.iter().enumerate() {
        if (s.t - traj[0].t - i as f64 * h).abs() > 1e-9 * span {
            return Err(Error::invalid(format!(
                "snapshot {i} at t = {} breaks uniform spacing",
                s.t
            )));
        }
    }

    let per_snapshot: Vec<[f64; 5]> = traj
        .par_iter()
        .map(|s| -> Result<[f64; 5]> {
            let energy = s.theta.gradient_inner(&s.theta)? + s.omega.l2_norm_sq();
            let diss = 2.0 * nu * s.omega.gradient_inner(&s.omega)?;
            let (nw, nq) = nonlinear_term(s, dealias_fraction)?;
            let b1 = -nw.inner(&s.omega)?;
            let b2 = -nq.gradient_inner(&s.theta)?;
            let dtheta = derivative_x(&s.theta);
            let dpsi = derivative_x(&poisson_inverse(&s.omega)?);
            let b3 = dpsi.gradient_inner(&s.theta)? + dtheta.inner(&s.omega)?;
            let scale = (dtheta.l2_norm_sq() * s.omega.l2_norm_sq()).sqrt();
            Ok([energy, diss, 2.0 * (b1 + b2), b3, scale])
        })
        .collect::<Result<_>>()?;

    let col = |i: usize| per_snapshot.iter().map(|r| r[i]).collect::<Vec<f64>>();
    let energy = col(0);
    let dissipation_rate = col(1);
    let flux = col(2);
    let b3 = col(3);
    let b3_scale = col(4);
    let trapezoid = |v: &[f64]| {
        let inner: f64 = v[1..v.len() - 1].iter().sum();
        h * (0.5 * (v[0] + v[v.len() - 1]) + inner)
    };
    let dissipation_integral = trapezoid(&dissipation_rate);
    let flux_integral = trapezoid(&flux);
    let change = energy[energy.len() - 1] - energy[0];
    let residual = change + dissipation_integral - flux_integral;
    let denom = dissipation_integral.abs().max(change.abs());
    let relative_residual = if denom > 0.0 {
        residual.abs() / denom
    } else {
        residual.abs()
    };
    let max_b3_relative = b3
        .iter()
        .zip(&b3_scale)
        .map(|(b, s)| if *s > 0.0 { b.abs() / s } else { b.abs() })
        .fold(0.0, f64::max);

    Ok(EnergyReport {
        times: traj.iter().map(|s| s.t).collect(),
        energy,
        dissipation_rate,
        flux,
        b3,
        b3_scale,
        dissipation_integral,
        flux_integral,
        residual,
        relative_residual,
        max_b3_relative,
    })
}
