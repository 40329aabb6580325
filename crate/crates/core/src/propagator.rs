//! Exact per-mode solution of the linearized system.
//!
//! Per horizontal frequency `xi` and sine mode `k`, with `p = xi^2 + pi^2 k^2`,
//!
//! ```text
//! d/dt (w, q) = A (w, q),   A = [[-nu p, i xi], [i xi / p, 0]]
//! ```
//!
//! The temperature alone satisfies `q'' + nu p q' + (xi^2 / p) q = F`, whose
//! solution operators are
//!
//! ```text
//! l1(t) = exp(-nu p t / 2) cosh(sigma t / 2)
//! l2(t) = exp(-nu p t / 2) t sinhc(sigma t / 2)
//! sigma^2 = nu^2 p^2 - 4 xi^2 / p
//! ```
//!
//! Both are even in `sigma`, hence real and branch independent. Since
//! `A^2 + nu p A + (xi^2/p) I = 0`, the pair exponential is
//! `exp(A t) = l1 I + l2 (A + nu p / 2 I)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Parity, StripGrid};
use crate::spectral::SpectralField;
use crate::state::FlowState;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this value of `|sigma t / 2|^2` the series branch is used.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Frequency region, by the size of `xi^2` relative to `nu^2 p^3`:
///
/// | region | condition                                   |
/// |--------|---------------------------------------------|
/// | `I1`   | `xi^2 < nu^2 p^3 / 16`                      |
/// | `I2`   | `nu^2 p^3 / 16 <= xi^2 < nu^2 p^3 / 4`      |
/// | `I3`   | `nu^2 p^3 / 4 <= xi^2 < 4 nu^2 p^3`         |
/// | `I4`   | `xi^2 >= 4 nu^2 p^3`                        |
///
/// A mode exactly on a boundary belongs to the higher region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    I1,
    I2,
    I3,
    I4,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::I1, Region::I2, Region::I3, Region::I4];

    pub fn classify(xi: f64, p: f64, nu: f64) -> Region {
        let xi2 = xi * xi;
        let scale = nu * nu * p * p * p;
        if xi2 < scale / 16.0 {
            Region::I1
        } else if xi2 < scale / 4.0 {
            Region::I2
        } else if xi2 < 4.0 * scale {
            Region::I3
        } else {
            Region::I4
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::I1 => "I1",
            Region::I2 => "I2",
            Region::I3 => "I3",
            Region::I4 => "I4",
        }
    }

    pub fn parse(s: &str) -> Option<Region> {
        Region::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }

    /// Bounds `(lo, hi)` of `xi^2 / (nu^2 p^3)` defining the region.
    pub fn ratio_bounds(self) -> (f64, f64) {
        match self {
            Region::I1 => (0.0, 1.0 / 16.0),
            Region::I2 => (1.0 / 16.0, 0.25),
            Region::I3 => (0.25, 4.0),
            Region::I4 => (4.0, f64::INFINITY),
        }
    }
}

/// Spectral data of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSymbol {
    pub xi: f64,
    pub k: usize,
    pub nu: f64,
    /// `xi^2 + pi^2 k^2`.
    pub p: f64,
    /// `nu^2 p^2 - 4 xi^2 / p`.
    pub sigma_sq: f64,
    /// Principal root of `sigma_sq`, imaginary part nonnegative.
    pub sigma: Complex64,
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub region: Region,
}

/// Builds the symbol of mode `(xi, k)`. The roots are formed without
/// cancellation: `lambda_- = -(nu p + sigma) / 2` and
/// `lambda_+ = xi^2 / (p lambda_-)` when `sigma` is real.
pub fn mode_symbol(xi: f64, k: usize, nu: f64) -> Result<ModeSymbol> {
    if k == 0 {
        return Err(Error::ZeroMode);
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::invalid(format!("viscosity must be positive, got {nu}")));
    }
    if !xi.is_finite() {
        return Err(Error::invalid(format!("frequency must be finite, got {xi}")));
    }
    Ok(symbol_unchecked(xi, k, nu))
}

pub(crate) fn symbol_unchecked(xi: f64, k: usize, nu: f64) -> ModeSymbol {
    let p = xi * xi + PI * PI * (k * k) as f64;
    let nup = nu * p;
    let sigma_sq = nup * nup - 4.0 * xi * xi / p;
    let (sigma, lambda_plus, lambda_minus) = if sigma_sq >= 0.0 {
        let s = sigma_sq.sqrt();
        let lm = -0.5 * (nup + s);
        let lp = xi * xi / (p * lm);
        (Complex64::new(s, 0.0), Complex64::new(lp, 0.0), Complex64::new(lm, 0.0))
    } else {
        let w = (-sigma_sq).sqrt();
        (
            Complex64::new(0.0, w),
            Complex64::new(-0.5 * nup, 0.5 * w),
            Complex64::new(-0.5 * nup, -0.5 * w),
        )
    };
    ModeSymbol {
        xi,
        k,
        nu,
        p,
        sigma_sq,
        sigma,
        lambda_plus,
        lambda_minus,
        region: Region::classify(xi, p, nu),
    }
}

/// Values of the two solution operators at one mode and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorPair {
    pub l1_hat: f64,
    pub l2_hat: f64,
}

/// `l1` and `l2` at time `t >= 0`.
pub fn propagator_pair(sym: &ModeSymbol, t: f64) -> PropagatorPair {
    if t == 0.0 {
        return PropagatorPair {
            l1_hat: 1.0,
            l2_hat: 0.0,
        };
    }
    let nup = sym.nu * sym.p;
    let s = 0.25 * sym.sigma_sq * t * t;
    if s.abs() < SERIES_THRESHOLD {
        let e = (-0.5 * nup * t).exp();
        PropagatorPair {
            l1_hat: e * (1.0 + s * (0.5 + s * (1.0 / 24.0 + s / 720.0))),
            l2_hat: e * t * (1.0 + s * (1.0 / 6.0 + s * (1.0 / 120.0 + s / 5040.0))),
        }
    } else if sym.sigma_sq > 0.0 {
        let sig = sym.sigma.re;
        let ep = (sym.lambda_plus.re * t).exp();
        let em = (sym.lambda_minus.re * t).exp();
        PropagatorPair {
            l1_hat: 0.5 * (ep + em),
            l2_hat: ep * (-(-sig * t).exp_m1()) / sig,
        }
    } else {
        let half_w = 0.5 * sym.sigma.im;
        let e = (-0.5 * nup * t).exp();
        PropagatorPair {
            l1_hat: e * (half_w * t).cos(),
            l2_hat: e * (half_w * t).sin() / half_w,
        }
    }
}

/// Time derivatives `(d l1/dt, d l2/dt)`, packed in a [`PropagatorPair`].
pub fn propagator_pair_dt(sym: &ModeSymbol, t: f64) -> PropagatorPair {
    let nup = sym.nu * sym.p;
    if sym.sigma_sq > 0.0 && sym.sigma.re > 0.25 * nup {
        // Well separated real roots: differentiate the exponentials directly.
        let (lp, lm) = (sym.lambda_plus.re, sym.lambda_minus.re);
        let ep = (lp * t).exp();
        let em = (lm * t).exp();
        PropagatorPair {
            l1_hat: 0.5 * (lp * ep + lm * em),
            l2_hat: (lp * ep - lm * em) / sym.sigma.re,
        }
    } else {
        let a = -0.5 * nup;
        let v = propagator_pair(sym, t);
        PropagatorPair {
            l1_hat: a * v.l1_hat + 0.25 * sym.sigma_sq * v.l2_hat,
            l2_hat: v.l1_hat + a * v.l2_hat,
        }
    }
}

/// Entries `[m00, m01, m10, m11]` of `exp(A t)` for one mode.
pub fn pair_exponential(sym: &ModeSymbol, t: f64) -> [Complex64; 4] {
    let nup = sym.nu * sym.p;
    if sym.xi == 0.0 {
        return [
            Complex64::new((-nup * t).exp(), 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
    }
    let v = propagator_pair(sym, t);
    // m00 = l1 - (nu p / 2) l2 equals d l2 / dt, which avoids the cancellation
    // of the two terms in the strongly damped case.
    let m00 = propagator_pair_dt(sym, t).l2_hat;
    let m11 = v.l1_hat + 0.5 * nup * v.l2_hat;
    [
        Complex64::new(m00, 0.0),
        I * (sym.xi * v.l2_hat),
        I * (sym.xi / sym.p * v.l2_hat),
        Complex64::new(m11, 0.0),
    ]
}

/// `exp(-nu (xi^2 + pi^2 k^2) t)` applied to every coefficient.
pub fn heat_semigroup(f: &SpectralField, nu: f64, t: f64) -> Result<SpectralField> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::invalid(format!("viscosity must be positive, got {nu}")));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.map_symbol(|xi, k| Complex64::new((-nu * (xi * xi + PI * PI * (k * k) as f64) * t).exp(), 0.0)))
}

/// Equally spaced samples `F(tau_i)`, `tau_i = i t / n`, of a forcing term.
#[derive(Debug, Clone)]
pub struct ForcingSamples {
    times: Vec<f64>,
    fields: Vec<SpectralField>,
}

impl ForcingSamples {
    /// Validates the samples: at least two, shared grid and odd parity,
    /// starting at 0 with uniform spacing (relative tolerance `1e-9`).
    pub fn new(times: Vec<f64>, fields: Vec<SpectralField>) -> Result<Self> {
        if times.len() != fields.len() || times.len() < 2 {
            return Err(Error::invalid("forcing needs at least two samples, one per time"));
        }
        if times[0] != 0.0 {
            return Err(Error::invalid("forcing samples must start at t = 0"));
        }
        let h = times[1] - times[0];
        if !(h > 0.0) {
            return Err(Error::invalid("forcing sample times must increase"));
        }
        for (i, &t) in times.iter().enumerate() {
            if (t - i as f64 * h).abs() > 1e-9 * times[times.len() - 1] {
                return Err(Error::invalid(format!(
                    "forcing sample {i} at t = {t} breaks uniform spacing"
                )));
            }
        }
        for f in &fields {
            f.ensure_parity(Parity::Odd)?;
            f.ensure_same_grid(&fields[0])?;
        }
        Ok(ForcingSamples { times, fields })
    }

    pub fn uniform(t_end: f64, fields: Vec<SpectralField>) -> Result<Self> {
        let n = fields.len().saturating_sub(1).max(1);
        let times = (0..fields.len()).map(|i| t_end * i as f64 / n as f64).collect();
        ForcingSamples::new(times, fields)
    }

    pub fn t_end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }
}

/// Solution of `q'' + nu p q' + (xi^2/p) q = F` with `q(0) = phi0`,
/// `q'(0) = phi1`:
///
/// ```text
/// q(t) = l1(t) phi0 + l2(t) ((nu/2) p phi0 + phi1) + int_0^t l2(t - s) F(s) ds
/// ```
///
/// The forcing integral uses the composite trapezoid rule on the samples;
/// without forcing the result is exact per mode.
pub fn propagate_phi(
    phi0: &SpectralField,
    phi1: &SpectralField,
    t: f64,
    forcing: Option<&ForcingSamples>,
) -> Result<SpectralField> {
    phi0.ensure_parity(Parity::Odd)?;
    phi1.ensure_parity(Parity::Odd)?;
    phi0.ensure_same_grid(phi1)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
    }
    if let Some(fs) = forcing {
        fs.fields[0].ensure_same_grid(phi0)?;
        if (fs.t_end() - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::invalid(format!(
                "forcing samples end at {} but the target time is {t}",
                fs.t_end()
            )));
        }
    }
    if t == 0.0 {
        return Ok(phi0.clone());
    }
    let grid = *phi0.grid();
    let nu = grid.nu();
    let nx = grid.nx();
    let mut out = phi0.clone();
    out.coeff_mut().par_chunks_mut(nx).enumerate().for_each(|(k, row)| {
        if !grid.row_active(Parity::Odd, k) {
            return;
        }
        for (idx, c) in row.iter_mut().enumerate() {
            let sym = symbol_unchecked(grid.xi(idx), k, nu);
            let v = propagator_pair(&sym, t);
            let p0 = *c;
            let p1 = phi1.coeff()[k * nx + idx];
            let mut value = v.l1_hat * p0 + v.l2_hat * (0.5 * nu * sym.p * p0 + p1);
            if let Some(fs) = forcing {
                let n = fs.times.len() - 1;
                let h = t / n as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, f) in fs.fields.iter().enumerate() {
                    let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                    let l2 = propagator_pair(&sym, t - fs.times[i]).l2_hat;
                    acc += w * l2 * f.coeff()[k * nx + idx];
                }
                value += h * acc;
            }
            *c = value;
        }
    });
    Ok(out)
}

/// Cached `exp(A dt)` on every lattice mode of a grid.
#[derive(Debug, Clone)]
pub struct LinearPairPropagator {
    grid: StripGrid,
    dt: f64,
    entries: Vec<[Complex64; 4]>,
}

impl LinearPairPropagator {
    pub fn new(grid: StripGrid, dt: f64) -> Result<Self> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("time must be nonnegative, got {dt}")));
        }
        let nx = grid.nx();
        let zero = Complex64::new(0.0, 0.0);
        let mut entries = vec![[zero; 4]; grid.len()];
        entries.par_chunks_mut(nx).enumerate().for_each(|(k, row)| {
            if !grid.row_active(Parity::Odd, k) {
                return;
            }
            for (idx, m) in row.iter_mut().enumerate() {
                *m = pair_exponential(&symbol_unchecked(grid.xi(idx), k, grid.nu()), dt);
            }
        });
        Ok(LinearPairPropagator { grid, dt, entries })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &StripGrid {
        &self.grid
    }

    /// Advances `state` by `dt` under the linear dynamics.
    pub fn apply(&self, state: &FlowState) -> Result<FlowState> {
        if *state.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let mut omega = state.omega.clone();
        let mut theta = state.theta.clone();
        omega
            .coeff_mut()
            .par_iter_mut()
            .zip(theta.coeff_mut().par_iter_mut())
            .zip(self.entries.par_iter())
            .for_each(|((w, q), m)| {
                let (w0, q0) = (*w, *q);
                *w = m[0] * w0 + m[1] * q0;
                *q = m[2] * w0 + m[3] * q0;
            });
        omega.enforce_hermitian();
        theta.enforce_hermitian();
        Ok(FlowState {
            t: state.t + self.dt,
            omega,
            theta,
        })
    }
}

/// Exact linear evolution of `(omega0, theta0)` over time `t`, starting the
/// clock at 0.
pub fn propagate_linear_pair(omega0: &SpectralField, theta0: &SpectralField, t: f64) -> Result<FlowState> {
    let start = FlowState::new(0.0, omega0.clone(), theta0.clone())?;
    LinearPairPropagator::new(*omega0.grid(), t)?.apply(&start)
}
