//! Transforms between coefficient space and the collocation nodes.
//!
//! With `b_k(y)` the sine or cosine basis and `s = dxi / sqrt(pi)`:
//!
//! ```text
//! f(x_m, y_n) = s * sum_k b_k(y_n) * sum_j c(j, k) exp(i xi_j x_m)
//! ```
//!
//! Because `xi_j x_m = -pi j + 2 pi j m / nx`, the inner sum is an inverse
//! FFT of `(-1)^j c(., k)`. The outer sum is an inverse FFT of length `2 ny`
//! whose imaginary (sine) or real (cosine) part is kept, so sine and cosine
//! fields share one node set.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use super::field::{PhysicalField, SpectralField};
use crate::error::{Error, Result};
use crate::grid::{Parity, StripGrid};

/// Boundary rows of odd input larger than this fraction of the field
/// maximum are treated as a parity violation.
pub const PARITY_TOLERANCE: f64 = 1e-12;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

fn sign(idx: usize) -> f64 {
    // nx is even, so (-1)^j = (-1)^idx for the storage column idx of j.
    if idx.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn scale(grid: &StripGrid) -> f64 {
    grid.dxi() / PI.sqrt()
}

/// Evaluates the series at the collocation nodes.
pub fn to_physical(f: &SpectralField) -> PhysicalField {
    let grid = *f.grid();
    let (nx, ny, rows) = (grid.nx(), grid.ny(), grid.rows());
    let parity = f.parity();

    // x direction: g_k(x_m) for every row.
    let mut g: Vec<Complex64> = f.coeff().to_vec();
    g.par_chunks_mut(nx).enumerate().for_each(|(k, row)| {
        if !grid.row_active(parity, k) {
            row.fill(Complex64::new(0.0, 0.0));
            return;
        }
        for (idx, c) in row.iter_mut().enumerate() {
            *c *= sign(idx);
        }
        row[nx / 2] = Complex64::new(0.0, 0.0);
        plan(nx, FftDirection::Inverse).process(row);
    });

    // y direction, one column per node x_m.
    let s = scale(&grid);
    let columns: Vec<Vec<f64>> = (0..nx)
        .into_par_iter()
        .map(|m| {
            let mut buf = vec![Complex64::new(0.0, 0.0); 2 * ny];
            for k in 0..rows {
                buf[k] = Complex64::new(g[k * nx + m].re, 0.0);
            }
            plan(2 * ny, FftDirection::Inverse).process(&mut buf);
            (0..rows)
                .map(|n| match parity {
                    Parity::Odd if n == 0 || n == ny => 0.0,
                    Parity::Odd => s * buf[n].im,
                    Parity::Even => s * buf[n].re,
                })
                .collect()
        })
        .collect();

    let mut values = vec![0.0; grid.len()];
    for (m, col) in columns.iter().enumerate() {
        for (n, v) in col.iter().enumerate() {
            values[n * nx + m] = *v;
        }
    }
    PhysicalField::new(grid, parity, values).expect("sizes match by construction")
}

/// Inverse of [`to_physical`] on band-limited fields, with the default
/// parity tolerance.
pub fn to_spectral(f: &PhysicalField) -> Result<SpectralField> {
    to_spectral_with_tolerance(f, PARITY_TOLERANCE)
}

/// Like [`to_spectral`], rejecting odd input whose boundary rows exceed
/// `tolerance * max|f|`.
pub fn to_spectral_with_tolerance(f: &PhysicalField, tolerance: f64) -> Result<SpectralField> {
    let grid = *f.grid();
    let (nx, ny, rows) = (grid.nx(), grid.ny(), grid.rows());
    let parity = f.parity();

    if parity == Parity::Odd {
        let scale_max = f.max_abs();
        let magnitude = f.boundary_max_abs();
        if magnitude > tolerance * scale_max {
            return Err(Error::ParityViolation {
                magnitude,
                scale: scale_max,
            });
        }
    }

    // y direction: sine or cosine coefficients of every column.
    let values = f.values();
    let columns: Vec<Vec<f64>> = (0..nx)
        .into_par_iter()
        .map(|m| {
            let mut buf = vec![Complex64::new(0.0, 0.0); 2 * ny];
            for n in 0..rows {
                let v = values[n * nx + m];
                match parity {
                    Parity::Odd => {
                        if n != 0 && n != ny {
                            buf[n] = Complex64::new(v, 0.0);
                            buf[2 * ny - n] = Complex64::new(-v, 0.0);
                        }
                    }
                    Parity::Even => {
                        buf[n] = Complex64::new(v, 0.0);
                        if n != 0 && n != ny {
                            buf[2 * ny - n] = Complex64::new(v, 0.0);
                        }
                    }
                }
            }
            plan(2 * ny, FftDirection::Forward).process(&mut buf);
            (0..rows)
                .map(|k| match parity {
                    Parity::Odd => -buf[k].im / ny as f64,
                    Parity::Even => {
                        let w = if k == 0 || k == ny { 0.5 } else { 1.0 };
                        w * buf[k].re / ny as f64
                    }
                })
                .collect()
        })
        .collect();

    // x direction.
    let norm = 1.0 / (scale(&grid) * nx as f64);
    let mut coeff = vec![Complex64::new(0.0, 0.0); grid.len()];
    coeff.par_chunks_mut(nx).enumerate().for_each(|(k, row)| {
        if !grid.row_active(parity, k) {
            return;
        }
        for (m, c) in row.iter_mut().enumerate() {
            *c = Complex64::new(columns[m][k], 0.0);
        }
        plan(nx, FftDirection::Forward).process(row);
        for (idx, c) in row.iter_mut().enumerate() {
            *c *= sign(idx) * norm;
        }
        row[nx / 2] = Complex64::new(0.0, 0.0);
    });

    let mut out = SpectralField::from_raw(grid, parity, coeff);
    out.enforce_hermitian();
    Ok(out)
}
