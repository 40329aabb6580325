//! Adaptive Dormand-Prince 5(4) integration, used as an independent
//! reference for the closed-form propagators.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// Fifth-order weights are the last row of A; these are 5th minus 4th order.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-12,
            atol: 1e-300,
            max_steps: 50_000_000,
        }
    }
}

/// Integrates `y' = f(t, y)` from `t0` and returns the state at each of the
/// increasing `outputs` times (each hit exactly).
pub fn dopri5<F>(f: F, t0: f64, y0: &[f64], outputs: &[f64], opts: OdeOptions) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut out = Vec::with_capacity(outputs.len());
    f(t, &y, &mut k[0]);
    let mut h = initial_step(&y, &k[0], opts, outputs.last().copied().unwrap_or(t0) - t0);
    let mut steps = 0usize;

    for &target in outputs {
        if target < t {
            return Err(Error::invalid("output times must be increasing and not before t0"));
        }
        while t < target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::invalid(format!("step budget exhausted at t = {t}")));
            }
            let last = t + h >= target;
            let step = if last { target - t } else { h };
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = y[i];
                    for j in 0..s {
                        acc += step * A[s][j] * k[j][i];
                    }
                    tmp[i] = acc;
                }
                f(t + C[s] * step, &tmp, &mut k[s]);
                if s == 6 {
                    y_new.copy_from_slice(&tmp);
                }
            }
            let mut err = 0.0f64;
            for i in 0..n {
                let mut e = 0.0;
                for s in 0..7 {
                    e += E[s] * k[s][i];
                }
                let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((step * e / sc).abs());
            }
            if !err.is_finite() {
                return Err(Error::invalid(format!("non-finite error estimate at t = {t}")));
            }
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y.copy_from_slice(&y_new);
                // First-same-as-last: the seventh stage is f at the new point.
                let k6 = k[6].clone();
                k[0].copy_from_slice(&k6);
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if !(last && err <= 1.0) {
                h = step * factor;
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

fn initial_step(y: &[f64], dy: &[f64], opts: OdeOptions, span: f64) -> f64 {
    let d0 = y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let d1 = dy.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let h = if d0 < 1e-300 || d1 < 1e-300 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h = h * opts.rtol.powf(0.2).max(1e-3);
    if span > 0.0 {
        h.min(span).max(1e-12 * span)
    } else {
        h.max(1e-12)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator() {
        let out = dopri5(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[1.0, 0.0],
            &[1.0, 10.0],
            OdeOptions::default(),
        )
        .unwrap();
        assert!((out[0][0] - 1f64.cos()).abs() < 1e-11);
        assert!((out[1][0] - 10f64.cos()).abs() < 1e-10);
        assert!((out[1][1] + 10f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn decay_relative_accuracy() {
        let out = dopri5(
            |_, y, dy| dy[0] = -3.0 * y[0],
            0.0,
            &[1.0],
            &[20.0],
            OdeOptions::default(),
        )
        .unwrap();
        let exact = (-60.0f64).exp();
        assert!((out[0][0] - exact).abs() < 1e-9 * exact);
    }
}
