use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

/// Lower cut of the outer integral: `eta >= pi` is the lowest sine mode.
const ETA_MIN: f64 = PI;

/// Upper cut `H = max(1e3, 10 sqrt(t))` of the outer integral.
pub fn kernel_cutoff(t: f64) -> f64 {
    (1e3f64).max(10.0 * t.sqrt())
}

/// `int_{-pi/2}^{pi/2} exp(-s sin^2 b cos^2 b) cos^2 b db`, which is the
/// inner `xi` integral at fixed `eta` after `xi = eta tan b`, times `eta^3`.
fn angular(s: f64) -> f64 {
    let f = |b: f64| {
        let (sn, cs) = b.sin_cos();
        (-s * sn * sn * cs * cs).exp() * cs * cs
    };
    // Symmetric in b, and peaked at 0 and pi/2 when s is large.
    2.0 * integrate_adaptive(f, 0.0, 0.5 * PI, 1e-300, 1e-13)
}

/// Analytic value of the outer integral over `[H, inf)` from the moment
/// expansion `angular(s) = pi/2 - (pi/16) s + (3 pi/512) s^2 + O(s^3)`.
fn tail(t: f64, h: f64) -> f64 {
    let h2 = h * h;
    PI / (4.0 * h2) - PI * t / (64.0 * h2 * h2) + PI * t * t / (1024.0 * h2 * h2 * h2)
}

/// `K(t) = int_pi^inf int_R exp(-xi^2 t / (xi^2 + eta^2)^2) (xi^2 + eta^2)^{-2} dxi deta`.
///
/// The outer integral runs in `ln eta` over `[pi, H]` by adaptive
/// Gauss-Kronrod; the remainder beyond `H` is added from its series, which
/// is accurate to `O((t/H^2)^3)` relative to a term already of size
/// `1/H^2`.
pub fn kernel_decay_integral(t: f64) -> Result<f64> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("time must be nonnegative, got {t}")));
    }
    let h = kernel_cutoff(t);
    let outer = |u: f64| {
        let eta = u.exp();
        angular(t / (eta * eta)) / (eta * eta)
    };
    let body = integrate_adaptive(outer, ETA_MIN.ln(), h.ln(), 1e-300, 1e-12);
    Ok(body + tail(t, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_zero() {
        // At t = 0 the angular factor is pi/2 and the outer integral gives
        // pi/2 * 1/(2 pi^2).
        let k0 = kernel_decay_integral(0.0).unwrap();
        assert!((k0 - 1.0 / (4.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn decreasing() {
        let mut last = f64::INFINITY;
        for t in [0.0, 1.0, 10.0, 100.0, 1e3, 1e4] {
            let k = kernel_decay_integral(t).unwrap();
            assert!(k < last);
            last = k;
        }
    }
}
