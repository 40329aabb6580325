use std::f64::consts::PI;

use rayon::prelude::*;

/// `4 xi^2 / (xi^2 + pi^2 k^2)^3`, whose supremum is `nu*^2`.
pub fn critical_ratio(xi: f64, k: usize) -> f64 {
    let p = xi * xi + PI * PI * (k * k) as f64;
    4.0 * xi * xi / (p * p * p)
}

/// Square of the critical viscosity, `16 / (27 pi^4)`.
///
/// For fixed `k` the ratio is maximal where `xi^2 = p / 3`, giving
/// `16 / (27 pi^4 k^4)`, so the supremum sits at `k = 1`, `xi^2 = pi^2 / 2`.
pub fn nu_star_sq() -> f64 {
    16.0 / (27.0 * PI.powi(4))
}

/// Critical viscosity: every mode is overdamped (`sigma` real) iff
/// `nu >= nu*`.
pub fn nu_star() -> f64 {
    nu_star_sq().sqrt()
}

/// Outcome of a brute-force search for the supremum of [`critical_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuStarSearch {
    pub sup_ratio: f64,
    pub argmax_xi: f64,
    pub argmax_k: usize,
    pub points: usize,
    /// `|sup_ratio - nu_star_sq()|`.
    pub delta: f64,
}

/// Scans `xi in [0, xi_max]`, `k in k_min..=k_max` with about `points` samples
/// in total, then polishes the best sample by golden-section search.
pub fn nu_star_grid_search(xi_max: f64, k_min: usize, k_max: usize, points: usize) -> NuStarSearch {
    assert!(k_min >= 1 && k_max >= k_min && points >= 2 * (k_max - k_min + 1));
    let per_k = points / (k_max - k_min + 1);
    let h = xi_max / (per_k - 1) as f64;
    let best = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            (0..per_k)
                .map(|i| {
                    let xi = i as f64 * h;
                    (critical_ratio(xi, k), xi, k)
                })
                .fold((f64::NEG_INFINITY, 0.0, k), |a, b| if b.0 > a.0 { b } else { a })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::NEG_INFINITY, 0.0, k_min), |a, b| if b.0 > a.0 { b } else { a });

    let (_, xi0, k) = best;
    let (mut a, mut b) = ((xi0 - h).max(0.0), (xi0 + h).min(xi_max));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    for _ in 0..200 {
        if b - a < 1e-15 * xi0.max(1.0) {
            break;
        }
        if critical_ratio(c, k) > critical_ratio(d, k) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    let xi = 0.5 * (a + b);
    let sup_ratio = critical_ratio(xi, k).max(best.0);
    NuStarSearch {
        sup_ratio,
        argmax_xi: xi,
        argmax_k: k,
        points: per_k * (k_max - k_min + 1),
        delta: (sup_ratio - nu_star_sq()).abs(),
    }
}
