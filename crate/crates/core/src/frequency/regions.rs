use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::nu_star::nu_star_sq;
use crate::error::{Error, Result};
use crate::propagator::{propagator_pair, propagator_pair_dt, symbol_unchecked, ModeSymbol, Region};

/// Every lattice point `(xi_i, k)` with `xi_i = i xi_max / (points - 1)` and
/// its region.
pub fn classify_lattice(nu: f64, xi_max: f64, points: usize, k_max: usize) -> Vec<(f64, usize, Region)> {
    let mut out = Vec::with_capacity(points * k_max);
    for k in 1..=k_max {
        for i in 0..points {
            let xi = xi_max * i as f64 / (points.max(2) - 1) as f64;
            out.push((xi, k, symbol_unchecked(xi, k, nu).region));
        }
    }
    out
}

/// Supremum over all modes of `xi^2 / (nu^2 p^3)`, which is `nu*^2 / (4 nu^2)`.
pub fn sup_region_ratio(nu: f64) -> f64 {
    nu_star_sq() / (4.0 * nu * nu)
}

/// Whether some mode lies in `region` at viscosity `nu`. `I1` always
/// contains the modes near `xi = 0`; the others need the ratio supremum to
/// reach their lower bound: `I2` iff `nu <= 2 nu*`, `I3` iff `nu <= nu*`,
/// `I4` iff `nu <= nu* / 4`.
pub fn region_nonempty(region: Region, nu: f64) -> bool {
    let (lo, _) = region.ratio_bounds();
    region == Region::I1 || sup_region_ratio(nu) >= lo
}

/// Horizontal sampling range used by [`verify_symbol_bounds`].
pub const BOUND_XI_MAX: f64 = 50.0;
/// Vertical modes sampled by [`verify_symbol_bounds`].
pub const BOUND_K_MAX: usize = 8;

/// Maximal `xi` intervals in `[0, xi_max]` where mode `(xi, k)` is in `region`,
/// by a fine scan with bisection at each region change.
pub fn region_intervals(region: Region, nu: f64, k: usize, xi_max: f64) -> Vec<(f64, f64)> {
    let inside = |xi: f64| symbol_unchecked(xi, k, nu).region == region;
    let n = 20_000;
    let mut out = Vec::new();
    let mut start: Option<f64> = None;
    let mut prev = 0.0;
    let edge = |a: f64, b: f64| {
        // Bisect for the switch point of `inside` between a and b.
        let (mut lo, mut hi) = (a, b);
        let state = inside(a);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if inside(mid) == state {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if state {
            lo
        } else {
            hi
        }
    };
    for i in 0..=n {
        let xi = xi_max * i as f64 / n as f64;
        let now = inside(xi);
        match (start, now) {
            (None, true) => start = Some(if i == 0 { 0.0 } else { edge(prev, xi) }),
            (Some(s), false) => {
                out.push((s, edge(prev, xi)));
                start = None;
            }
            _ => {}
        }
        prev = xi;
    }
    if let Some(s) = start {
        out.push((s, xi_max));
    }
    out
}

/// The four quantities bounded per region, in report order.
pub const BOUND_QUANTITIES: [&str; 4] = ["l1", "l2", "dl1", "dl2"];

/// Envelopes of `|l1|, |l2|, |dl1/dt|, |dl2/dt|` claimed for each region.
pub fn envelopes(sym: &ModeSymbol, t: f64) -> [f64; 4] {
    let nup = sym.nu * sym.p;
    let e = |c: f64| (-nup * t / c).exp();
    match sym.region {
        Region::I1 => {
            let rate = sym.xi * sym.xi / (sym.nu * sym.p * sym.p);
            let slow = (-rate * t).exp();
            let d = rate * slow + nup * e(2.0);
            [slow, slow, d, d]
        }
        Region::I2 => [e(16.0), e(32.0), e(32.0), e(32.0)],
        Region::I3 => [e(2.0), e(4.0), e(2.0), e(4.0)],
        Region::I4 => [e(2.0); 4],
    }
}

/// Envelopes below this are not compared: both sides have decayed past
/// meaningful floating-point range.
const ENVELOPE_FLOOR: f64 = 1e-250;

/// Times at which the bounds are checked: 61 points from `1e-2` to `1e4`.
pub fn bound_times() -> Vec<f64> {
    (0..61).map(|i| 10f64.powf(-2.0 + 6.0 * i as f64 / 60.0)).collect()
}

/// Result of checking the envelope bounds of one region.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundOutcome {
    /// The region has no modes at this viscosity.
    Empty {
        region: Region,
        nu: f64,
    },
    Checked(SymbolBoundReport),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBoundReport {
    pub region: Region,
    pub nu: f64,
    pub samples: usize,
    /// Smallest constants `C` with `|q| <= C envelope` over `samples` modes,
    /// in the order of [`BOUND_QUANTITIES`].
    pub constants: [f64; 4],
    /// The same over `2 samples` modes.
    pub constants_doubled: [f64; 4],
}

impl SymbolBoundReport {
    /// Largest relative change of a constant under sample doubling.
    pub fn max_relative_change(&self) -> f64 {
        self.constants
            .iter()
            .zip(&self.constants_doubled)
            .map(|(a, b)| {
                if *a > 0.0 {
                    (b - a).abs() / a
                } else if *b > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.constants_doubled.iter().all(|c| c.is_finite()) && self.max_relative_change() <= 0.1
    }
}

fn draw_modes(region: Region, nu: f64, n: usize, seed: u64) -> Vec<(f64, usize)> {
    let mut pieces = Vec::new();
    for k in 1..=BOUND_K_MAX {
        for (a, b) in region_intervals(region, nu, k, BOUND_XI_MAX) {
            if b > a {
                pieces.push((a, b, k));
            }
        }
    }
    let total: f64 = pieces.iter().map(|(a, b, _)| b - a).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut u = rng.gen_range(0.0..total);
            for &(a, b, k) in &pieces {
                if u < b - a {
                    return (a + u, k);
                }
                u -= b - a;
            }
            let &(_, b, k) = pieces.last().expect("nonempty");
            (b, k)
        })
        .collect()
}

fn max_constants(modes: &[(f64, usize)], nu: f64, region: Region, times: &[f64]) -> [f64; 4] {
    let mut c = [0.0f64; 4];
    for &(xi, k) in modes {
        let sym = symbol_unchecked(xi, k, nu);
        if sym.region != region {
            continue;
        }
        for &t in times {
            let v = propagator_pair(&sym, t);
            let d = propagator_pair_dt(&sym, t);
            let q = [v.l1_hat.abs(), v.l2_hat.abs(), d.l1_hat.abs(), d.l2_hat.abs()];
            let env = envelopes(&sym, t);
            for i in 0..4 {
                if env[i] > ENVELOPE_FLOOR {
                    c[i] = c[i].max(q[i] / env[i]);
                }
            }
        }
    }
    c
}

/// Measures the constants in the region envelopes on `samples` random modes
/// (`xi in [0, 50]`, `k in 1..=8`) and again on twice as many.
pub fn verify_symbol_bounds(nu: f64, region: Region, samples: usize, seed: u64) -> Result<BoundOutcome> {
    if samples == 0 {
        return Err(Error::invalid("bound verification needs at least one sample"));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::invalid(format!("viscosity must be positive, got {nu}")));
    }
    if !region_nonempty(region, nu) {
        return Ok(BoundOutcome::Empty { region, nu });
    }
    let modes = draw_modes(region, nu, 2 * samples, seed);
    if modes.is_empty() {
        return Ok(BoundOutcome::Empty { region, nu });
    }
    let times = bound_times();
    let constants = max_constants(&modes[..samples], nu, region, &times);
    let constants_doubled = max_constants(&modes, nu, region, &times);
    Ok(BoundOutcome::Checked(SymbolBoundReport {
        region,
        nu,
        samples,
        constants,
        constants_doubled,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::nu_star;

    #[test]
    fn nonemptiness_thresholds() {
        let s = nu_star();
        assert!(region_nonempty(Region::I2, 1.999 * s));
        assert!(!region_nonempty(Region::I2, 2.001 * s));
        assert!(region_nonempty(Region::I3, 0.999 * s));
        assert!(!region_nonempty(Region::I3, 1.001 * s));
        assert!(region_nonempty(Region::I4, 0.249 * s));
        assert!(!region_nonempty(Region::I4, 0.251 * s));
    }

    #[test]
    fn intervals_respect_region() {
        for region in Region::ALL {
            for (a, b) in region_intervals(region, 0.01, 1, 50.0) {
                let mid = 0.5 * (a + b);
                assert_eq!(symbol_unchecked(mid, 1, 0.01).region, region);
            }
        }
    }

    #[test]
    fn lowest_region_envelope_is_sharp() {
        match verify_symbol_bounds(1.0, Region::I1, 200, 3).unwrap() {
            BoundOutcome::Checked(r) => assert!(r.constants_doubled[0] <= 1.0 + 1e-9),
            other => panic!("unexpected {other:?}"),
        }
    }
}
