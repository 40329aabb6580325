use num_complex::Complex64;
use rayon::prelude::*;

use crate::diagnostics::{DecayCurve, NormId, NormKind};
use crate::error::{Error, Result};
use crate::profile::{Component, Profile};
use crate::propagator::{pair_exponential, symbol_unchecked};
use crate::quadrature::gauss_legendre;

/// Quadrature rule in `xi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XiRule {
    Trapezoid,
    /// Gauss-Legendre on panels graded quadratically towards `xi = 0`,
    /// where the decaying solutions concentrate.
    GaussLegendreComposite,
}

impl XiRule {
    pub fn name(self) -> &'static str {
        match self {
            XiRule::Trapezoid => "trapezoid",
            XiRule::GaussLegendreComposite => "gauss-legendre-composite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "trapezoid" => Some(XiRule::Trapezoid),
            "gauss-legendre-composite" => Some(XiRule::GaussLegendreComposite),
            _ => None,
        }
    }
}

/// Discretization of the continuum `xi` integral and the `k` sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Integration runs over `[-xi_cutoff, xi_cutoff]`.
    pub xi_cutoff: f64,
    pub xi_points: usize,
    pub k_max: usize,
    pub rule: XiRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            xi_cutoff: 10.0,
            xi_points: 4096,
            k_max: 8,
            rule: XiRule::GaussLegendreComposite,
        }
    }
}

/// Gauss points per panel of the composite rule.
const PANEL_ORDER: usize = 8;

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.xi_cutoff > 0.0 && self.xi_cutoff.is_finite()) {
            return Err(Error::invalid(format!(
                "xi_cutoff must be positive, got {}",
                self.xi_cutoff
            )));
        }
        if self.xi_points < 2 * PANEL_ORDER {
            return Err(Error::invalid(format!(
                "xi_points must be at least {}",
                2 * PANEL_ORDER
            )));
        }
        if self.k_max == 0 {
            return Err(Error::invalid("k_max must be at least 1"));
        }
        Ok(())
    }

    /// Nodes and weights on `[0, xi_cutoff]`.
    pub fn half_line_rule(&self) -> (Vec<f64>, Vec<f64>) {
        let x = self.xi_cutoff;
        match self.rule {
            XiRule::Trapezoid => {
                let n = self.xi_points;
                let h = x / n as f64;
                let nodes = (0..=n).map(|i| i as f64 * h).collect();
                let weights = (0..=n).map(|i| if i == 0 || i == n { 0.5 * h } else { h }).collect();
                (nodes, weights)
            }
            XiRule::GaussLegendreComposite => {
                let panels = self.xi_points / PANEL_ORDER;
                let (gx, gw) = gauss_legendre(PANEL_ORDER);
                let edge = |i: usize| x * (i as f64 / panels as f64).powi(2);
                let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
                let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
                for i in 0..panels {
                    let (a, b) = (edge(i), edge(i + 1));
                    for (u, w) in gx.iter().zip(&gw) {
                        nodes.push(0.5 * (a + b) + 0.5 * (b - a) * u);
                        weights.push(0.5 * (b - a) * w);
                    }
                }
                (nodes, weights)
            }
        }
    }
}

/// Norms of the exact linear solution with continuum initial data, as
/// functions of time, without any periodic truncation in `x`.
///
/// Each requested pair `(component, norm)` yields one curve. The profile is
/// even in `xi` and so are the moduli of the evolved coefficients, so the
/// `xi` integral is twice the integral over `[0, xi_cutoff]`. `Linf` is not
/// available here; use the `L1Hat` majorant.
pub fn continuum_linear_decay(
    profile: &Profile,
    nu: f64,
    norms: &[(Component, NormId)],
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<DecayCurve>> {
    profile.validate()?;
    spec.validate()?;
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::invalid(format!("viscosity must be positive, got {nu}")));
    }
    if spec.k_max < profile.max_k() {
        return Err(Error::invalid(format!(
            "k_max = {} does not cover the profile's modes up to k = {}",
            spec.k_max,
            profile.max_k()
        )));
    }
    if let Some((_, id)) = norms.iter().find(|(_, id)| id.kind == NormKind::Linf) {
        return Err(Error::invalid(format!("norm {id} has no continuum evaluation")));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !(*t >= 0.0)) {
        return Err(Error::invalid("times must be nonnegative and strictly increasing"));
    }

    let (nodes, weights) = spec.half_line_rule();
    // Rows of the profile that carry data; other rows stay zero for all time
    // because the linear system does not couple different k.
    let rows: Vec<usize> = (1..=spec.k_max)
        .filter(|&k| {
            nodes.iter().any(|&xi| {
                profile.value(Component::Omega, xi, k) != 0.0 || profile.value(Component::Theta, xi, k) != 0.0
            })
        })
        .collect();

    let values: Vec<Vec<f64>> = times
        .par_iter()
        .map(|&t| {
            let mut sums = vec![0.0; norms.len()];
            for &k in &rows {
                for (&xi, &w) in nodes.iter().zip(&weights) {
                    let w0 = profile.value(Component::Omega, xi, k);
                    let q0 = profile.value(Component::Theta, xi, k);
                    let m = pair_exponential(&symbol_unchecked(xi, k, nu), t);
                    let omega = m[0] * w0 + m[1] * q0;
                    let theta = m[2] * w0 + m[3] * q0;
                    for (s, (component, id)) in sums.iter_mut().zip(norms) {
                        let c: Complex64 = match component {
                            Component::Omega => omega,
                            Component::Theta => theta,
                        };
                        let a = id.mode_weight(xi, k) * c.norm();
                        *s += 2.0 * w * if id.is_quadratic() { a * a } else { a };
                    }
                }
            }
            norms.iter().zip(sums).map(|((_, id), s)| id.finish(s)).collect()
        })
        .collect();

    norms
        .iter()
        .enumerate()
        .map(|(i, (component, id))| {
            DecayCurve::new(
                format!("{}:{}", component.name(), id),
                times.to_vec(),
                values.iter().map(|v| v[i]).collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::Weight;
    use std::f64::consts::PI;

    #[test]
    fn initial_l2_norm_is_gaussian_integral() {
        let profile = Profile::gaussian_theta(1.0);
        let id = NormId::new(NormKind::L2Hat, Weight::One);
        for rule in [XiRule::Trapezoid, XiRule::GaussLegendreComposite] {
            let spec = QuadratureSpec {
                rule,
                ..Default::default()
            };
            let c = continuum_linear_decay(&profile, 1.0, &[(Component::Theta, id)], &[0.0], &spec).unwrap();
            // int exp(-2 xi^2) dxi = sqrt(pi / 2)
            let exact = (PI / 2.0).sqrt().sqrt();
            assert!((c[0].values[0] - exact).abs() < 1e-12, "{rule:?}");
        }
    }

    #[test]
    fn rejects_linf_and_short_k_range() {
        let profile = Profile::gaussian_theta(1.0);
        let linf = NormId::new(NormKind::Linf, Weight::One);
        assert!(
            continuum_linear_decay(&profile, 1.0, &[(Component::Theta, linf)], &[1.0], &Default::default()).is_err()
        );
        let mut p = profile.clone();
        p.terms[0].k = 12;
        let l2 = NormId::new(NormKind::L2Hat, Weight::One);
        assert!(continuum_linear_decay(&p, 1.0, &[(Component::Theta, l2)], &[1.0], &Default::default()).is_err());
    }
}
