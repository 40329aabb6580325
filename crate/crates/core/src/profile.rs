//! Initial-data profiles given directly in frequency space.

use crate::error::{Error, Result};

/// Which perturbation field a profile term feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Omega,
    Theta,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::Omega => "omega",
            Component::Theta => "theta",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "omega" => Some(Component::Omega),
            "theta" => Some(Component::Theta),
            _ => None,
        }
    }
}

/// One contribution `amplitude * exp(-(xi / width)^2)` on sine row `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileTerm {
    pub component: Component,
    pub k: usize,
    pub width: f64,
    pub amplitude: f64,
}

impl ProfileTerm {
    pub fn value(&self, xi: f64) -> f64 {
        let z = xi / self.width;
        self.amplitude * (-z * z).exp()
    }
}

/// Sum of Gaussian terms plus the spectral band kept when the profile is
/// sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub terms: Vec<ProfileTerm>,
    /// Fraction of the horizontal and vertical mode range retained when
    /// sampling on a grid. The default of `2/3` keeps data inside the
    /// dealiased band, where the discrete transport is exactly skew.
    pub band_fraction: f64,
}

impl Profile {
    /// `theta^(xi, k) = amplitude * exp(-xi^2) delta_{k,1}` with zero vorticity.
    pub fn gaussian_theta(amplitude: f64) -> Self {
        Profile {
            terms: vec![ProfileTerm {
                component: Component::Theta,
                k: 1,
                width: 1.0,
                amplitude,
            }],
            band_fraction: 2.0 / 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::invalid("profile has no terms"));
        }
        for (i, t) in self.terms.iter().enumerate() {
            if t.k == 0 {
                return Err(Error::invalid(format!(
                    "profile term {i}: k must be at least 1 for sine fields"
                )));
            }
            if !(t.width.is_finite() && t.width > 0.0) {
                return Err(Error::invalid(format!("profile term {i}: width must be positive")));
            }
            if !t.amplitude.is_finite() {
                return Err(Error::invalid(format!("profile term {i}: amplitude must be finite")));
            }
        }
        if !(self.band_fraction > 0.0 && self.band_fraction <= 1.0) {
            return Err(Error::invalid(format!(
                "band_fraction must lie in (0, 1], got {}",
                self.band_fraction
            )));
        }
        Ok(())
    }

    /// Continuum transform of the given component at `(xi, k)`.
    pub fn value(&self, component: Component, xi: f64, k: usize) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.component == component && t.k == k)
            .map(|t| t.value(xi))
            .sum()
    }

    pub fn max_k(&self) -> usize {
        self.terms.iter().map(|t| t.k).max().unwrap_or(0)
    }

    /// Largest Gaussian width, which sets the frequency support.
    pub fn max_width(&self) -> f64 {
        self.terms.iter().map(|t| t.width).fold(0.0, f64::max)
    }

    pub fn has(&self, component: Component) -> bool {
        self.terms.iter().any(|t| t.component == component)
    }
}
