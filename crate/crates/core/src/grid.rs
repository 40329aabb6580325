use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Vertical expansion class of a field on the strip.
///
/// `Odd` fields are sine series in `y` and vanish on both walls; `Even`
/// fields are cosine series with vanishing odd-order normal derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn flipped(self) -> Self {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "odd" => Some(Parity::Odd),
            "even" => Some(Parity::Even),
            _ => None,
        }
    }
}

/// Discretization of the strip `[-lx, lx) x (0, 1)` together with the viscosity.
///
/// Horizontal wavenumbers are `xi_j = pi j / lx` for `j` in `-nx/2 .. nx/2`;
/// they are stored in FFT order (non-negative `j` first). Vertical modes are
/// `k pi` with `k` in `1..ny` for sine fields and `0..=ny` for cosine fields.
/// The sine mode `k = ny` vanishes on every collocation node, so like the
/// horizontal Nyquist column it is held at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripGrid {
    lx: f64,
    nx: usize,
    ny: usize,
    nu: f64,
}

impl StripGrid {
    pub fn new(lx: f64, nx: usize, ny: usize, nu: f64) -> Result<Self> {
        if !(lx.is_finite() && lx > 0.0) {
            return Err(Error::InvalidGrid(format!("half width lx must be positive, got {lx}")));
        }
        if nx < 4 || !nx.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("nx must be even and at least 4, got {nx}")));
        }
        if ny < 2 {
            return Err(Error::InvalidGrid(format!("ny must be at least 2, got {ny}")));
        }
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidGrid(format!("viscosity nu must be positive, got {nu}")));
        }
        Ok(StripGrid { lx, nx, ny, nu })
    }

    /// Desk-scale default: `lx = 200 pi`, `nx = 1024`, `ny = 32`, `nu = 1`.
    pub fn desk_default() -> Self {
        StripGrid {
            lx: 200.0 * PI,
            nx: 1024,
            ny: 32,
            nu: 1.0,
        }
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn with_nu(self, nu: f64) -> Result<Self> {
        StripGrid::new(self.lx, self.nx, self.ny, nu)
    }

    /// Number of coefficient rows (`k = 0..=ny`).
    pub fn rows(&self) -> usize {
        self.ny + 1
    }

    pub fn len(&self) -> usize {
        self.rows() * self.nx
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Frequency spacing `pi / lx`; the quadrature weight of every `L^p` sum.
    pub fn dxi(&self) -> f64 {
        PI / self.lx
    }

    /// Signed mode index `j` of storage column `idx`.
    pub fn mode_index(&self, idx: usize) -> i64 {
        debug_assert!(idx < self.nx);
        if idx < self.nx / 2 {
            idx as i64
        } else {
            idx as i64 - self.nx as i64
        }
    }

    /// Storage column of the signed mode index `j`.
    pub fn column(&self, j: i64) -> Option<usize> {
        let half = (self.nx / 2) as i64;
        if j < -half || j >= half {
            return None;
        }
        Some(if j >= 0 {
            j as usize
        } else {
            (j + self.nx as i64) as usize
        })
    }

    pub fn nyquist_column(&self) -> usize {
        self.nx / 2
    }

    pub fn xi(&self, idx: usize) -> f64 {
        self.mode_index(idx) as f64 * self.dxi()
    }

    pub fn xi_max(&self) -> f64 {
        (self.nx / 2 - 1) as f64 * self.dxi()
    }

    pub fn x_node(&self, m: usize) -> f64 {
        -self.lx + 2.0 * self.lx * m as f64 / self.nx as f64
    }

    pub fn y_node(&self, n: usize) -> f64 {
        n as f64 / self.ny as f64
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    /// Whether row `k` may carry coefficients for the given parity.
    pub fn row_active(&self, parity: Parity, k: usize) -> bool {
        match parity {
            Parity::Odd => k >= 1 && k < self.ny,
            Parity::Even => k <= self.ny,
        }
    }

    /// Symbol of `-Delta` at storage column `idx`, row `k`.
    pub fn laplace_symbol(&self, idx: usize, k: usize) -> f64 {
        let xi = self.xi(idx);
        xi * xi + PI * PI * (k * k) as f64
    }

    /// Grid with doubled mode counts in both directions and the same `lx`.
    pub fn refined(&self, factor: usize) -> Self {
        StripGrid {
            lx: self.lx,
            nx: self.nx * factor,
            ny: self.ny * factor,
            nu: self.nu,
        }
    }

    /// Upper end of the window in which the lowest nonzero frequency has not
    /// yet turned algebraic decay into exponential decay: `0.1 nu (lx/pi)^2`.
    pub fn honesty_horizon(&self) -> f64 {
        0.1 * self.nu / (self.dxi() * self.dxi())
    }
}
