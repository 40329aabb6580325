use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Parity, StripGrid};

/// Coefficients `f^(xi_j, k)` of a field on the strip.
///
/// The synthesis convention is
/// `f(x, y) = (dxi / sqrt(pi)) sum_j sum_k c(j, k) exp(i xi_j x) b_k(y)`
/// with `b_k = sin(k pi y)` (odd) or `cos(k pi y)` (even), which makes the
/// coefficients samples of the continuum transform and gives
/// `||f||_{L^2}^2 = dxi sum |c|^2` for sine fields.
///
/// Storage is row-major with one row per `k` (`0..=ny`) and columns in FFT
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: StripGrid,
    parity: Parity,
    coeff: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: StripGrid, parity: Parity) -> Self {
        SpectralField {
            grid,
            parity,
            coeff: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Builds a field from `coef(j, xi_j, k)` over the active rows. The
    /// Nyquist column and inactive rows stay zero; Hermitian symmetry is the
    /// caller's business (see [`SpectralField::enforce_hermitian`]).
    pub fn from_fn(grid: StripGrid, parity: Parity, mut coef: impl FnMut(i64, f64, usize) -> Complex64) -> Self {
        let mut f = SpectralField::zeros(grid, parity);
        let nyq = grid.nyquist_column();
        for k in 0..grid.rows() {
            if !grid.row_active(parity, k) {
                continue;
            }
            for idx in 0..grid.nx() {
                if idx == nyq {
                    continue;
                }
                f.coeff[k * grid.nx() + idx] = coef(grid.mode_index(idx), grid.xi(idx), k);
            }
        }
        f
    }

    pub(crate) fn from_raw(grid: StripGrid, parity: Parity, coeff: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeff.len(), grid.len());
        SpectralField { grid, parity, coeff }
    }

    pub fn grid(&self) -> &StripGrid {
        &self.grid
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeff(&self) -> &[Complex64] {
        &self.coeff
    }

    pub fn coeff_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeff
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        let nx = self.grid.nx();
        &self.coeff[k * nx..(k + 1) * nx]
    }

    /// Coefficient at signed mode `j`, row `k`; zero outside the lattice.
    pub fn get(&self, j: i64, k: usize) -> Complex64 {
        match self.grid.column(j) {
            Some(idx) if k < self.grid.rows() => self.coeff[k * self.grid.nx() + idx],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn set(&mut self, j: i64, k: usize, value: Complex64) -> Result<()> {
        let idx = self
            .grid
            .column(j)
            .ok_or_else(|| Error::invalid(format!("mode index j = {j} outside the lattice")))?;
        if !self.grid.row_active(self.parity, k) {
            return Err(Error::invalid(format!(
                "row k = {k} is not representable for {} parity",
                self.parity.name()
            )));
        }
        if idx == self.grid.nyquist_column() {
            return Err(Error::invalid("the Nyquist column is held at zero"));
        }
        self.coeff[k * self.grid.nx() + idx] = value;
        Ok(())
    }

    /// Projects onto real-valued fields: `c(-j) = conj c(j)`, a real `j = 0`
    /// column, zero Nyquist column and zero inactive rows.
    pub fn enforce_hermitian(&mut self) {
        let nx = self.grid.nx();
        let zero = Complex64::new(0.0, 0.0);
        for k in 0..self.grid.rows() {
            let row = &mut self.coeff[k * nx..(k + 1) * nx];
            if !self.grid.row_active(self.parity, k) {
                row.fill(zero);
                continue;
            }
            row[0] = Complex64::new(row[0].re, 0.0);
            row[nx / 2] = zero;
            for idx in 1..nx / 2 {
                let avg = 0.5 * (row[idx] + row[nx - idx].conj());
                row[idx] = avg;
                row[nx - idx] = avg.conj();
            }
        }
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let nx = self.grid.nx();
        let mut worst = 0.0f64;
        for k in 0..self.grid.rows() {
            let row = self.row(k);
            worst = worst.max(row[0].im.abs()).max(row[nx / 2].norm());
            for idx in 1..nx / 2 {
                worst = worst.max((row[idx] - row[nx - idx].conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.coeff.iter().fold(0.0f64, |m, c| m.max(c.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeff.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// First non-finite coefficient as `(j, k)`.
    pub fn first_non_finite(&self) -> Option<(i64, usize)> {
        let nx = self.grid.nx();
        self.coeff
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
            .map(|pos| (self.grid.mode_index(pos % nx), pos / nx))
    }

    pub fn ensure_parity(&self, expected: Parity) -> Result<()> {
        if self.parity != expected {
            return Err(Error::ParityMismatch {
                expected,
                found: self.parity,
            });
        }
        Ok(())
    }

    pub fn ensure_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    fn ensure_compatible(&self, other: &SpectralField) -> Result<()> {
        self.ensure_same_grid(other)?;
        other.ensure_parity(self.parity)
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        out.coeff.iter_mut().for_each(|c| *c *= a);
        out
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: Complex64, x: &SpectralField) -> Result<()> {
        self.ensure_compatible(x)?;
        for (c, xc) in self.coeff.iter_mut().zip(&x.coeff) {
            *c += a * xc;
        }
        Ok(())
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other)?;
        Ok(out)
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), other)?;
        Ok(out)
    }

    /// Multiplies every active coefficient by `symbol(xi, k)`.
    pub fn map_symbol(&self, mut symbol: impl FnMut(f64, usize) -> Complex64) -> SpectralField {
        let mut out = self.clone();
        let nx = self.grid.nx();
        for k in 0..self.grid.rows() {
            for idx in 0..nx {
                let c = &mut out.coeff[k * nx + idx];
                if *c != Complex64::new(0.0, 0.0) {
                    *c *= symbol(self.grid.xi(idx), k);
                }
            }
        }
        out
    }

    /// Row weight turning coefficient sums into physical `L^2` products:
    /// cosine rows `k = 0` and `k = ny` carry twice the sine weight.
    pub(crate) fn row_weight(&self, k: usize) -> f64 {
        match self.parity {
            Parity::Odd => 1.0,
            Parity::Even if k == 0 || k == self.grid.ny() => 2.0,
            Parity::Even => 1.0,
        }
    }

    /// Physical `L^2` inner product evaluated in coefficient space.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        self.ensure_compatible(other)?;
        Ok(self.weighted_inner(other, |_, _| 1.0))
    }

    /// `<grad f, grad g>` evaluated in coefficient space.
    pub fn gradient_inner(&self, other: &SpectralField) -> Result<f64> {
        self.ensure_compatible(other)?;
        let g = self.grid;
        Ok(self.weighted_inner(other, |idx, k| g.laplace_symbol(idx, k)))
    }

    fn weighted_inner(&self, other: &SpectralField, weight: impl Fn(usize, usize) -> f64) -> f64 {
        let nx = self.grid.nx();
        let rows: Vec<f64> = (0..self.grid.rows())
            .map(|k| {
                let a = &self.coeff[k * nx..(k + 1) * nx];
                let b = &other.coeff[k * nx..(k + 1) * nx];
                let s: f64 = a
                    .iter()
                    .zip(b)
                    .enumerate()
                    .map(|(idx, (x, y))| weight(idx, k) * (x * y.conj()).re)
                    .sum();
                self.row_weight(k) * s
            })
            .collect();
        self.grid.dxi() * rows.iter().sum::<f64>()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.weighted_inner(self, |_, _| 1.0)
    }

    /// Keeps modes with `|j| <= fraction nx / 2` and `k <= fraction ny`.
    pub fn truncated(&self, fraction: f64) -> SpectralField {
        let mut out = self.clone();
        out.apply_band_limit(fraction);
        out
    }

    pub fn apply_band_limit(&mut self, fraction: f64) {
        let nx = self.grid.nx();
        let jmax = fraction * (nx / 2) as f64;
        let kmax = fraction * self.grid.ny() as f64;
        let zero = Complex64::new(0.0, 0.0);
        for k in 0..self.grid.rows() {
            for idx in 0..nx {
                let j = self.grid.mode_index(idx).unsigned_abs() as f64;
                if j > jmax || k as f64 > kmax {
                    self.coeff[k * nx + idx] = zero;
                }
            }
        }
    }

    /// Re-embeds the coefficients on a grid with at least as many modes and
    /// the same `lx` (zero padding).
    pub fn padded_to(&self, target: StripGrid) -> Result<SpectralField> {
        if target.lx() != self.grid.lx() || target.nx() < self.grid.nx() || target.ny() < self.grid.ny() {
            return Err(Error::invalid(
                "padding target must share lx and have at least as many modes",
            ));
        }
        let mut out = SpectralField::zeros(target, self.parity);
        for k in 0..self.grid.rows() {
            for idx in 0..self.grid.nx() {
                let c = self.coeff[k * self.grid.nx() + idx];
                if c == Complex64::new(0.0, 0.0) || !target.row_active(self.parity, k) {
                    continue;
                }
                let tidx = target
                    .column(self.grid.mode_index(idx))
                    .expect("padded lattice contains the original one");
                out.coeff[k * target.nx() + tidx] = c;
            }
        }
        Ok(out)
    }
}

/// Samples of a field on the collocation nodes `x_m = -lx + 2 lx m / nx`,
/// `y_n = n / ny` (both walls included). Row-major, one row per `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: StripGrid,
    parity: Parity,
    values: Vec<f64>,
}

impl PhysicalField {
    pub fn new(grid: StripGrid, parity: Parity, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(PhysicalField { grid, parity, values })
    }

    pub fn from_fn(grid: StripGrid, parity: Parity, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for n in 0..grid.rows() {
            let y = grid.y_node(n);
            for m in 0..grid.nx() {
                values.push(f(grid.x_node(m), y));
            }
        }
        PhysicalField { grid, parity, values }
    }

    pub fn grid(&self) -> &StripGrid {
        &self.grid
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn at(&self, m: usize, n: usize) -> f64 {
        self.values[n * self.grid.nx() + m]
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[n * nx..(n + 1) * nx]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn boundary_max_abs(&self) -> f64 {
        let top = self.grid.ny();
        self.row(0)
            .iter()
            .chain(self.row(top))
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Pointwise product. Even times odd is odd, equal parities give even.
    pub fn product(&self, other: &PhysicalField) -> Result<PhysicalField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let parity = if self.parity == other.parity {
            Parity::Even
        } else {
            Parity::Odd
        };
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(PhysicalField {
            grid: self.grid,
            parity,
            values,
        })
    }

    /// `self += other`, parities must agree.
    pub fn add_assign(&mut self, other: &PhysicalField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.parity != other.parity {
            return Err(Error::ParityMismatch {
                expected: self.parity,
                found: other.parity,
            });
        }
        self.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a += b);
        Ok(())
    }

    /// Rectangle rule in `x`, trapezoid rule in `y`, applied to `g(value)`.
    pub fn quadrature(&self, g: impl Fn(f64) -> f64) -> f64 {
        let nx = self.grid.nx();
        let top = self.grid.ny();
        let rows: Vec<f64> = (0..self.grid.rows())
            .map(|n| {
                let w = if n == 0 || n == top { 0.5 } else { 1.0 };
                w * self.values[n * nx..(n + 1) * nx].iter().map(|&v| g(v)).sum::<f64>()
            })
            .collect();
        rows.iter().sum::<f64>() * self.grid.dx() * self.grid.dy()
    }
}
