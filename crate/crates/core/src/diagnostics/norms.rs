use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::{derivative_x, derivative_y, to_physical, SpectralField};

/// Summation rule of a norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    /// `sqrt(dxi sum |w c|^2)`.
    L2Hat,
    /// `dxi sum |w c|`, which bounds the maximum of the field.
    L1Hat,
    /// `sqrt(dxi sum (1 + xi^2 + pi^2 k^2)^m |w c|^2)`.
    Hm(u32),
    /// Maximum of the weighted field on a twice refined node set.
    Linf,
}

/// Derivative weight applied to the coefficients before summation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    One,
    /// `|xi|`, i.e. `d_x`.
    Xi,
    /// `xi^2`, i.e. `d_xx`.
    Xi2,
    /// `k pi`, i.e. `d_y`.
    KPi,
    /// `|xi| k pi`, i.e. `d_xy`.
    XiKPi,
}

impl Weight {
    pub fn factor(self, xi: f64, k: usize) -> f64 {
        let kp = PI * k as f64;
        match self {
            Weight::One => 1.0,
            Weight::Xi => xi.abs(),
            Weight::Xi2 => xi * xi,
            Weight::KPi => kp,
            Weight::XiKPi => xi.abs() * kp,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Weight::One => "1",
            Weight::Xi => "xi",
            Weight::Xi2 => "xi2",
            Weight::KPi => "kpi",
            Weight::XiKPi => "xikpi",
        }
    }

    fn apply_derivatives(self, f: &SpectralField) -> SpectralField {
        match self {
            Weight::One => f.clone(),
            Weight::Xi => derivative_x(f),
            Weight::Xi2 => derivative_x(&derivative_x(f)),
            Weight::KPi => derivative_y(f),
            Weight::XiKPi => derivative_x(&derivative_y(f)),
        }
    }
}

/// A norm: summation rule plus derivative weight. Written as `l2hat`,
/// `l1hat:xi`, `h4`, `h2:xi`, `linf:kpi` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NormId {
    pub kind: NormKind,
    pub weight: Weight,
}

impl NormId {
    pub const fn new(kind: NormKind, weight: Weight) -> Self {
        NormId { kind, weight }
    }

    /// Combined multiplier of `|c(xi, k)|` inside the sum.
    pub fn mode_weight(&self, xi: f64, k: usize) -> f64 {
        let w = self.weight.factor(xi, k);
        match self.kind {
            NormKind::Hm(m) => w * (1.0 + xi * xi + PI * PI * (k * k) as f64).powf(0.5 * m as f64),
            _ => w,
        }
    }

    /// Whether the norm sums squares (`L2Hat`, `Hm`) or magnitudes (`L1Hat`).
    pub fn is_quadratic(&self) -> bool {
        matches!(self.kind, NormKind::L2Hat | NormKind::Hm(_))
    }

    /// Turns a quadrature of `|w c|^q` (with `q` from [`NormId::is_quadratic`])
    /// into the norm value.
    pub fn finish(&self, sum: f64) -> f64 {
        if self.is_quadratic() {
            sum.max(0.0).sqrt()
        } else {
            sum
        }
    }
}

impl fmt::Display for NormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NormKind::L2Hat => write!(f, "l2hat")?,
            NormKind::L1Hat => write!(f, "l1hat")?,
            NormKind::Hm(m) => write!(f, "h{m}")?,
            NormKind::Linf => write!(f, "linf")?,
        }
        if self.weight != Weight::One {
            write!(f, ":{}", self.weight.name())?;
        }
        Ok(())
    }
}

impl FromStr for NormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, weight) = s.split_once(':').unwrap_or((s, "1"));
        let kind = match kind {
            "l2hat" => NormKind::L2Hat,
            "l1hat" => NormKind::L1Hat,
            "linf" => NormKind::Linf,
            h if h.starts_with('h') => NormKind::Hm(
                h[1..]
                    .parse()
                    .map_err(|_| Error::invalid(format!("unknown norm kind '{h}'")))?,
            ),
            other => return Err(Error::invalid(format!("unknown norm kind '{other}'"))),
        };
        let weight = match weight {
            "1" => Weight::One,
            "xi" => Weight::Xi,
            "xi2" => Weight::Xi2,
            "kpi" => Weight::KPi,
            "xikpi" => Weight::XiKPi,
            other => return Err(Error::invalid(format!("unknown norm weight '{other}'"))),
        };
        Ok(NormId { kind, weight })
    }
}

/// Evaluates a norm of a coefficient field. Row sums run in parallel and
/// are combined in row order, so the result is reproducible bit for bit.
pub fn norm(f: &SpectralField, id: NormId) -> f64 {
    if id.kind == NormKind::Linf {
        let weighted = id.weight.apply_derivatives(f);
        let fine = weighted
            .padded_to(f.grid().refined(2))
            .expect("refined grid contains the original lattice");
        return to_physical(&fine).max_abs();
    }
    let grid = *f.grid();
    let nx = grid.nx();
    let quadratic = id.is_quadratic();
    let rows: Vec<f64> = f
        .coeff()
        .par_chunks(nx)
        .enumerate()
        .map(|(k, row)| {
            row.iter()
                .enumerate()
                .map(|(idx, c): (usize, &Complex64)| {
                    let a = id.mode_weight(grid.xi(idx), k) * c.norm();
                    if quadratic {
                        a * a
                    } else {
                        a
                    }
                })
                .sum::<f64>()
        })
        .collect();
    id.finish(grid.dxi() * rows.iter().sum::<f64>())
}
