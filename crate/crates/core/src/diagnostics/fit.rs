use crate::error::{Error, Result};

/// Minimum number of samples inside a fit window.
pub const MIN_FIT_SAMPLES: usize = 8;

/// A norm sampled at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurve {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl DecayCurve {
    pub fn new(label: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid("curve needs one value per time"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("curve times must be strictly increasing"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("curve value {v} is not finite")));
        }
        Ok(DecayCurve {
            label: label.into(),
            times,
            values,
        })
    }
}

/// Power law `value ~ exp(intercept) t^exponent` fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

impl RateFit {
    /// Key/value summary with the fixed keys `exponent`, `intercept`, `r2`,
    /// `t_min`, `t_max`.
    pub fn to_kv(&self) -> String {
        format!(
            "{{ \"exponent\": {:e}, \"intercept\": {:e}, \"r2\": {:e}, \"t_min\": {:e}, \"t_max\": {:e} }}",
            self.exponent, self.intercept, self.r_squared, self.window.0, self.window.1
        )
    }
}

/// Least-squares line through `(ln t, ln value)` for the samples with
/// `t_min <= t <= t_max`.
///
/// Values are normalized by the first sample in the window before taking
/// logarithms, so scaling a curve by a power of two leaves the exponent
/// bit-identical and only moves the intercept.
pub fn fit_rate(curve: &DecayCurve, window: (f64, f64)) -> Result<RateFit> {
    let (t_min, t_max) = window;
    if !(t_min > 0.0 && t_max > t_min) {
        return Err(Error::invalid(format!(
            "fit window ({t_min}, {t_max}) is not a positive interval"
        )));
    }
    let picked: Vec<(f64, f64)> = curve
        .times
        .iter()
        .zip(&curve.values)
        .filter(|(t, _)| **t >= t_min && **t <= t_max)
        .map(|(t, v)| (*t, *v))
        .collect();
    if picked.len() < MIN_FIT_SAMPLES {
        return Err(Error::TooFewSamples {
            found: picked.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    if let Some(&(t, value)) = picked.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::NonPositive { t, value });
    }
    let reference = picked[0].1;
    let xs: Vec<f64> = picked.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = picked.iter().map(|(_, v)| (v / reference).ln()).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let slope = sxy / sxx;
    let offset = ym - slope * xm;
    let ss_tot: f64 = ys.iter().map(|y| (y - ym) * (y - ym)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (offset + slope * x);
            r * r
        })
        .sum();
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(RateFit {
        exponent: slope,
        intercept: offset + reference.ln(),
        r_squared,
        window,
        samples: picked.len(),
    })
}

/// `n` logarithmically spaced times from `a` to `b` inclusive.
pub fn log_times(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}
