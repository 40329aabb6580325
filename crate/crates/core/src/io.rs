//! Plain-text file formats.
//!
//! A field snapshot is a header of `# key=value` lines (`t`, `nx`, `ny`,
//! `lx`, `nu`, `parity`) followed by a CSV table `j,k,re,im` over every
//! representable mode. Floats are written in shortest round-trip form, so
//! reading a snapshot back reproduces it bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::diagnostics::{DecayCurve, LadderResult, RateFit};
use crate::error::{Error, Result};
use crate::grid::{Parity, StripGrid};
use crate::propagator::Region;
use crate::spectral::SpectralField;
use crate::state::FlowState;

pub fn write_field(path: &Path, t: f64, f: &SpectralField) -> Result<()> {
    let g = f.grid();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# t={t:e}")?;
    writeln!(w, "# nx={}", g.nx())?;
    writeln!(w, "# ny={}", g.ny())?;
    writeln!(w, "# lx={:e}", g.lx())?;
    writeln!(w, "# nu={:e}", g.nu())?;
    writeln!(w, "# parity={}", f.parity().name())?;
    writeln!(w, "j,k,re,im")?;
    for k in 0..g.rows() {
        if !g.row_active(f.parity(), k) {
            continue;
        }
        for idx in 0..g.nx() {
            if idx == g.nyquist_column() {
                continue;
            }
            let c = f.row(k)[idx];
            writeln!(w, "{},{},{:e},{:e}", g.mode_index(idx), k, c.re, c.im)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn format_err(line: usize, message: impl Into<String>) -> Error {
    Error::Format {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| format_err(line, format!("cannot parse {what} from '{s}'")))
}

/// Reads a file written by [`write_field`], returning its time stamp.
pub fn read_field(path: &Path) -> Result<(f64, SpectralField)> {
    let reader = BufReader::new(File::open(path)?);
    let mut header = std::collections::BTreeMap::new();
    let mut field: Option<SpectralField> = None;
    let mut t = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .trim()
                .split_once('=')
                .ok_or_else(|| format_err(lineno, "header line without '='"))?;
            header.insert(key.trim().to_string(), value.trim().to_string());
            continue;
        }
        if line.trim() == "j,k,re,im" {
            let get = |key: &str| {
                header
                    .get(key)
                    .cloned()
                    .ok_or_else(|| format_err(lineno, format!("missing header key '{key}'")))
            };
            let grid = StripGrid::new(
                parse_num(&get("lx")?, lineno, "lx")?,
                parse_num(&get("nx")?, lineno, "nx")?,
                parse_num(&get("ny")?, lineno, "ny")?,
                parse_num(&get("nu")?, lineno, "nu")?,
            )?;
            let parity =
                Parity::parse(&get("parity")?).ok_or_else(|| format_err(lineno, "parity must be 'odd' or 'even'"))?;
            t = Some(parse_num::<f64>(&get("t")?, lineno, "t")?);
            field = Some(SpectralField::zeros(grid, parity));
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f = field
            .as_mut()
            .ok_or_else(|| format_err(lineno, "data row before the table header"))?;
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(format_err(lineno, "expected four columns j,k,re,im"));
        }
        let j: i64 = parse_num(cols[0], lineno, "j")?;
        let k: usize = parse_num(cols[1], lineno, "k")?;
        let c = Complex64::new(parse_num(cols[2], lineno, "re")?, parse_num(cols[3], lineno, "im")?);
        f.set(j, k, c).map_err(|e| format_err(lineno, e.to_string()))?;
    }
    match (t, field) {
        (Some(t), Some(f)) => Ok((t, f)),
        _ => Err(format_err(0, "no coefficient table found")),
    }
}

/// Writes `<stem>_omega.csv` and `<stem>_theta.csv` into `dir`.
pub fn write_snapshot(dir: &Path, stem: &str, state: &FlowState) -> Result<Vec<PathBuf>> {
    let omega = dir.join(format!("{stem}_omega.csv"));
    let theta = dir.join(format!("{stem}_theta.csv"));
    write_field(&omega, state.t, &state.omega)?;
    write_field(&theta, state.t, &state.theta)?;
    Ok(vec![omega, theta])
}

pub fn read_snapshot(dir: &Path, stem: &str) -> Result<FlowState> {
    let (t, omega) = read_field(&dir.join(format!("{stem}_omega.csv")))?;
    let (t2, theta) = read_field(&dir.join(format!("{stem}_theta.csv")))?;
    if t.to_bits() != t2.to_bits() {
        return Err(Error::invalid(format!("snapshot halves disagree on time: {t} vs {t2}")));
    }
    FlowState::new(t, omega, theta)
}

/// Long-format table `t,norm_id,value`.
pub fn write_curves_long(path: &Path, curves: &[DecayCurve]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,norm_id,value")?;
    for c in curves {
        for (t, v) in c.times.iter().zip(&c.values) {
            writeln!(w, "{t:e},{},{v:e}", c.label)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Two-column table `t,value`.
pub fn write_curve(path: &Path, curve: &DecayCurve) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "t,value")?;
    for (t, v) in curve.times.iter().zip(&curve.values) {
        writeln!(w, "{t:e},{v:e}")?;
    }
    w.flush()?;
    Ok(())
}

/// Table `xi,k,region`.
pub fn write_regions(path: &Path, dump: &[(f64, usize, Region)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "xi,k,region")?;
    for (xi, k, r) in dump {
        writeln!(w, "{xi:e},{k},{}", r.name())?;
    }
    w.flush()?;
    Ok(())
}

/// One `label: {fit}` line per result, plus the expected exponent.
pub fn write_fits(path: &Path, results: &[LadderResult]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in results {
        writeln!(
            w,
            "{}: {} expected={:e}",
            r.curve.label,
            r.fit.to_kv(),
            r.entry.expected
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Parses the key/value text of [`RateFit::to_kv`].
pub fn parse_fit(text: &str) -> Result<RateFit> {
    let body = text
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| format_err(1, "fit summary must be enclosed in braces"))?;
    let mut get = std::collections::BTreeMap::new();
    for part in body.split(',') {
        let (k, v) = part
            .split_once(':')
            .ok_or_else(|| format_err(1, format!("malformed entry '{part}'")))?;
        get.insert(k.trim().trim_matches('"').to_string(), parse_num::<f64>(v, 1, k)?);
    }
    let take = |k: &str| {
        get.get(k)
            .copied()
            .ok_or_else(|| format_err(1, format!("missing key '{k}'")))
    };
    Ok(RateFit {
        exponent: take("exponent")?,
        intercept: take("intercept")?,
        r_squared: take("r2")?,
        window: (take("t_min")?, take("t_max")?),
        samples: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn snapshot_round_trip_is_bit_exact() {
        let g = StripGrid::new(7.3, 16, 5, 0.37).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut mk = || {
            let mut f = SpectralField::from_fn(g, Parity::Odd, |_, _, _| {
                Complex64::new(rng.gen::<f64>() * 1e-7, rng.gen::<f64>() - 0.5)
            });
            f.enforce_hermitian();
            f
        };
        let state = FlowState::new(0.1 + 0.2, mk(), mk()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        write_snapshot(dir.path(), "s", &state).unwrap();
        let back = read_snapshot(dir.path(), "s").unwrap();
        assert_eq!(back.t.to_bits(), state.t.to_bits());
        for (a, b) in back.omega.coeff().iter().zip(state.omega.coeff()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(back, state);
    }

    #[test]
    fn fit_summary_round_trip() {
        let fit = RateFit {
            exponent: -0.2512,
            intercept: 1.5,
            r_squared: 0.999,
            window: (10.0, 1e4),
            samples: 40,
        };
        let back = parse_fit(&fit.to_kv()).unwrap();
        assert_eq!(back.exponent, fit.exponent);
        assert_eq!(back.window, fit.window);
    }
}
