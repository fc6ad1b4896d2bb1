//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Bisection on [a, b] until the bracket is narrower than `width` or the
/// midpoint stops moving. `f(a)` and `f(b)` must differ in sign.
pub fn bisect<F>(mut f: F, a: f64, b: f64, width: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracketing(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == count - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

/// Scan `grid` for the first sign change of `f` and bisect it.
pub fn scan_and_bisect<F>(mut f: F, grid: &[f64], width: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let v = f(x)?;
        if v == 0.0 {
            return Ok(x);
        }
        if let Some((px, pv)) = prev {
            if pv.signum() != v.signum() {
                return bisect(f, px, x, width);
            }
        }
        prev = Some((x, v));
    }
    Err(Error::Bracketing("no sign change on the scan grid".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn reports_missing_bracket() {
        assert!(matches!(bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12), Err(Error::Bracketing(_))));
        assert!(scan_and_bisect(|x| Ok(x + 1.0), &log_grid(1e-3, 2.0, 20), 1e-12).is_err());
    }

    #[test]
    fn scan_finds_first_root() {
        let g = log_grid(1e-3, 10.0, 50);
        assert_eq!(g[49], 10.0);
        let r = scan_and_bisect(|x| Ok((x - 0.5) * (x - 3.0)), &g, 1e-13).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
    }
}
