use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

use crate::numerics::{geometric, least_squares, power_law_order};

/// Fitted order `m` in `|∂_r^k f| ~ r^{−m−k}` for one derivative count `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub k: usize,
    /// Fitted `m` (the derivative's own exponent minus `k`).
    pub order: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayOptions {
    pub samples: usize,
    /// Samples with `|f|` below this are discarded.
    pub floor: f64,
    pub k_max: usize,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self {
            samples: 40,
            floor: 1e-290,
            k_max: 2,
        }
    }
}

/// Derivative of order 0, 1 or 2 by a fourth-order centered stencil with
/// step `0.02·r`.
fn derivative<F: Fn(f64) -> f64>(f: &F, r: f64, k: usize) -> f64 {
    let h = 0.02 * r;
    match k {
        0 => f(r),
        1 => (f(r - 2.0 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2.0 * h)) / (12.0 * h),
        2 => (-f(r - 2.0 * h) + 16.0 * f(r - h) - 30.0 * f(r) + 16.0 * f(r + h) - f(r + 2.0 * h)) / (12.0 * h * h),
        _ => panic!("derivatives beyond second order are not sampled"),
    }
}

/// Least-squares order of a sampled function of one variable.
pub fn fit_order(rs: &[f64], fs: &[f64], floor: f64) -> Result<(f64, f64)> {
    let (r, f): (Vec<f64>, Vec<f64>) = rs
        .iter()
        .zip(fs)
        .filter(|(_, f)| f.abs() > floor && f.is_finite())
        .map(|(r, f)| (*r, *f))
        .unzip();
    if r.len() < 3 || 2 * r.len() < rs.len() {
        return Err(Error::BelowFloor { floor });
    }
    power_law_order(&r, &f)
}

/// Order `m` from `ln|f| ≈ c − m ln r + b₁/r + b₂/r²`, which absorbs the
/// subleading powers that bias a plain log-log slope. Returns `(m, rms)`.
pub fn corrected_order(rs: &[f64], fs: &[f64], floor: f64) -> Result<(f64, f64)> {
    let (r, f): (Vec<f64>, Vec<f64>) = rs
        .iter()
        .zip(fs)
        .filter(|(_, f)| f.abs() > floor && f.is_finite())
        .map(|(r, f)| (*r, *f))
        .unzip();
    if r.len() < 6 || 2 * r.len() < rs.len() {
        return Err(Error::BelowFloor { floor });
    }
    let design = DMatrix::from_fn(r.len(), 4, |i, j| match j {
        0 => 1.0,
        1 => r[i].ln(),
        2 => 1.0 / r[i],
        _ => 1.0 / (r[i] * r[i]),
    });
    let y = DVector::from_iterator(f.len(), f.iter().map(|v| v.abs().ln()));
    let fit = least_squares(&design, &y)?;
    Ok((-fit.coeffs[1], fit.rms_residual))
}

/// Decay orders of `f` and its first `k_max` radial derivatives over a
/// geometric sample on `[r1, r2]`.
pub fn decay_order<F: Fn(f64) -> f64>(f: F, r1: f64, r2: f64, opts: DecayOptions) -> Result<Vec<DecayFit>> {
    let rs = geometric(r1, r2, opts.samples);
    let mut out = Vec::with_capacity(opts.k_max + 1);
    for k in 0..=opts.k_max {
        let fs: Vec<f64> = rs.iter().map(|&r| derivative(&f, r, k)).collect();
        let (order, residual) = fit_order(&rs, &fs, opts.floor)?;
        out.push(DecayFit {
            k,
            order: order - k as f64,
            residual,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power() {
        let fits = decay_order(|r| r.powi(-3), 10.0, 1e3, DecayOptions::default()).unwrap();
        for fit in fits {
            assert!((fit.order - 3.0).abs() < 0.01, "{fit:?}");
        }
    }

    #[test]
    fn dominant_term() {
        let fits = decay_order(|r| r.powi(-3) + 5.0 * r.powi(-7), 1e2, 1e4, DecayOptions::default()).unwrap();
        assert!((fits[0].order - 3.0).abs() < 0.05);
    }

    #[test]
    fn corrected_fit_handles_sign_change_nearby() {
        let rs = geometric(1e3, 1e5, 24);
        let fs: Vec<f64> = rs.iter().map(|r| r.powi(-4) * (0.02 - 1.2 / r)).collect();
        let (m, _) = corrected_order(&rs, &fs, 1e-300).unwrap();
        assert!((m - 4.0).abs() < 1e-3, "{m}");
    }

    #[test]
    fn zero_is_below_floor() {
        assert!(matches!(
            decay_order(|_| 0.0, 10.0, 1e3, DecayOptions::default()),
            Err(Error::BelowFloor { .. })
        ));
    }
}
