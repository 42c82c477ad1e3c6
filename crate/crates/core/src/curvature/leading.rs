use serde::Serialize;

use super::warped::scalar_deficit;
use crate::error::{Error, Result};
use crate::metric::{MetricSpec, Point};
use crate::numerics::{geometric, poly_fit};

/// Fitted leading coefficient of `R(g) + n(n−1) ≈ c·r^{1−n}` at fixed
/// angles, next to the value `tr_{h₀}θ` predicted by the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingCoefficient {
    pub fitted: f64,
    pub predicted: f64,
    pub residual: f64,
}

/// Relative residual above which the fit is rejected.
pub const LEADING_FIT_TOL: f64 = 1e-6;

/// `2(n−1)(u_{n−1} + v_{n−1}(ξ) + tr w_{n−1}(ξ, φ))`.
pub fn predicted_trace_theta(spec: &MetricSpec, angles: &[f64]) -> f64 {
    let n = spec.n() as u32;
    let tr_w = spec.w_coeff(n - 1).trace().eval(angles);
    let v = spec.v_coeff(n - 1).eval(&angles[..1]);
    2.0 * (n as f64 - 1.0) * (spec.u_coeff(n - 1) + v + tr_w)
}

/// Fits `r^{n−1}(R + n(n−1))` by a quadratic in `1/r` on `[50, 5000]·r₊`.
pub fn scalar_deficit_leading(spec: &MetricSpec, angles: &[f64]) -> Result<LeadingCoefficient> {
    let n = spec.n();
    let rp = spec.r_plus().max(1.0);
    let rs = geometric(50.0 * rp, 5000.0 * rp, 24);
    let mut xs = Vec::with_capacity(rs.len());
    let mut ys = Vec::with_capacity(rs.len());
    for &r in &rs {
        let d = scalar_deficit(spec, &Point::new(r, angles.to_vec()))?;
        xs.push(1.0 / r);
        ys.push(d * r.powi(n as i32 - 1));
    }
    let fit = poly_fit(&xs, &ys, 3)?;
    let c = fit.coeffs[0];
    let scale = ys.iter().fold(1.0_f64, |m, y| m.max(y.abs()));
    if fit.rms_residual > LEADING_FIT_TOL * scale {
        return Err(Error::FitUnstable(format!(
            "leading-coefficient residual {:e} exceeds {:e}",
            fit.rms_residual,
            LEADING_FIT_TOL * scale
        )));
    }
    Ok(LeadingCoefficient {
        fitted: c,
        predicted: predicted_trace_theta(spec, angles),
        residual: fit.rms_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BackgroundParams;

    #[test]
    fn u_only() {
        let bg = BackgroundParams::with_unit_torus(3, 0.0, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        spec.set_u(2, 0.1);
        let l = scalar_deficit_leading(&spec, &[0.0, 0.0]).unwrap();
        assert!((l.fitted - 0.4).abs() < 1e-3, "{l:?}");
        assert!((l.predicted - 0.4).abs() < 1e-15);
    }

    #[test]
    fn cancelling_u_and_v() {
        let bg = BackgroundParams::with_unit_torus(4, 0.3, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        spec.set_u(3, 0.1);
        spec.add_v_const(3, -0.1);
        let l = scalar_deficit_leading(&spec, &[0.0, 0.0, 0.0]).unwrap();
        assert!(l.fitted.abs() < 1e-5, "{l:?}");
    }
}
