//! Decay of `Ω = Ric + (n−1)g`, measured with the finite-difference
//! curvature oracle in the chart `(s = ln r, ξ, φ)`.

use nalgebra::DMatrix;
use serde::Serialize;

use super::boundary::theta_series;
use super::defining::defining_function;
use crate::curvature::{fd_jets, ricci_from_jets};
use crate::error::{Error, Result};
use crate::metric::decay::fit_order;
use crate::metric::{MetricSpec, Point};
use crate::numerics::{geometric, stencil::Stencil};

/// `|Ω|_g` below this is indistinguishable from rounding in the oracle.
pub const OMEGA_NOISE_FLOOR: f64 = 1e-10;

/// Step of the eighth-order stencil in `ln r` and in the angles.
pub const APE_STEP: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApeReport {
    pub angles: Vec<f64>,
    pub xs: Vec<f64>,
    pub omega_norms: Vec<f64>,
    /// Fitted order `m` in `|Ω|_g ~ x^m`; `None` when `|Ω|_g` stays below
    /// the noise floor, i.e. the order exceeds what the samples resolve.
    pub order: Option<f64>,
    pub residual: f64,
    /// `|tr_{h₀}θ|` at `angles`.
    pub tr_theta: f64,
    /// `order ≥ n − ½` (or unresolved).
    pub measured_ape: bool,
    /// `tr θ = 0` at `angles`.
    pub predicted_ape: bool,
}

/// Metric in the chart `(ln r, ξ, φ…)`.
fn log_chart_metric(spec: &MetricSpec, c: &[f64]) -> Result<DMatrix<f64>> {
    let r = c[0].exp();
    let mut g = spec.eval_metric(&Point::new(r, c[1..].to_vec()))?;
    g[(0, 0)] *= r * r;
    Ok(g)
}

/// `|Ric + (n−1)g|_g` at radius `r`.
pub fn omega_norm(spec: &MetricSpec, r: f64, angles: &[f64]) -> Result<f64> {
    let stencil = Stencil::new(8)?;
    let radius = stencil.half_width() as f64 * APE_STEP;
    if r * (-radius).exp() <= spec.r_plus() {
        return Err(Error::StencilOutOfDomain {
            r,
            radius: r * (1.0 - (-radius).exp()),
            r_plus: spec.r_plus(),
        });
    }
    let mut x = vec![r.ln()];
    x.extend_from_slice(angles);
    let jets = fd_jets(
        |c: &[f64]| log_chart_metric(spec, c),
        &x,
        &vec![APE_STEP; x.len()],
        &stencil,
    )?;
    let ric = ricci_from_jets(&jets)?;
    let omega = ric + &jets.g * (spec.n() as f64 - 1.0);
    let gi = jets.g.clone().try_inverse().ok_or(Error::DegenerateGamma {
        condition: f64::INFINITY,
    })?;
    let mixed = &gi * &omega;
    Ok((&mixed * &mixed).trace().abs().sqrt())
}

/// `x` samples spanning `[1/(100 r₊'), 1/(10 r₊')]`, `r₊' = max(r₊, 1)`.
pub fn default_x_samples(spec: &MetricSpec) -> Vec<f64> {
    let s = spec.r_plus().max(1.0);
    geometric(0.01 / s, 0.1 / s, 12)
}

/// Fits the decay order of `|Ω|_g` in `x` at fixed angles.
pub fn ape_deficit(spec: &MetricSpec, x_samples: &[f64], angles: &[f64]) -> Result<ApeReport> {
    let n = spec.n() as f64;
    let df = defining_function(spec)?;
    let mut norms = Vec::with_capacity(x_samples.len());
    for &x in x_samples {
        let r = df.r_of_x(x)?;
        norms.push(omega_norm(spec, r, angles)?);
    }
    let (order, residual) = match fit_order(x_samples, &norms, OMEGA_NOISE_FLOOR) {
        Ok((m, res)) => (Some(-m), res),
        Err(Error::BelowFloor { .. }) => (None, 0.0),
        Err(e) => return Err(e),
    };
    let tr_theta = theta_series(spec).trace().eval(angles).abs();
    Ok(ApeReport {
        angles: angles.to_vec(),
        xs: x_samples.to_vec(),
        omega_norms: norms,
        measured_ape: order.is_none_or(|m| m >= n - 0.5),
        predicted_ape: tr_theta <= 1e-12,
        order,
        residual,
        tr_theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BackgroundParams;

    #[test]
    fn hm_type_is_ape() {
        let bg = BackgroundParams::with_unit_torus(4, 0.5, 1.0).unwrap();
        let spec = MetricSpec::hm_type(bg);
        let rep = ape_deficit(&spec, &default_x_samples(&spec), &[0.0; 3]).unwrap();
        assert!(rep.order.is_none_or(|m| m >= 3.9), "{rep:?}");
        assert!(rep.measured_ape && rep.predicted_ape);
    }

    #[test]
    fn lone_u_is_not_ape() {
        let bg = BackgroundParams::with_unit_torus(4, 0.0, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        spec.set_u(3, 0.1);
        let rep = ape_deficit(&spec, &default_x_samples(&spec), &[0.0; 3]).unwrap();
        assert!((rep.order.unwrap() - 3.0).abs() < 0.15, "{rep:?}");
        assert!(!rep.measured_ape && !rep.predicted_ape);
    }
}
