//! The integrated scalar-curvature identity
//! `lim Φ = n r̃0ⁿ(1 − r̆₀/r̃₀) + ∫_{r̃₀}^∞ [ξ-divergence − e^{v̂̃}r̃^{n−1}R(γ) + A] dr̃`
//! with the boundary flux `Φ = −2Ã e^{v̂̃} r̃^{n−1}(∂_r̃v̂̃ + Ŵ̃ʳ)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::integrand::tilde_terms;
use crate::error::{Error, Result};
use crate::gauge::{GaugeMap, GaugePoint, TransformedCoeffs};
use crate::metric::{r_breve_for_period, GridSpec, MetricSpec};
use crate::numerics::{composite_nodes, least_squares};

/// Panels per radial segment of the coarse rule; the fine rule doubles it.
pub const RADIAL_PANELS: usize = 8;

/// Samples of the flux at `r = 50·max(r₊,1)·2^k`.
const FLUX_SAMPLES: usize = 9;

/// Relative size of the linear growth term above which the flux diverges.
const GROWTH_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxLimit {
    pub limit: f64,
    pub predicted: f64,
    /// Fitted linear growth, scaled to the largest sample radius.
    pub growth: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

fn flux_radii(spec: &MetricSpec) -> Vec<f64> {
    let base = 50.0 * spec.r_plus().max(1.0);
    (0..FLUX_SAMPLES).map(|k| base * 2f64.powi(k as i32)).collect()
}

/// Fits `Φ(r) = L + c₋₁r + c₁/r + c₂/r² + c₃/r³` and returns `(L, c₋₁ r_max)`.
fn extrapolate(radii: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    let r_max = radii[radii.len() - 1];
    let r_min = radii[0];
    let design = DMatrix::from_fn(radii.len(), 5, |i, j| {
        let r = radii[i];
        match j {
            0 => 1.0,
            1 => r / r_max,
            k => (r_min / r).powi(k as i32 - 1),
        }
    });
    let fit = least_squares(&design, &DVector::from_column_slice(values))?;
    Ok((fit.coeffs[0], fit.coeffs[1]))
}

fn limit_from(values: Vec<f64>, radii: Vec<f64>, predicted: f64) -> Result<FluxLimit> {
    let (limit, growth) = extrapolate(&radii, &values)?;
    if growth.abs() > GROWTH_TOL * (1.0 + limit.abs()) {
        return Err(Error::Divergent { growth });
    }
    Ok(FluxLimit {
        limit,
        predicted,
        growth,
        radii,
        values,
    })
}

/// `lim_{r̃→∞} Φ` at a boundary point, compared with `2n(ṽₙ + tr w̃ₙ)`.
pub fn flux_limit(spec: &MetricSpec, gm: &GaugeMap, coeffs: &TransformedCoeffs, angles: &[f64]) -> Result<FluxLimit> {
    let radii = flux_radii(spec);
    let mut values = Vec::with_capacity(radii.len());
    for &r in &radii {
        values.push(tilde_terms(spec, &gm.point(r)?, angles)?.flux);
    }
    limit_from(values, radii, coeffs.predicted_flux(angles))
}

/// Quadrature nodes in `r` on `(r₊, ∞)` with weights for `dr`: `r = r₊ + t²`
/// on `[r₊, 2r₊]`, `ln r` on `[2r₊, 64r₊]`, `1/r` beyond.
pub fn radial_nodes(r_plus: f64, panels: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(3 * 21 * panels);
    for (t, w) in composite_nodes(0.0, r_plus.sqrt(), panels) {
        out.push((r_plus + t * t, 2.0 * t * w));
    }
    for (s, w) in composite_nodes((2.0 * r_plus).ln(), (64.0 * r_plus).ln(), panels) {
        let r = s.exp();
        out.push((r, r * w));
    }
    for (tau, w) in composite_nodes(0.0, 1.0 / (64.0 * r_plus), panels) {
        out.push((1.0 / tau, w / (tau * tau)));
    }
    out
}

/// Solved gauge at every radial node, with `dr̃` weights.
#[derive(Debug, Clone)]
pub struct RadialRule {
    pub points: Vec<GaugePoint>,
    pub weights: Vec<f64>,
}

impl RadialRule {
    pub fn new(gm: &GaugeMap, panels: usize) -> Result<Self> {
        let nodes = radial_nodes(gm.r_plus(), panels);
        let mut points = Vec::with_capacity(nodes.len());
        let mut weights = Vec::with_capacity(nodes.len());
        for (r, w) in nodes {
            let p = gm.point(r)?;
            weights.push(w * p.dr);
            points.push(p);
        }
        Ok(Self { points, weights })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityPoint {
    pub angles: Vec<f64>,
    /// Flux limit.
    pub left: f64,
    /// Horizon term plus the bulk integral.
    pub right: f64,
    pub predicted_flux: f64,
    /// `∫ A dr̃`
    pub a_integral: f64,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub residual: f64,
    /// Largest gap between the flux limit and `2n(ṽₙ + tr w̃ₙ)`.
    pub flux_prediction_gap: f64,
    /// `∬ A dr̃ dV_{h₀}`
    pub a_integral: f64,
    /// Smallest value of `A` met at any node.
    pub a_min: f64,
    pub horizon_term: f64,
    /// Largest `|∮ ∂_ξ(e^{−v̂̃}W^ξ) dξ|` over the radial nodes.
    pub xi_cancellation: f64,
    pub quadrature_error: f64,
    pub points: Vec<IdentityPoint>,
}

/// `n r̃0ⁿ(1 − r̆₀/r̃₀)` with `r̆₀` from the declared ξ-period.
pub fn horizon_term(spec: &MetricSpec, gm: &GaugeMap) -> f64 {
    let n = spec.n();
    let rb = r_breve_for_period(n, spec.xi_period);
    n as f64 * gm.r_tilde_0.powi(n as i32) * (1.0 - rb / gm.r_tilde_0)
}

struct BulkSums {
    bulk: f64,
    a: f64,
    a_min: f64,
}

fn bulk_sums(spec: &MetricSpec, rule: &RadialRule, angles: &[f64]) -> Result<BulkSums> {
    let mut out = BulkSums {
        bulk: 0.0,
        a: 0.0,
        a_min: f64::INFINITY,
    };
    for (p, &w) in rule.points.iter().zip(&rule.weights) {
        let t = tilde_terms(spec, p, angles)?;
        let a = t.a();
        out.bulk += w * t.bulk();
        out.a += w * a;
        out.a_min = out.a_min.min(a);
    }
    Ok(out)
}

/// `∮ (2/Ã) r̃^{n−1} ∂_ξ(e^{−v̂̃}W^ξ) dξ` on a fine ξ-circle at each node.
fn xi_cancellation(spec: &MetricSpec, rule: &RadialRule, phis: &[Vec<f64>]) -> Result<f64> {
    if !spec.exp_v_hat.depends_on_xi() && !spec.w_hat.depends_on(0) {
        return Ok(0.0);
    }
    let xis = GridSpec::circle(spec.xi_period, 64);
    let mut worst: f64 = 0.0;
    for p in rule.points.iter().step_by(7) {
        for phi in phis {
            let mut sum = 0.0;
            let mut scale: f64 = 0.0;
            for &xi in &xis {
                let mut angles = vec![xi];
                angles.extend_from_slice(phi);
                let t = tilde_terms(spec, p, &angles)?;
                sum += t.xi_term;
                scale = scale.max(t.xi_term.abs());
            }
            let integral = sum * spec.xi_period / xis.len() as f64;
            worst = worst.max(integral.abs() / (1.0 + scale));
        }
    }
    Ok(worst)
}

/// Both sides of the integrated identity at every boundary grid point.
pub fn integrated_identity(
    spec: &MetricSpec,
    gm: &GaugeMap,
    coeffs: &TransformedCoeffs,
    grid: &GridSpec,
) -> Result<IdentityReport> {
    let coarse = RadialRule::new(gm, RADIAL_PANELS)?;
    let fine = RadialRule::new(gm, 2 * RADIAL_PANELS)?;
    let flux_gauge: Vec<GaugePoint> = flux_radii(spec)
        .into_iter()
        .map(|r| gm.point(r))
        .collect::<Result<_>>()?;
    let boundary = grid.boundary_points(spec, !spec.w_depends_on_torus());
    let h = horizon_term(spec, gm);

    let mut points = Vec::with_capacity(boundary.len());
    let mut residual: f64 = 0.0;
    let mut gap: f64 = 0.0;
    let mut quad: f64 = 0.0;
    let mut a_sum = 0.0;
    let mut a_min = f64::INFINITY;
    for angles in &boundary {
        let mut values = Vec::with_capacity(flux_gauge.len());
        for p in &flux_gauge {
            values.push(tilde_terms(spec, p, angles)?.flux);
        }
        let flux = limit_from(
            values,
            flux_gauge.iter().map(|p| p.r).collect(),
            coeffs.predicted_flux(angles),
        )?;
        let c = bulk_sums(spec, &coarse, angles)?;
        let f = bulk_sums(spec, &fine, angles)?;
        let right = h + f.bulk;
        let err = (f.bulk - c.bulk).abs().max((f.a - c.a).abs());
        residual = residual.max((flux.limit - right).abs());
        gap = gap.max((flux.limit - flux.predicted).abs());
        quad = quad.max(err);
        a_sum += f.a;
        a_min = a_min.min(f.a_min);
        points.push(IdentityPoint {
            angles: angles.clone(),
            left: flux.limit,
            right,
            predicted_flux: flux.predicted,
            a_integral: f.a,
            quadrature_error: err,
        });
    }
    let phis: Vec<Vec<f64>> = boundary
        .iter()
        .filter(|a| a[0] == 0.0)
        .map(|a| a[1..].to_vec())
        .collect();
    Ok(IdentityReport {
        residual,
        flux_prediction_gap: gap,
        a_integral: spec.boundary_volume() * a_sum / boundary.len() as f64,
        a_min,
        horizon_term: h,
        xi_cancellation: xi_cancellation(spec, &coarse, &phis)?,
        quadrature_error: quad,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::gauge::{closed_form_coeffs, radial_gauge};
    use crate::metric::fixtures::{random_l1_perturbation, vanishing_tail};
    use crate::metric::BackgroundParams;
    use rand::SeedableRng;

    fn run(spec: &MetricSpec) -> (IdentityReport, GaugeMap) {
        let gm = radial_gauge(spec).unwrap();
        let coeffs = closed_form_coeffs(&gm, spec);
        (
            integrated_identity(spec, &gm, &coeffs, &GridSpec::new(8, 4, 2)).unwrap(),
            gm,
        )
    }

    #[test]
    fn hm_both_sides_vanish() {
        let spec = MetricSpec::horowitz_myers(4, 1.2, vec![1.0, 2.0]).unwrap();
        let (rep, _) = run(&spec);
        assert!(rep.residual < 1e-8 && rep.points[0].left.abs() < 1e-8, "{rep:?}");
    }

    #[test]
    fn hm_type_identity() {
        for (n, a) in [(3usize, 1.0), (4, -0.5)] {
            let spec = MetricSpec::hm_type(BackgroundParams::with_unit_torus(n, a, 1.0).unwrap());
            let (rep, gm) = run(&spec);
            let expected = gm.r_tilde_0.powi(n as i32) - 1.0;
            assert!((rep.points[0].left - expected).abs() < 1e-6, "{rep:?}");
            assert!(rep.flux_prediction_gap < 1e-6, "{rep:?}");
            assert!(rep.residual < 1e-4, "{} {:?}", rep.residual, rep.points[0]);
        }
    }

    #[test]
    fn lone_u_flux_diverges() {
        let bg = BackgroundParams::with_unit_torus(3, 0.0, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        let (e1, e2) = vanishing_tail(3, spec.r_plus(), 0.1, 0.0);
        spec.set_u(2, 0.1);
        spec.set_u(4, e1);
        spec.set_u(5, e2);
        let gm = radial_gauge(&spec).unwrap();
        let coeffs = closed_form_coeffs(&gm, &spec);
        let err = flux_limit(&spec, &gm, &coeffs, &[0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Divergent { .. }), "{err:?}");
    }

    #[test]
    fn random_perturbation_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [3usize, 4] {
            let bg = BackgroundParams::with_unit_torus(n, 0.3, 1.0).unwrap();
            let spec = random_l1_perturbation(bg, 1e-3, &mut rng);
            let (rep, _) = run(&spec);
            assert!(rep.residual < 1e-4, "n={n} {} {:?}", rep.residual, rep.points[0]);
            assert!(rep.xi_cancellation < 1e-10, "{}", rep.xi_cancellation);
        }
    }
}
