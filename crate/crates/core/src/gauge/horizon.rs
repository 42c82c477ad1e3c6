//! Horizon value `e^{v̂̃(r̃₀, ξ)} = r̆₀/r̃₀` of the transformed ξ-profile.

use serde::Serialize;

use super::coeffs::exp_v_tilde_minus_one;
use super::map::GaugeMap;
use crate::error::{Error, Result};
use crate::metric::{r_breve_for_period, regularity_residual, GridSpec, MetricSpec, REGULARITY_TOL};

/// Nodes on the ξ-circle at which the horizon value is sampled.
const XI_NODES: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorizonCheck {
    /// `max_ξ |e^{v̂̃(r̃₀,ξ)} − r̆₀/r̃₀|` over both evaluations below.
    pub residual: f64,
    /// `r̆₀ = 4π/(nβ₀)` from the declared ξ-period.
    pub r_breve_0: f64,
    pub r_tilde_0: f64,
    /// Values from the closed-form `dr̃/dr(r₊)`.
    pub closed_form: Vec<f64>,
    /// Values from a one-sided extrapolation along the solved map.
    pub limit: Vec<f64>,
    pub xis: Vec<f64>,
}

/// Evaluates `e^{v̂̃}` at `r̃ = r̃₀` on a ξ-grid and compares it with
/// `r̆₀/r̃₀`. Fails when the metric is not regular at the horizon.
pub fn horizon_value_check(gm: &GaugeMap, spec: &MetricSpec) -> Result<HorizonCheck> {
    let reg = regularity_residual(spec, XI_NODES);
    if reg > REGULARITY_TOL {
        return Err(Error::RegularityFail { residual: reg });
    }
    let rp = spec.r_plus();
    let r_breve_0 = r_breve_for_period(spec.n(), spec.xi_period);
    let target = r_breve_0 / gm.r_tilde_0;
    let su = spec.exp_u_hat.eval(rp);
    let dr0 = gm.dr_at_horizon();
    let eps = 1e-5 * rp;
    let p1 = gm.point(rp + eps)?;
    let p2 = gm.point(rp + 2.0 * eps)?;
    let xis = GridSpec::circle(spec.xi_period, XI_NODES);
    let mut closed_form = Vec::with_capacity(xis.len());
    let mut limit = Vec::with_capacity(xis.len());
    let mut residual: f64 = 0.0;
    for &xi in &xis {
        let c = su * spec.exp_v_hat.eval(rp, xi) / dr0;
        let l = 1.0 + 2.0 * exp_v_tilde_minus_one(spec, &p1, xi) - exp_v_tilde_minus_one(spec, &p2, xi);
        residual = residual.max((c - target).abs()).max((l - target).abs());
        closed_form.push(c);
        limit.push(l);
    }
    Ok(HorizonCheck {
        residual,
        r_breve_0,
        r_tilde_0: gm.r_tilde_0,
        closed_form,
        limit,
        xis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::radial_gauge;
    use crate::metric::BackgroundParams;

    #[test]
    fn hm_is_exact() {
        let spec = MetricSpec::horowitz_myers(3, 1.2, vec![1.0]).unwrap();
        let gm = radial_gauge(&spec).unwrap();
        let h = horizon_value_check(&gm, &spec).unwrap();
        assert!(h.residual < 1e-9, "{h:?}");
        assert!((h.closed_form[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hm_type_matches() {
        for (n, a) in [(3usize, 1.0), (3, -0.5), (4, 1.0), (4, -0.5)] {
            let spec = MetricSpec::hm_type(BackgroundParams::with_unit_torus(n, a, 1.0).unwrap());
            let gm = radial_gauge(&spec).unwrap();
            let h = horizon_value_check(&gm, &spec).unwrap();
            assert!(h.residual <= 1e-6, "n={n} a={a} {h:?}");
        }
        let spec = MetricSpec::hm_type(BackgroundParams::with_unit_torus(3, 1.0, 1.0).unwrap());
        assert!((r_breve_for_period(3, spec.xi_period) - 1.17085).abs() < 1e-5);
    }

    #[test]
    fn detuned_period_is_flagged() {
        let mut spec = MetricSpec::hm_type(BackgroundParams::with_unit_torus(3, 1.0, 1.0).unwrap());
        let rb = spec.background.r_breve0();
        spec.xi_period *= 0.5;
        let gm = radial_gauge(&spec).unwrap();
        let h = horizon_value_check(&gm, &spec).unwrap();
        assert!((h.residual - rb / gm.r_tilde_0).abs() < 1e-6, "{h:?}");
    }

    #[test]
    fn irregular_spec_is_rejected() {
        let mut spec = MetricSpec::hm_type(BackgroundParams::with_unit_torus(3, 0.0, 1.0).unwrap());
        spec.add_v_const(3, 0.3);
        let gm = radial_gauge(&spec).unwrap();
        assert!(matches!(
            horizon_value_check(&gm, &spec),
            Err(Error::RegularityFail { .. })
        ));
    }
}
