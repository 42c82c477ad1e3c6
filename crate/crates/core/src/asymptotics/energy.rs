use serde::Serialize;

use super::boundary::kappa_series;
use crate::metric::{r_breve_for_period, MetricSpec};

/// Total energy and its comparison with the HM metric of equal ξ-period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySummary {
    pub e_g: f64,
    pub e_hm: f64,
    pub difference: f64,
    pub r_breve_0: f64,
    pub boundary_volume: f64,
}

/// `E(g) = ∫ tr_{h₀}κ dV_{h₀}`. The mass aspect is a trigonometric
/// polynomial, so the integral is the volume times its zero mode.
pub fn total_energy(spec: &MetricSpec) -> f64 {
    spec.boundary_volume() * kappa_series(spec).trace().mean()
}

/// `E(g_HM) = −r̆₀ⁿ Vol` with `r̆₀ = 4π/(nβ₀)`.
pub fn hm_energy(spec: &MetricSpec) -> f64 {
    let rb = r_breve_for_period(spec.n(), spec.xi_period);
    -rb.powi(spec.n() as i32) * spec.boundary_volume()
}

/// `∫ [r̆₀ⁿ − r0ⁿ + 2(n−1)uₙ + 2nvₙ + 2n tr wₙ] dV_{h₀}`.
pub fn energy_difference(spec: &MetricSpec) -> f64 {
    let n = spec.n();
    let nn = n as u32;
    let nf = n as f64;
    let rb = r_breve_for_period(n, spec.xi_period);
    let density = rb.powi(n as i32) - spec.background.r0n()
        + 2.0 * (nf - 1.0) * spec.u_coeff(nn)
        + 2.0 * nf * spec.v_coeff(nn).mean()
        + 2.0 * nf * spec.w_coeff(nn).trace().mean();
    density * spec.boundary_volume()
}

pub fn energy_summary(spec: &MetricSpec) -> EnergySummary {
    EnergySummary {
        e_g: total_energy(spec),
        e_hm: hm_energy(spec),
        difference: energy_difference(spec),
        r_breve_0: r_breve_for_period(spec.n(), spec.xi_period),
        boundary_volume: spec.boundary_volume(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BackgroundParams;

    #[test]
    fn hm_energy_closed_form() {
        let spec = MetricSpec::horowitz_myers(4, 1.3, vec![2.0, 0.5]).unwrap();
        let vol = spec.boundary_volume();
        assert!((total_energy(&spec) + 1.3_f64.powi(4) * vol).abs() < 1e-12);
        assert!(energy_difference(&spec).abs() < 1e-12);
    }

    #[test]
    fn oscillating_mode_has_no_energy() {
        let bg = BackgroundParams::with_unit_torus(3, 0.0, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        spec.add_v_mode(3, 1, 1.0, 0.0);
        assert!((total_energy(&spec) + spec.boundary_volume()).abs() < 1e-12);
        spec.add_v_const(3, 0.25);
        assert!((total_energy(&spec) - (-1.0 + 1.5) * spec.boundary_volume()).abs() < 1e-12);
    }

    #[test]
    fn difference_matches_report() {
        let bg = BackgroundParams::with_unit_torus(5, 0.4, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg.clone());
        for i in 0..3 {
            spec.add_w_mode(5, i, i, vec![0; 4], 2.0 * 0.01, 0.0).unwrap();
        }
        let r = energy_summary(&spec);
        assert!((r.e_g - r.e_hm - r.difference).abs() < 1e-12);
        let expected = (bg.r_breve0().powi(5) - 1.0 + 2.0 * 5.0 * 3.0 * 0.01) * spec.boundary_volume();
        assert!((r.difference - expected).abs() < 1e-12);
    }
}
