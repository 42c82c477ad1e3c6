//! Pointwise quantities of the metric written in the gauge `r̃`:
//! `g = dr̃²/Ã + Ã e^{2v̂̃} dξ² + γ`, `Ã = r̃²(1 − r̃₀ⁿ/r̃ⁿ)`.

use serde::Serialize;

use crate::curvature::warped_terms;
use crate::error::Result;
use crate::gauge::{exp_v_tilde_minus_one, GaugeMap, GaugePoint};
use crate::metric::{MetricSpec, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TildeTerms {
    pub r: f64,
    pub r_tilde: f64,
    /// `dr̃/dr`
    pub dr: f64,
    /// `e^{v̂̃}`
    pub exp_v: f64,
    /// `Ã`
    pub a_tilde: f64,
    /// `R(g) + n(n−1)`
    pub deficit: f64,
    /// `Ŵ̃ʳ = W̃ʳ − (n−2)/r̃`
    pub w_r_hat: f64,
    /// `|W̃̊ʳ|²_γ`
    pub w_r_traceless_sq: f64,
    /// `W^ξ`
    pub w_xi: f64,
    /// `(n−1)/(2(n−2))(W^ξ)² + ⅛|W̊^ξ|²_γ`
    pub q_xi: f64,
    /// `R(γ)`
    pub torus_scalar: f64,
    /// `e^{v̂̃} r̃^{n−1}(R + n(n−1))`
    pub a_excess: f64,
    /// `2Ã e^{v̂̃} r̃^{n−1}[(n−1)/(2(n−2))(Ŵ̃ʳ)² + ⅛|W̃̊ʳ|²]`
    pub a_radial: f64,
    /// `(2/Ã) e^{−v̂̃} r̃^{n−1} q_ξ`
    pub a_xi: f64,
    /// `(2/Ã) r̃^{n−1} ∂_ξ(e^{−v̂̃}W^ξ)`
    pub xi_term: f64,
    /// `−e^{v̂̃} r̃^{n−1} R(γ)`
    pub torus_term: f64,
    /// `∂_r̃ v̂̃`
    pub dv: f64,
    /// `−2Ã e^{v̂̃} r̃^{n−1}(∂_r̃v̂̃ + Ŵ̃ʳ)`
    pub flux: f64,
}

impl TildeTerms {
    /// The nonnegative integrand `A`.
    pub fn a(&self) -> f64 {
        self.a_excess + self.a_radial + self.a_xi
    }

    /// Integrand of the radial identity besides `n r̃0ⁿ ∂_r̃ e^{v̂̃}`.
    pub fn bulk(&self) -> f64 {
        self.xi_term + self.torus_term + self.a()
    }
}

/// Evaluates every tilde-frame quantity at the solved gauge point.
pub fn tilde_terms(spec: &MetricSpec, p: &GaugePoint, angles: &[f64]) -> Result<TildeTerms> {
    let n = spec.n();
    let nf = n as f64;
    let mf = nf - 2.0;
    let r = p.r;
    let w = warped_terms(spec, &Point::new(r, angles.to_vec()))?;
    let exp_v = 1.0 + exp_v_tilde_minus_one(spec, p, angles[0]);
    let rt = p.r_tilde;
    let a_tilde = rt * rt * p.q_tilde;
    let rn1 = rt.powi(n as i32 - 1);
    let dr = p.dr;

    let w_r_hat = w.w_r_hat / dr + mf * (p.delta - r * p.ln_dr.exp_m1()) / (r * rt * dr);
    let w_r_traceless_sq = w.w_r_traceless_sq / (dr * dr);
    let q_r = (nf - 1.0) / (2.0 * mf) * w_r_hat * w_r_hat + 0.125 * w_r_traceless_sq;

    let su = spec.exp_u_hat.jet(r);
    let sv = spec.exp_v_hat.jet(r, angles[0]);
    let dv = (su.d1 / su.value + sv.dr / sv.value - p.ell1) / dr;

    Ok(TildeTerms {
        r,
        r_tilde: rt,
        dr,
        exp_v,
        a_tilde,
        deficit: w.deficit,
        w_r_hat,
        w_r_traceless_sq,
        w_xi: w.w_xi,
        q_xi: w.q_xi,
        torus_scalar: w.torus_scalar,
        a_excess: exp_v * rn1 * w.deficit,
        a_radial: 2.0 * a_tilde * exp_v * rn1 * q_r,
        a_xi: 2.0 * rn1 * w.q_xi / (a_tilde * exp_v),
        xi_term: 2.0 * rn1 * w.xi_divergence / (a_tilde * exp_v),
        torus_term: -exp_v * rn1 * w.torus_scalar,
        dv,
        flux: -2.0 * a_tilde * exp_v * rn1 * (dv + w_r_hat),
    })
}

/// `A` and its three addends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AIntegrand {
    pub total: f64,
    pub excess: f64,
    pub radial: f64,
    pub xi: f64,
}

/// `A` at the point with tilde radius `r_tilde > r̃₀`.
pub fn nonneg_integrand_a(spec: &MetricSpec, gm: &GaugeMap, r_tilde: f64, angles: &[f64]) -> Result<AIntegrand> {
    let r = gm.r_of_r_tilde(r_tilde)?;
    let t = tilde_terms(spec, &gm.point(r)?, angles)?;
    Ok(AIntegrand {
        total: t.a(),
        excess: t.a_excess,
        radial: t.a_radial,
        xi: t.a_xi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{scalar_curvature_fd, scalar_curvature_warped};
    use crate::gauge::radial_gauge;
    use crate::metric::fixtures::random_l1_perturbation;
    use crate::metric::BackgroundParams;
    use nalgebra::DMatrix;
    use rand::SeedableRng;

    #[test]
    fn hm_integrand_vanishes() {
        let spec = MetricSpec::horowitz_myers(4, 1.1, vec![1.0, 2.0]).unwrap();
        let gm = radial_gauge(&spec).unwrap();
        for f in [1.01, 1.5, 4.0, 50.0] {
            let a = nonneg_integrand_a(&spec, &gm, f * gm.r_tilde_0, &[0.3, 0.1, 0.2]).unwrap();
            assert!(
                a.total.abs() < 1e-10 && a.radial.abs() < 1e-10 && a.xi.abs() < 1e-10,
                "{a:?}"
            );
        }
    }

    #[test]
    fn traceless_mode_feeds_radial_addend() {
        let mut spec = MetricSpec::hm_type(BackgroundParams::with_unit_torus(4, 0.0, 1.0).unwrap());
        spec.add_w_mode(3, 0, 1, vec![0, 0, 0], 0.05, 0.0).unwrap();
        let gm = radial_gauge(&spec).unwrap();
        let a = nonneg_integrand_a(&spec, &gm, 2.0 * gm.r_tilde_0, &[0.0; 3]).unwrap();
        assert!(a.radial > 1e-6, "{a:?}");
        assert!(a.xi.abs() < 1e-14, "{a:?}");
    }

    /// `R` from finite differences of `dr̃²/Ã + Ã e^{2v̂̃}dξ² + γ` in the
    /// chart `(r̃, ξ, φ)` equals `R` of the original chart at `r(r̃)`.
    #[test]
    fn curvature_is_chart_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (n, a) in [(3usize, 0.5), (4, -0.3)] {
            let spec = random_l1_perturbation(BackgroundParams::with_unit_torus(n, a, 1.0).unwrap(), 1e-2, &mut rng);
            let gm = radial_gauge(&spec).unwrap();
            let rt0n = gm.r_tilde_0.powi(n as i32);
            let metric = |c: &[f64]| -> Result<DMatrix<f64>> {
                let rt = c[0];
                let r = gm.r_of_r_tilde(rt)?;
                let p = gm.point(r)?;
                let a_tilde = rt * rt * (1.0 - rt0n / rt.powi(n as i32));
                let ev = 1.0 + exp_v_tilde_minus_one(&spec, &p, c[1]);
                let mut g = spec.eval_metric(&Point::new(r, c[1..].to_vec()))?;
                g[(0, 0)] = 1.0 / a_tilde;
                g[(1, 1)] = a_tilde * ev * ev;
                Ok(g)
            };
            for f in [1.5, 3.0] {
                let mut x = vec![f * gm.r_tilde_0];
                x.extend(vec![0.4; n - 1]);
                let fd = scalar_curvature_fd(metric, &x, 1e-2, 6).unwrap();
                let r = gm.r_of_r_tilde(x[0]).unwrap();
                let exact = scalar_curvature_warped(&spec, &Point::new(r, x[1..].to_vec())).unwrap();
                assert!((fd - exact).abs() < 1e-6, "n={n} f={f}: {fd} vs {exact}");
            }
        }
    }
}
