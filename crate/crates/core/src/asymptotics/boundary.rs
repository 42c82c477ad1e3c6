//! Boundary tensors `θ` (order `x^{n−1}`) and `κ` (order `xⁿ`) of
//! `x²g = dx² + h_x`, as Fourier series on `T^{n−1}` with angles
//! `(ξ, φ³, …, φⁿ)`.

use serde::Serialize;

use super::defining::{collar_radii, defining_function, DefiningFunction};
use crate::error::Result;
use crate::metric::{FourierSeries, GridSpec, MetricSpec, TorusTensorSeries};
use crate::numerics::poly_fit;

#[derive(Debug, Clone)]
pub struct BoundaryData {
    /// Periods of `h₀ = dξ² + Σ(dφⁱ)²`.
    pub periods: Vec<f64>,
    pub theta: TorusTensorSeries,
    pub kappa: TorusTensorSeries,
    pub tr_theta: FourierSeries,
    pub tr_kappa: FourierSeries,
    /// Largest componentwise gap between the closed forms and the fitted
    /// expansion of `h_x`.
    pub fit_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionFit {
    pub theta_deviation: f64,
    pub kappa_deviation: f64,
}

/// Lifts a series in ξ to the full boundary torus.
fn lift_xi(s: &FourierSeries, periods: &[f64]) -> FourierSeries {
    let mut out = FourierSeries::new(periods.to_vec());
    for m in s.modes() {
        let mut k = vec![0; periods.len()];
        k[0] = m.k[0];
        out.push(k, m.cos, m.sin).expect("dimension matches");
    }
    out
}

/// `c₀ + c_v·v + δ-block (c_δ) + c_w·w` assembled into an `(n−1)`-tensor.
fn assemble(
    spec: &MetricSpec,
    xi_const: f64,
    v: &FourierSeries,
    v_factor: f64,
    phi_const: f64,
    w: &TorusTensorSeries,
    w_factor: f64,
) -> TorusTensorSeries {
    let periods = spec.angle_periods();
    let m = spec.n() - 2;
    let mut t = TorusTensorSeries::zeros(m + 1, periods.clone());
    let xx = t.component_mut(0, 0);
    xx.add_scaled(&FourierSeries::constant(periods.clone(), xi_const), 1.0);
    xx.add_scaled(&lift_xi(v, &periods), v_factor);
    for i in 0..m {
        for j in i..m {
            let c = t.component_mut(i + 1, j + 1);
            if i == j {
                c.add_scaled(&FourierSeries::constant(periods.clone(), phi_const), 1.0);
            }
            c.add_scaled(w.component(i, j), w_factor);
        }
    }
    t
}

/// `θ = ((n−2)a + 2u_{n−1} + 2(n−1)v_{n−1})dξ² + (2u_{n−1} − a)δ + 2(n−1)w_{n−1}`.
pub fn theta_series(spec: &MetricSpec) -> TorusTensorSeries {
    let n = spec.n();
    let nf = n as f64;
    let nn = n as u32;
    let a = spec.background.a();
    let u1 = spec.u_coeff(nn - 1);
    assemble(
        spec,
        (nf - 2.0) * a + 2.0 * u1,
        &spec.v_coeff(nn - 1),
        2.0 * (nf - 1.0),
        2.0 * u1 - a,
        &spec.w_coeff(nn - 1),
        2.0 * (nf - 1.0),
    )
}

/// `κ = (−(n−1)r0ⁿ + 2uₙ + 2nvₙ)dξ² + (r0ⁿ + 2uₙ)δ + 2nwₙ`.
pub fn kappa_series(spec: &MetricSpec) -> TorusTensorSeries {
    let n = spec.n();
    let nf = n as f64;
    let nn = n as u32;
    let r0n = spec.background.r0n();
    let u2 = spec.u_coeff(nn);
    assemble(
        spec,
        -(nf - 1.0) * r0n + 2.0 * u2,
        &spec.v_coeff(nn),
        2.0 * nf,
        r0n + 2.0 * u2,
        &spec.w_coeff(nn),
        2.0 * nf,
    )
}

/// Fits `(h_x − h₀)/x^{n−1}` by a quartic in `x` at each boundary point
/// and compares the first two coefficients with `θ/(n−1)` and `κ/n`.
pub fn fit_expansion(
    spec: &MetricSpec,
    df: &DefiningFunction,
    theta: &TorusTensorSeries,
    kappa: &TorusTensorSeries,
    points: &[Vec<f64>],
) -> Result<ExpansionFit> {
    let n = spec.n();
    let m = n - 2;
    let nf = n as f64;
    let radii = collar_radii(spec, 40);
    let mut ks = Vec::with_capacity(radii.len());
    let mut xs = Vec::with_capacity(radii.len());
    for &r in &radii {
        let k = df.integral.k(r)?;
        ks.push(k);
        xs.push((-k).exp() / r);
    }
    let scale: Vec<f64> = xs.iter().map(|x| x.powi(n as i32 - 1)).collect();
    let mut out = ExpansionFit {
        theta_deviation: 0.0,
        kappa_deviation: 0.0,
    };
    let bg = &spec.background;
    for angles in points {
        let mut comps: Vec<Vec<f64>> = vec![Vec::with_capacity(radii.len()); 1 + m * (m + 1) / 2];
        for (idx, &r) in radii.iter().enumerate() {
            let k = ks[idx];
            let sv = spec.exp_v_hat.jet(r, angles[0]);
            comps[0].push((-2.0 * k + bg.ln_q(r) + 2.0 * sv.dev.ln_1p()).exp_m1() / scale[idx]);
            let w = spec.w_hat.eval(r, angles, m);
            let e = (-2.0 * k).exp_m1();
            let mut c = 1;
            for i in 0..m {
                for j in i..m {
                    let diag = if i == j { e } else { 0.0 };
                    comps[c].push((diag + (1.0 + e) * w[(i, j)]) / scale[idx]);
                    c += 1;
                }
            }
        }
        let th = theta.eval(angles);
        let ka = kappa.eval(angles);
        let mut c = 0;
        for i in 0..=m {
            for j in i..=m {
                if i == 0 && j > 0 {
                    continue;
                }
                let fit = poly_fit(&xs, &comps[c], 4)?;
                out.theta_deviation = out.theta_deviation.max((fit.coeffs[0] - th[(i, j)] / (nf - 1.0)).abs());
                out.kappa_deviation = out.kappa_deviation.max((fit.coeffs[1] - ka[(i, j)] / nf).abs());
                c += 1;
            }
        }
    }
    Ok(out)
}

/// Closed-form `θ`, `κ` and their traces, checked against a numerical
/// expansion of `x²g` on a coarse boundary grid.
pub fn boundary_tensors(spec: &MetricSpec) -> Result<BoundaryData> {
    let df = defining_function(spec)?;
    let theta = theta_series(spec);
    let kappa = kappa_series(spec);
    let grid = GridSpec::new(0, 4, 2);
    let points = grid.boundary_points(spec, !spec.w_depends_on_torus());
    let fit = fit_expansion(spec, &df, &theta, &kappa, &points)?;
    Ok(BoundaryData {
        periods: spec.angle_periods(),
        tr_theta: theta.trace(),
        tr_kappa: kappa.trace(),
        theta,
        kappa,
        fit_deviation: fit.theta_deviation.max(fit.kappa_deviation),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BackgroundParams;

    #[test]
    fn hm_values() {
        let n = 4;
        let spec = MetricSpec::horowitz_myers(n, 1.1, vec![1.0, 1.5]).unwrap();
        let b = boundary_tensors(&spec).unwrap();
        let p = [0.3, 0.2, 0.9];
        let r0n = 1.1_f64.powi(4);
        assert!(b.theta.eval(&p).abs().max() < 1e-15);
        let k = b.kappa.eval(&p);
        assert!((k[(0, 0)] + 3.0 * r0n).abs() < 1e-13);
        assert!((k[(1, 1)] - r0n).abs() < 1e-13);
        assert!((b.tr_kappa.eval(&p) + r0n).abs() < 1e-13);
        assert!(b.fit_deviation < 1e-3, "{}", b.fit_deviation);
    }

    #[test]
    fn hm_type_trace_free_theta() {
        let bg = BackgroundParams::with_unit_torus(5, 0.7, 1.0).unwrap();
        let spec = MetricSpec::hm_type(bg);
        let b = boundary_tensors(&spec).unwrap();
        assert!(b.tr_theta.eval(&[0.1, 0.2, 0.3, 0.4]).abs() < 1e-14);
        assert!(b.fit_deviation < 1e-3, "{}", b.fit_deviation);
    }

    #[test]
    fn trace_theta_from_u_and_v() {
        let bg = BackgroundParams::with_unit_torus(3, 0.0, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        spec.set_u(2, 0.1);
        spec.add_v_const(2, 0.2);
        let b = boundary_tensors(&spec).unwrap();
        assert!((b.tr_theta.eval(&[0.0, 0.0]) - 1.2).abs() < 1e-14);
        assert!(b.fit_deviation < 1e-3, "{}", b.fit_deviation);
    }
}
