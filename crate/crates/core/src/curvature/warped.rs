//! Scalar curvature of `g = e^{2u}dr² + e^{2v}dξ² + γ` from the warped
//! decomposition, with all derivatives taken analytically from the series.
//!
//! Two assemblies are provided. [`scalar_curvature_warped`] evaluates the
//! formula literally. [`warped_terms`] rewrites it around the background so
//! that `R + n(n−1)` is produced without cancellation, which is what the
//! energy integrands need far from the horizon.

use nalgebra::DMatrix;
use serde::Serialize;

use super::torus::torus_scalar_from_jet;
use crate::error::{Error, Result};
use crate::metric::{LocalData, MetricSpec, Point};

/// Condition number of `r⁻²γ` above which the torus block is treated as
/// singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Mean curvature type quantities of the torus block.
#[derive(Debug, Clone, PartialEq)]
pub struct WQuantities {
    /// `½ tr_γ ∂_r γ`
    pub w_r: f64,
    /// Trace-free part `∂_rγ − (2Wʳ/(n−2))γ`.
    pub w_r_traceless: DMatrix<f64>,
    pub w_xi: f64,
    pub w_xi_traceless: DMatrix<f64>,
    /// `Wʳ − (n−2)/r`
    pub w_r_hat: f64,
}

/// Pieces of `R(g) + n(n−1)` that the energy identity uses separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WarpedTerms {
    /// `R(g) + n(n−1)`.
    pub deficit: f64,
    /// `Ŵʳ`
    pub w_r_hat: f64,
    /// `|W̊ʳ|²_γ`
    pub w_r_traceless_sq: f64,
    /// `(n−1)/(2(n−2))(Ŵʳ)² + ⅛|W̊ʳ|²_γ`
    pub q_r_hat: f64,
    /// `W^ξ`
    pub w_xi: f64,
    /// `(n−1)/(2(n−2))(W^ξ)² + ⅛|W̊^ξ|²_γ`
    pub q_xi: f64,
    /// `∂_ξW^ξ − ∂_ξv̂ W^ξ`
    pub xi_divergence: f64,
    /// `R(γ)`
    pub torus_scalar: f64,
    /// `v̂' + Ŵʳ`
    pub x: f64,
    /// Rounding scale of `deficit`: machine epsilon times the summed
    /// magnitudes of its addends.
    pub rounding: f64,
}

/// Torus-block quantities normalized by `r²`: with `M = δ + ŵ` every
/// trace below is independent of the overall `r²`.
struct Block {
    w_hat: f64,
    w_hat_dr: f64,
    dev_r: DMatrix<f64>,
    traceless_r_sq: f64,
    w_xi: f64,
    w_xi_dxi: f64,
    dev_xi: DMatrix<f64>,
    traceless_xi_sq: f64,
    torus_scalar: f64,
}

fn condition(m: &DMatrix<f64>) -> f64 {
    let e = m.symmetric_eigenvalues();
    let (lo, hi) = (e.min(), e.max());
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

fn block(local: &LocalData, n: usize) -> Result<Block> {
    let m = n - 2;
    let mf = m as f64;
    let r = local.r;
    let w = &local.w;
    let mm = DMatrix::identity(m, m) + &w.angular.value;
    let cond = condition(&mm);
    if !(cond <= CONDITION_LIMIT) {
        return Err(Error::DegenerateGamma { condition: cond });
    }
    let mi = mm
        .clone()
        .cholesky()
        .ok_or(Error::DegenerateGamma { condition: cond })?
        .inverse();

    let p = &mi * &w.dr;
    let tr_p = p.trace();
    let dev_r = &w.dr - &mm * (tr_p / mf);
    let a = &mi * &dev_r;

    let pxi = &mi * &w.angular.grad[0];
    let tr_pxi = pxi.trace();
    let dev_xi = &w.angular.grad[0] - &mm * (tr_pxi / mf);
    let b = &mi * &dev_xi;

    let torus_scalar = if n > 3 {
        torus_scalar_from_jet(&mm, &w.angular, n)? / (r * r)
    } else {
        0.0
    };
    Ok(Block {
        w_hat: 0.5 * tr_p,
        w_hat_dr: 0.5 * ((&mi * &w.drr).trace() - (&p * &p).trace()),
        traceless_r_sq: (&a * &a).trace(),
        dev_r,
        w_xi: 0.5 * tr_pxi,
        w_xi_dxi: 0.5 * ((&mi * &w.angular.hess[0]).trace() - (&pxi * &pxi).trace()),
        traceless_xi_sq: (&b * &b).trace(),
        dev_xi,
        torus_scalar,
    })
}

fn flat_block(n: usize) -> Block {
    let m = n - 2;
    Block {
        w_hat: 0.0,
        w_hat_dr: 0.0,
        dev_r: DMatrix::zeros(m, m),
        traceless_r_sq: 0.0,
        w_xi: 0.0,
        w_xi_dxi: 0.0,
        dev_xi: DMatrix::zeros(m, m),
        traceless_xi_sq: 0.0,
        torus_scalar: 0.0,
    }
}

fn block_for(spec: &MetricSpec, local: &LocalData) -> Result<Block> {
    if spec.w_hat.is_zero() {
        Ok(flat_block(spec.n()))
    } else {
        block(local, spec.n())
    }
}

/// `Wʳ`, `W̊ʳ`, `W^ξ`, `W̊^ξ` and `Ŵʳ` at a point.
pub fn w_quantities(spec: &MetricSpec, point: &Point) -> Result<WQuantities> {
    let n = spec.n();
    let local = spec.local(point)?;
    let b = block(&local, n)?;
    let r2 = point.r * point.r;
    Ok(WQuantities {
        w_r: (n as f64 - 2.0) / point.r + b.w_hat,
        w_r_traceless: b.dev_r * r2,
        w_xi: b.w_xi,
        w_xi_traceless: b.dev_xi * r2,
        w_r_hat: b.w_hat,
    })
}

/// Radial log-derivatives of the profiles.
struct Profiles {
    su2: f64,
    sv2: f64,
    sigma: f64,
    dv: f64,
    ddv: f64,
    dxi_v: f64,
}

fn profiles(local: &LocalData) -> Profiles {
    let su = &local.su;
    let sv = &local.sv;
    let dv = sv.dr / sv.value;
    Profiles {
        su2: su.value * su.value,
        sv2: sv.value * sv.value,
        sigma: dv - su.d1 / su.value,
        dv,
        ddv: sv.drr / sv.value - dv * dv,
        dxi_v: sv.dxi / sv.value,
    }
}

/// `R(g)` evaluated term by term from the warped decomposition.
pub fn scalar_curvature_warped(spec: &MetricSpec, point: &Point) -> Result<f64> {
    let n = spec.n();
    let nf = n as f64;
    let mf = nf - 2.0;
    let local = spec.local(point)?;
    let b = block_for(spec, &local)?;
    let p = profiles(&local);
    let r = point.r;
    let [a, da, dda] = spec.background.a_jet(r);

    let w = mf / r + b.w_hat;
    let dw = -mf / (r * r) + b.w_hat_dr;
    let z = 0.5 * da + a * (p.dv + w);
    let dz = 0.5 * dda + da * (p.dv + w) + a * (p.ddv + dw);
    let q_r = (nf - 1.0) / (2.0 * mf) * w * w + 0.125 * b.traceless_r_sq;
    let q_xi = (nf - 1.0) / (2.0 * mf) * b.w_xi * b.w_xi + 0.125 * b.traceless_xi_sq;
    let xi_div = b.w_xi_dxi - p.dxi_v * b.w_xi;

    Ok(
        -(2.0 / p.su2) * (p.sigma * z + dz) - (2.0 / (a * p.sv2)) * xi_div + b.torus_scalar
            - 2.0 * (a / p.su2) * q_r
            - (2.0 / (a * p.sv2)) * q_xi,
    )
}

/// `R(g) + n(n−1)` and its constituents, assembled around the background
/// so that no large terms cancel.
pub fn warped_terms(spec: &MetricSpec, point: &Point) -> Result<WarpedTerms> {
    let local = spec.local(point)?;
    warped_terms_local(spec, &local)
}

pub(crate) fn warped_terms_local(spec: &MetricSpec, local: &LocalData) -> Result<WarpedTerms> {
    let n = spec.n();
    let nf = n as f64;
    let mf = nf - 2.0;
    let b = block_for(spec, local)?;
    let p = profiles(local);
    let r = local.r;
    let [a, da, _] = spec.background.a_jet(r);

    let x = p.dv + b.w_hat;
    let dx = p.ddv + b.w_hat_dr;
    let z0 = 0.5 * da + mf * a / r;
    let q_r_hat = (nf - 1.0) / (2.0 * mf) * b.w_hat * b.w_hat + 0.125 * b.traceless_r_sq;
    let q_xi = (nf - 1.0) / (2.0 * mf) * b.w_xi * b.w_xi + 0.125 * b.traceless_xi_sq;
    let xi_div = b.w_xi_dxi - p.dxi_v * b.w_xi;

    // n(n−1)(1 − e^{−2û}) without cancellation
    let bulk = nf * (nf - 1.0) * -(-2.0 * local.su.dev.ln_1p()).exp_m1();
    let radial_parts = [
        -a * dx,
        -(da + a * p.sigma) * x,
        -p.sigma * z0,
        -(nf - 1.0) * a * b.w_hat / r,
        -a * q_r_hat,
    ];
    let radial = (2.0 / p.su2) * radial_parts.iter().sum::<f64>();
    let angular = -(2.0 / (a * p.sv2)) * (xi_div + q_xi);
    let magnitude = bulk.abs()
        + (2.0 / p.su2) * radial_parts.iter().map(|t| t.abs()).sum::<f64>()
        + (2.0 / (a * p.sv2)) * (xi_div.abs() + q_xi.abs())
        + b.torus_scalar.abs();
    Ok(WarpedTerms {
        rounding: f64::EPSILON * magnitude,
        deficit: bulk + radial + angular + b.torus_scalar,
        w_r_hat: b.w_hat,
        w_r_traceless_sq: b.traceless_r_sq,
        q_r_hat,
        w_xi: b.w_xi,
        q_xi,
        xi_divergence: xi_div,
        torus_scalar: b.torus_scalar,
        x,
    })
}

/// `R(g) + n(n−1)` at a point.
pub fn scalar_deficit(spec: &MetricSpec, point: &Point) -> Result<f64> {
    Ok(warped_terms(spec, point)?.deficit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::oracle::scalar_curvature_oracle_order;
    use crate::metric::BackgroundParams;

    fn perturbed(n: usize) -> MetricSpec {
        let bg = BackgroundParams::with_unit_torus(n, 0.4, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        let nn = n as u32;
        spec.set_u(nn - 1, 0.07);
        spec.add_v_const(nn - 1, -0.03);
        spec.add_v_mode(nn, 1, 0.02, -0.05);
        let mut k = vec![0; n - 1];
        k[0] = 1;
        spec.add_w_mode(nn - 1, 0, 0, k.clone(), 0.06, 0.01).unwrap();
        if n > 3 {
            k[1] = 1;
            spec.add_w_mode(nn, 0, 1, k.clone(), 0.05, -0.02).unwrap();
            spec.add_w_mode(nn - 1, 1, 1, k, -0.04, 0.03).unwrap();
        }
        spec
    }

    #[test]
    fn hm_type_is_constant() {
        for n in [3, 4, 5] {
            let bg = BackgroundParams::with_unit_torus(n, -0.5, 2.0).unwrap();
            let spec = MetricSpec::hm_type(bg);
            for r in [spec.r_plus() * 1.001, 3.0, 200.0] {
                let p = Point::radial(r, n);
                let nn = (n * (n - 1)) as f64;
                assert!((scalar_curvature_warped(&spec, &p).unwrap() + nn).abs() < 1e-8);
                assert!(scalar_deficit(&spec, &p).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn matches_oracle_on_perturbation() {
        for n in [3, 4, 5] {
            let spec = perturbed(n);
            let mut angles = vec![0.3; n - 1];
            angles[0] = 0.7;
            let p = Point::new(2.3, angles);
            let lit = scalar_curvature_warped(&spec, &p).unwrap();
            let def = scalar_deficit(&spec, &p).unwrap() - (n * (n - 1)) as f64;
            let fd = scalar_curvature_oracle_order(&spec, &p, 1e-2, 6).unwrap();
            assert!((lit - fd).abs() < 1e-7, "n={n}: {lit} vs {fd}");
            assert!((lit - def).abs() < 1e-10, "n={n}: {lit} vs {def}");
        }
    }

    #[test]
    fn traceless_reconstruction() {
        let spec = perturbed(5);
        let p = Point::new(1.9, vec![0.4, 1.0, 2.0, 0.5]);
        let q = w_quantities(&spec, &p).unwrap();
        let local = spec.local(&p).unwrap();
        let r = p.r;
        let m = DMatrix::identity(3, 3) + &local.w.angular.value;
        let gamma = &m * (r * r);
        let dgamma = &m * (2.0 * r) + &local.w.dr * (r * r);
        let rebuilt = &gamma * (2.0 * q.w_r / 3.0) + &q.w_r_traceless;
        assert!((dgamma - rebuilt).abs().max() < 1e-10);
        let gi = gamma.try_inverse().unwrap();
        assert!((&gi * &q.w_r_traceless).trace().abs() < 1e-12);
        assert!((&gi * &q.w_xi_traceless).trace().abs() < 1e-12);
    }

    #[test]
    fn flat_torus_block() {
        let bg = BackgroundParams::with_unit_torus(4, 0.0, 1.0).unwrap();
        let spec = MetricSpec::hm_type(bg);
        let q = w_quantities(&spec, &Point::radial(3.0, 4)).unwrap();
        assert!((q.w_r - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(q.w_r_hat, 0.0);
        assert_eq!(q.w_xi, 0.0);
        assert!(q.w_r_traceless.abs().max() < 1e-15);
    }
}
