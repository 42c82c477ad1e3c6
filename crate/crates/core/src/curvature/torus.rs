//! Scalar curvature `R(γ)` of the torus slices `{r, ξ fixed}` and its
//! integrals over `T^{n−2}`.

use nalgebra::DMatrix;

use super::oracle::{fd_jets, scalar_from_jets, MetricJets};
use crate::error::Result;
use crate::metric::{cartesian, GridSpec, MetricSpec, Point, TensorJet};
use crate::numerics::stencil::Stencil;

/// `R(M)` for `M = δ + ŵ` in the φ coordinates, from the analytic angular
/// jet whose first index is ξ.
pub(crate) fn torus_scalar_from_jet(m: &DMatrix<f64>, jet: &TensorJet, n: usize) -> Result<f64> {
    let d = n - 2;
    let full = n - 1;
    let jets = MetricJets {
        g: m.clone(),
        dg: (0..d).map(|a| jet.grad[1 + a].clone()).collect(),
        ddg: (0..d * d)
            .map(|ab| jet.hess[(1 + ab / d) * full + 1 + ab % d].clone())
            .collect(),
    };
    scalar_from_jets(&jets)
}

/// `R(γ)` at a point; identically zero for `n = 3` and for φ-independent `ŵ`.
pub fn torus_scalar(spec: &MetricSpec, point: &Point) -> Result<f64> {
    let n = spec.n();
    if n == 3 || !spec.w_depends_on_torus() {
        return Ok(0.0);
    }
    let local = spec.local(point)?;
    let m = DMatrix::identity(n - 2, n - 2) + &local.w.angular.value;
    Ok(torus_scalar_from_jet(&m, &local.w.angular, n)? / (point.r * point.r))
}

/// `R(γ)` from an eighth-order finite-difference stencil in φ.
pub fn torus_scalar_fd(spec: &MetricSpec, point: &Point, step: f64) -> Result<f64> {
    let n = spec.n();
    if n == 3 {
        return Ok(0.0);
    }
    let stencil = Stencil::new(8)?;
    let block = |phi: &[f64]| -> Result<DMatrix<f64>> {
        let mut angles = point.angles.clone();
        angles[1..].copy_from_slice(phi);
        let g = spec.eval_metric(&Point::new(point.r, angles))?;
        Ok(g.view((2, 2), (n - 2, n - 2)).into_owned())
    };
    let jets = fd_jets(block, &point.angles[1..], &vec![step; n - 2], &stencil)?;
    scalar_from_jets(&jets)
}

/// Trapezoidal average of `f` over the φ-torus, times its coordinate
/// volume, refining until two resolutions agree or the node budget is spent.
const QUADRATURE_BUDGET: usize = 1 << 16;

fn torus_quadrature<F: Fn(&[f64]) -> Result<f64>>(spec: &MetricSpec, f: F) -> Result<f64> {
    let periods = &spec.background.torus_periods();
    let kmax = (1..spec.n() - 1)
        .map(|j| {
            spec.w_hat
                .terms
                .values()
                .map(|t| t.max_wavenumber(j))
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let mut nodes = (8 * (kmax as usize + 1)).max(8);
    let vol: f64 = periods.iter().product();
    let dims = periods.len() as u32;
    let mut prev: Option<f64> = None;
    loop {
        let axes: Vec<Vec<f64>> = periods.iter().map(|&p| GridSpec::circle(p, nodes)).collect();
        let pts = cartesian(&axes);
        let mut sum = 0.0;
        for phi in &pts {
            sum += f(phi)?;
        }
        let value = vol * sum / pts.len() as f64;
        if let Some(p) = prev {
            if (value - p).abs() <= 1e-11 * (1.0 + value.abs()) || (2 * nodes).pow(dims) > QUADRATURE_BUDGET {
                return Ok(value);
            }
        }
        prev = Some(value);
        nodes *= 2;
    }
}

fn point_with(r: f64, xi: f64, phi: &[f64]) -> Point {
    let mut angles = Vec::with_capacity(phi.len() + 1);
    angles.push(xi);
    angles.extend_from_slice(phi);
    Point::new(r, angles)
}

/// `∫_{T^{n−2}} R(γ) dφ³⋯dφⁿ` in the coordinate measure.
pub fn torus_scalar_integral(spec: &MetricSpec, r: f64, xi: f64) -> Result<f64> {
    if spec.n() == 3 || !spec.w_depends_on_torus() {
        return Ok(0.0);
    }
    torus_quadrature(spec, |phi| torus_scalar(spec, &point_with(r, xi, phi)))
}

/// `∫_{T^{n−2}} R(γ) dV_γ`; vanishes for `n = 4` by Gauss–Bonnet.
pub fn gauss_bonnet_integral(spec: &MetricSpec, r: f64, xi: f64) -> Result<f64> {
    let n = spec.n();
    if n == 3 || !spec.w_depends_on_torus() {
        return Ok(0.0);
    }
    torus_quadrature(spec, |phi| {
        let p = point_with(r, xi, phi);
        let m = DMatrix::identity(n - 2, n - 2) + spec.w_hat.eval(r, &p.angles, n - 2);
        let vol = r.powi(n as i32 - 2) * m.determinant().sqrt();
        Ok(torus_scalar(spec, &p)? * vol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BackgroundParams;

    fn wavy(n: usize) -> MetricSpec {
        let bg = BackgroundParams::new(n, 0.2, 1.0, vec![1.0; n - 2]).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        let nn = n as u32;
        let mut k = vec![0; n - 1];
        k[1] = 1;
        spec.add_w_mode(nn - 1, 0, 0, k.clone(), 0.3, 0.1).unwrap();
        k[0] = 1;
        k[n - 2] = 2;
        spec.add_w_mode(nn - 1, 0, n - 3, k, 0.1, -0.2).unwrap();
        spec
    }

    #[test]
    fn analytic_matches_fd() {
        for n in [4, 5] {
            let spec = wavy(n);
            let p = Point::new(1.5, vec![0.2; n - 1]);
            let a = torus_scalar(&spec, &p).unwrap();
            let f = torus_scalar_fd(&spec, &p, 1e-2).unwrap();
            assert!(a.abs() > 1e-4);
            assert!((a - f).abs() < 1e-8 * (1.0 + a.abs()), "{a} vs {f}");
        }
    }

    #[test]
    fn flat_and_three_dimensional() {
        let bg = BackgroundParams::with_unit_torus(3, 0.2, 1.0).unwrap();
        let spec = MetricSpec::hm_type(bg);
        assert_eq!(torus_scalar(&spec, &Point::radial(2.0, 3)).unwrap(), 0.0);
        assert_eq!(torus_scalar_integral(&spec, 2.0, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn gauss_bonnet_in_two_dimensions() {
        let spec = wavy(4);
        let gb = gauss_bonnet_integral(&spec, 1.5, 0.3).unwrap();
        let coord = torus_scalar_integral(&spec, 1.5, 0.3).unwrap();
        assert!(gb.abs() < 1e-10, "{gb}");
        assert!(coord.is_finite());
    }
}
