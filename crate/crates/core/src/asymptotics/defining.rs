use serde::Serialize;

use super::integral::RadialIntegral;
use crate::error::Result;
use crate::metric::MetricSpec;
use crate::numerics::{geometric, poly_fit};

/// Coefficients of `r = x⁻¹ + c_{n−2} x^{n−2} + c_{n−1} x^{n−1} + O(xⁿ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RExpansion {
    pub order_n_minus_2: f64,
    pub order_n_minus_1: f64,
    pub std_errors: [f64; 2],
    pub predicted: [f64; 2],
}

/// The special defining function `x` with `|dx|_{x²g} = 1`, `xr → 1`.
#[derive(Debug, Clone)]
pub struct DefiningFunction {
    pub integral: RadialIntegral,
    pub expansion: RExpansion,
}

/// Radii spanning two decades of `x` in the collar, used for fits.
pub(crate) fn collar_radii(spec: &MetricSpec, count: usize) -> Vec<f64> {
    let scale = spec.r_plus().max(1.0);
    geometric(20.0 * scale, 2000.0 * scale, count)
}

impl DefiningFunction {
    pub fn c(&self) -> f64 {
        self.integral.c()
    }

    pub fn x(&self, r: f64) -> Result<f64> {
        self.integral.x(r)
    }

    pub fn r_of_x(&self, x: f64) -> Result<f64> {
        self.integral.r_of_x(x)
    }
}

/// Builds `x(r)` for `spec` and fits the expansion of `r(x)`.
pub fn defining_function(spec: &MetricSpec) -> Result<DefiningFunction> {
    let integral = RadialIntegral::new(spec.background.clone(), spec.exp_u_hat.clone())?;
    let n = spec.n() as i32;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in collar_radii(spec, 40) {
        let x = integral.x(r)?;
        xs.push(x);
        ys.push(integral.r_minus_inv_x(r)? / x.powi(n - 2));
    }
    let fit = poly_fit(&xs, &ys, 4)?;
    let nf = n as f64;
    let bg = &spec.background;
    let nn = n as u32;
    Ok(DefiningFunction {
        expansion: RExpansion {
            order_n_minus_2: fit.coeffs[0],
            order_n_minus_1: fit.coeffs[1],
            std_errors: [fit.std_errors[0], fit.std_errors[1]],
            predicted: [
                (spec.u_coeff(nn - 1) - 0.5 * bg.a()) / (nf - 1.0),
                (spec.u_coeff(nn) + 0.5 * bg.r0n()) / nf,
            ],
        },
        integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BackgroundParams;

    #[test]
    fn hm_expansion() {
        for n in [3, 4, 5] {
            let spec = MetricSpec::horowitz_myers(n, 1.2, vec![1.0; n - 2]).unwrap();
            let d = defining_function(&spec).unwrap();
            assert!(d.expansion.order_n_minus_2.abs() < 1e-6, "{:?}", d.expansion);
            let expected = 1.2_f64.powi(n as i32) / (2.0 * n as f64);
            assert!(
                (d.expansion.order_n_minus_1 - expected).abs() < 1e-4,
                "{:?}",
                d.expansion
            );
        }
    }

    #[test]
    fn u_and_a_shift() {
        let bg = BackgroundParams::with_unit_torus(3, 0.2, 1.0).unwrap();
        let mut spec = MetricSpec::hm_type(bg);
        spec.set_u(2, 0.3);
        let d = defining_function(&spec).unwrap();
        assert!((d.expansion.order_n_minus_2 - 0.1).abs() < 1e-4, "{:?}", d.expansion);
    }
}
