//! The radial integral `I(r) = ∫_{r₊}^r S(s) / (s√Q(s)) ds` and its
//! asymptotic split `I(r) = ln r + C + K(r)` with `K(r) → 0`.
//!
//! Near the horizon the substitution `s = r₊ + τ²` removes the square-root
//! singularity. Far out, `K` is integrated in `t = 1/s` up to `t = 0`, so no
//! truncated tail is needed.

use crate::error::Result;
use crate::metric::{BackgroundParams, RadialSeries};
use crate::numerics::{integrate, QuadOptions};

#[derive(Debug, Clone)]
pub struct RadialIntegral {
    bg: BackgroundParams,
    profile: RadialSeries<f64>,
    c: f64,
}

impl RadialIntegral {
    /// Integral with numerator `S = profile` (a series with constant term 1).
    pub fn new(bg: BackgroundParams, profile: RadialSeries<f64>) -> Result<Self> {
        let mut out = Self { bg, profile, c: 0.0 };
        let r = out.switch_radius();
        out.c = out.i_near((r - out.bg.r_plus()).sqrt())? - r.ln() - out.k_far(r)?;
        Ok(out)
    }

    pub fn background(&self) -> &BackgroundParams {
        &self.bg
    }

    /// Radius `2r₊` separating the near and far evaluations.
    pub fn switch_radius(&self) -> f64 {
        2.0 * self.bg.r_plus()
    }

    /// `C = lim (I(r) − ln r)`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `S/√Q − 1` at radius `s`.
    pub fn integrand_minus_one(&self, s: f64) -> f64 {
        (self.profile.jet(s).dev.ln_1p() - 0.5 * self.bg.ln_q(s)).exp_m1()
    }

    /// `I(r₊ + t²)`.
    pub fn i_near(&self, t: f64) -> Result<f64> {
        let rp = self.bg.r_plus();
        let f = |tau: f64| {
            let s = rp + tau * tau;
            2.0 * self.profile.eval(s) / (s * self.bg.q_over_gap(tau * tau).sqrt())
        };
        Ok(integrate(f, 0.0, t, QuadOptions::default())?.0)
    }

    /// `K(r) = −∫_r^∞ (S/√Q − 1) ds/s`, integrated in `t = 1/s`.
    pub fn k_far(&self, r: f64) -> Result<f64> {
        let f = |t: f64| {
            if t == 0.0 {
                0.0
            } else {
                self.integrand_minus_one(1.0 / t) / t
            }
        };
        Ok(-integrate(f, 0.0, 1.0 / r, QuadOptions::default())?.0)
    }

    pub fn i(&self, r: f64) -> Result<f64> {
        if r <= self.switch_radius() {
            self.i_near((r - self.bg.r_plus()).max(0.0).sqrt())
        } else {
            Ok(r.ln() + self.c + self.k_far(r)?)
        }
    }

    pub fn k(&self, r: f64) -> Result<f64> {
        if r <= self.switch_radius() {
            Ok(self.i(r)? - r.ln() - self.c)
        } else {
            self.k_far(r)
        }
    }

    /// `ln x = C − I(r)`.
    pub fn ln_x(&self, r: f64) -> Result<f64> {
        Ok(-r.ln() - self.k(r)?)
    }

    /// `x = e^{−K}/r`.
    pub fn x(&self, r: f64) -> Result<f64> {
        Ok((-self.k(r)?).exp() / r)
    }

    /// `r − 1/x = −r(e^{K} − 1)`, without cancellation.
    pub fn r_minus_inv_x(&self, r: f64) -> Result<f64> {
        Ok(-r * self.k(r)?.exp_m1())
    }

    /// Radius with `x(r) = x`, by fixed-point iteration on `r = e^{−K(r)}/x`
    /// in the far region and bisection on `ln x` otherwise.
    pub fn r_of_x(&self, x: f64) -> Result<f64> {
        let rp = self.bg.r_plus();
        let target = x.ln();
        if x < 1.0 / (4.0 * rp) {
            let mut r = 1.0 / x;
            for _ in 0..60 {
                let next = (-self.k(r)?).exp() / x;
                if (next - r).abs() <= 1e-15 * r {
                    return Ok(next);
                }
                r = next;
            }
            return Ok(r);
        }
        let (mut lo, mut hi) = (rp, 8.0 * rp.max(1.0 / x));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.ln_x(mid)? > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// For `S = 1`, `a = 0`: `I(r) = (2/n) arccosh((r/r0)^{n/2})`.
    #[test]
    fn closed_form_hm() {
        for n in [3usize, 4, 5] {
            let bg = BackgroundParams::with_unit_torus(n, 0.0, 1.3).unwrap();
            let integral = RadialIntegral::new(bg, RadialSeries::with_terms([(0, 1.0)])).unwrap();
            let nf = n as f64;
            for r in [1.31, 1.6, 2.5, 2.7, 40.0] {
                let exact = (2.0 / nf) * (r / 1.3_f64).powf(nf / 2.0).acosh();
                assert!((integral.i(r).unwrap() - exact).abs() < 1e-12, "n={n} r={r}");
            }
            let c_exact = 2.0 * (2.0_f64).ln() / nf - 1.3_f64.ln();
            assert!((integral.c() - c_exact).abs() < 1e-12);
        }
    }

    #[test]
    fn x_inverts() {
        let bg = BackgroundParams::with_unit_torus(4, 0.3, 1.0).unwrap();
        let mut s = RadialSeries::with_terms([(0, 1.0)]);
        s.terms.insert(3, 0.1);
        let integral = RadialIntegral::new(bg, s).unwrap();
        for r in [1.2, 3.0, 50.0] {
            let x = integral.x(r).unwrap();
            assert!((integral.r_of_x(x).unwrap() - r).abs() < 1e-10 * r);
        }
    }
}
