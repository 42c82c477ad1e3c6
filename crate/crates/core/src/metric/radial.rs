//! Finite series `f(r) = Σ c_m r^{−m}` with coefficients that may depend on
//! the angles.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::fourier::{FourierSeries, TensorJet, TorusTensorSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSeries<C> {
    pub terms: BTreeMap<u32, C>,
}

impl<C> Default for RadialSeries<C> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<C> RadialSeries<C> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Smallest order present.
    pub fn min_order(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn max_order(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coefficient(&self, m: u32) -> Option<&C> {
        self.terms.get(&m)
    }
}

/// `r^{−m}` and its first two radial derivatives.
#[inline]
pub fn power_jet(r: f64, m: u32) -> [f64; 3] {
    let mf = m as f64;
    let p = r.powi(-(m as i32));
    [p, -mf * p / r, mf * (mf + 1.0) * p / (r * r)]
}

/// Radial jet of a scalar series: value, `value − 1` (summed without
/// cancellation), first and second derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub dev: f64,
    pub d1: f64,
    pub d2: f64,
}

impl RadialSeries<f64> {
    pub fn with_terms(terms: impl IntoIterator<Item = (u32, f64)>) -> Self {
        Self {
            terms: terms.into_iter().collect(),
        }
    }

    pub fn order(&self, m: u32) -> f64 {
        self.terms.get(&m).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.jet(r).value
    }

    pub fn jet(&self, r: f64) -> ScalarJet {
        let mut out = ScalarJet {
            value: 0.0,
            dev: 0.0,
            d1: 0.0,
            d2: 0.0,
        };
        let mut c0 = 0.0;
        for (&m, &c) in &self.terms {
            if m == 0 {
                c0 += c;
                continue;
            }
            let [p, dp, ddp] = power_jet(r, m);
            out.dev += c * p;
            out.d1 += c * dp;
            out.d2 += c * ddp;
        }
        out.value = c0 + out.dev;
        out.dev += c0 - 1.0;
        out
    }
}

/// Radial and ξ-derivatives of an angular profile at `(r, ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileJet {
    pub value: f64,
    /// `value − 1` assembled without cancellation when the constant term is 1.
    pub dev: f64,
    pub dr: f64,
    pub drr: f64,
    pub dxi: f64,
    pub dxixi: f64,
    pub drxi: f64,
}

impl RadialSeries<FourierSeries> {
    /// Coefficient series at order `m` (zero series if absent).
    pub fn order(&self, m: u32, period: f64) -> FourierSeries {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(|| FourierSeries::angular(period))
    }

    pub fn eval(&self, r: f64, xi: f64) -> f64 {
        self.jet(r, xi).value
    }

    pub fn jet(&self, r: f64, xi: f64) -> ProfileJet {
        let mut out = ProfileJet {
            value: 0.0,
            dev: 0.0,
            dr: 0.0,
            drr: 0.0,
            dxi: 0.0,
            dxixi: 0.0,
            drxi: 0.0,
        };
        let x = [xi];
        for (&m, series) in &self.terms {
            let [f, fx, fxx] = series.partials(&x, 0);
            if m == 0 {
                out.dev += f - 1.0;
                out.dxi += fx;
                out.dxixi += fxx;
                continue;
            }
            let [p, dp, ddp] = power_jet(r, m);
            out.dev += f * p;
            out.dr += f * dp;
            out.drr += f * ddp;
            out.dxi += fx * p;
            out.dxixi += fxx * p;
            out.drxi += fx * dp;
        }
        out.value = 1.0 + out.dev;
        out
    }

    pub fn depends_on_xi(&self) -> bool {
        self.terms.values().any(|s| s.depends_on(0))
    }
}

/// Radial and angular jets of the torus perturbation `ŵ` at a point.
#[derive(Debug, Clone)]
pub struct TensorProfileJet {
    /// Angular jet of `ŵ` itself (angles ordered `ξ, φ³, …`).
    pub angular: TensorJet,
    pub dr: DMatrix<f64>,
    pub drr: DMatrix<f64>,
    /// `∂_r ∂_a ŵ` for each angle `a`.
    pub dr_grad: Vec<DMatrix<f64>>,
}

impl RadialSeries<TorusTensorSeries> {
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(TorusTensorSeries::is_zero)
    }

    pub fn eval(&self, r: f64, angles: &[f64], m: usize) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(m, m);
        for (&k, t) in &self.terms {
            out += t.eval(angles) * r.powi(-(k as i32));
        }
        out
    }

    pub fn jet(&self, r: f64, angles: &[f64], m: usize) -> TensorProfileJet {
        let d = angles.len();
        let mut out = TensorProfileJet {
            angular: TensorJet::zero(m, d),
            dr: DMatrix::zeros(m, m),
            drr: DMatrix::zeros(m, m),
            dr_grad: vec![DMatrix::zeros(m, m); d],
        };
        for (&k, t) in &self.terms {
            if t.is_zero() {
                continue;
            }
            let [p, dp, ddp] = power_jet(r, k);
            let jet = t.jet(angles);
            out.angular.value += &jet.value * p;
            out.dr += &jet.value * dp;
            out.drr += &jet.value * ddp;
            for a in 0..d {
                out.angular.grad[a] += &jet.grad[a] * p;
                out.dr_grad[a] += &jet.grad[a] * dp;
                for b in 0..d {
                    out.angular.hess[a * d + b] += &jet.hess[a * d + b] * p;
                }
            }
        }
        out
    }

    pub fn depends_on(&self, j: usize) -> bool {
        self.terms.values().any(|t| t.depends_on(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_derivatives() {
        let s = RadialSeries::with_terms([(0, 1.0), (2, 0.3), (5, -1.2)]);
        let r = 10.0;
        let h = 1e-4;
        let j = s.jet(r);
        let fd1 = (s.eval(r + h) - s.eval(r - h)) / (2.0 * h);
        let fd2 = (s.jet(r + h).d1 - s.jet(r - h).d1) / (2.0 * h);
        assert!((j.d1 - fd1).abs() < 1e-6 * j.d1.abs());
        assert!((j.d2 - fd2).abs() < 1e-6 * j.d2.abs());
        assert!((j.dev - (j.value - 1.0)).abs() < 1e-15);
    }
}
