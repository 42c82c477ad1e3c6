use nalgebra::DMatrix;

use super::background::BackgroundParams;
use super::fourier::{FourierSeries, TorusTensorSeries};
use super::radial::{ProfileJet, RadialSeries, ScalarJet, TensorProfileJet};
use crate::error::{Error, Result};

/// A point `(r, ξ, φ³, …, φⁿ)`; `angles[0]` is ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub r: f64,
    pub angles: Vec<f64>,
}

impl Point {
    pub fn new(r: f64, angles: Vec<f64>) -> Self {
        Self { r, angles }
    }

    /// Point at radius `r` with all angles zero.
    pub fn radial(r: f64, n: usize) -> Self {
        Self {
            r,
            angles: vec![0.0; n - 1],
        }
    }

    pub fn xi(&self) -> f64 {
        self.angles[0]
    }

    /// Coordinates `(r, ξ, φ…)` as one vector.
    pub fn coords(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(self.angles.len() + 1);
        c.push(self.r);
        c.extend_from_slice(&self.angles);
        c
    }
}

/// The metric `g = e^{2u}dr² + e^{2v}dξ² + r²(δ + ŵ)` with
/// `u = −½ln A + û`, `v = ½ln A + v̂`, `A = r²Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub background: BackgroundParams,
    /// Period of ξ; equal to `β` unless deliberately detuned.
    pub xi_period: f64,
    pub exp_u_hat: RadialSeries<f64>,
    pub exp_v_hat: RadialSeries<FourierSeries>,
    pub w_hat: RadialSeries<TorusTensorSeries>,
}

/// Everything the curvature formulas need at one point.
#[derive(Debug, Clone)]
pub struct LocalData {
    pub r: f64,
    pub su: ScalarJet,
    pub sv: ProfileJet,
    pub w: TensorProfileJet,
}

impl MetricSpec {
    /// The unperturbed HM-type metric `ĝ` (all hats zero).
    pub fn hm_type(background: BackgroundParams) -> Self {
        let xi_period = background.beta();
        Self {
            xi_period,
            exp_u_hat: RadialSeries::with_terms([(0, 1.0)]),
            exp_v_hat: RadialSeries::new(),
            w_hat: RadialSeries::new(),
            background,
        }
    }

    /// The Horowitz–Myers metric of radius `r_breve0`.
    pub fn horowitz_myers(n: usize, r_breve0: f64, torus_periods: Vec<f64>) -> Result<Self> {
        Ok(Self::hm_type(BackgroundParams::new(n, 0.0, r_breve0, torus_periods)?))
    }

    pub fn n(&self) -> usize {
        self.background.n()
    }

    pub fn r_plus(&self) -> f64 {
        self.background.r_plus()
    }

    /// Angle periods `(β₀, λ₃, …, λₙ)`.
    pub fn angle_periods(&self) -> Vec<f64> {
        let mut p = vec![self.xi_period];
        p.extend_from_slice(self.background.torus_periods());
        p
    }

    /// `Vol(∂M, h₀) = β₀ ∏ λᵢ`.
    pub fn boundary_volume(&self) -> f64 {
        self.xi_period * self.background.torus_volume()
    }

    /// Empty angular series with the ξ-period.
    pub fn angular_zero(&self) -> FourierSeries {
        FourierSeries::angular(self.xi_period)
    }

    /// Empty tensor series over `(ξ, φ)`.
    pub fn tensor_zero(&self) -> TorusTensorSeries {
        TorusTensorSeries::zeros(self.n() - 2, self.angle_periods())
    }

    /// Sets the order-`m` coefficient of `e^û`.
    pub fn set_u(&mut self, m: u32, c: f64) {
        self.exp_u_hat.terms.insert(m, c);
    }

    /// Adds a constant (ξ-independent) order-`m` coefficient to `e^v̂`.
    pub fn add_v_const(&mut self, m: u32, c: f64) {
        self.add_v_mode(m, 0, c, 0.0);
    }

    /// Adds `c cos(2πkξ/β₀) + s sin(2πkξ/β₀)` at order `m` of `e^v̂`.
    pub fn add_v_mode(&mut self, m: u32, k: i32, c: f64, s: f64) {
        let period = self.xi_period;
        self.exp_v_hat
            .terms
            .entry(m)
            .or_insert_with(|| FourierSeries::angular(period))
            .push(vec![k], c, s)
            .expect("single angle");
    }

    /// Adds a term to component `(i, j)` (0-based on the torus) of the
    /// order-`m` coefficient of `ŵ`. `k` indexes `(ξ, φ³, …)`.
    pub fn add_w_mode(&mut self, m: u32, i: usize, j: usize, k: Vec<i32>, c: f64, s: f64) -> Result<()> {
        let zero = self.tensor_zero();
        self.w_hat
            .terms
            .entry(m)
            .or_insert(zero)
            .component_mut(i, j)
            .push(k, c, s)
    }

    /// Order-`m` coefficient of `e^û`.
    pub fn u_coeff(&self, m: u32) -> f64 {
        self.exp_u_hat.order(m)
    }

    /// Order-`m` coefficient of `e^v̂` as a series in ξ.
    pub fn v_coeff(&self, m: u32) -> FourierSeries {
        self.exp_v_hat.order(m, self.xi_period)
    }

    /// `w_m` in `ŵ = 2w_{n−1}/r^{n−1} + 2w_n/rⁿ + …`, i.e. half the stored
    /// order-`m` coefficient of `ŵ`.
    pub fn w_coeff(&self, m: u32) -> TorusTensorSeries {
        let mut out = self.tensor_zero();
        if let Some(t) = self.w_hat.terms.get(&m) {
            out.add_scaled(t, 0.5);
        }
        out
    }

    /// Whether the torus block depends on the torus angles.
    pub fn w_depends_on_torus(&self) -> bool {
        (1..self.n() - 1).any(|j| self.w_hat.depends_on(j))
    }

    fn check_point(&self, p: &Point) -> Result<()> {
        if p.angles.len() != self.n() - 1 {
            return Err(Error::InvalidSpec(format!(
                "point has {} angles, expected {}",
                p.angles.len(),
                self.n() - 1
            )));
        }
        if !(p.r > self.r_plus()) {
            return Err(Error::SingularAtHorizon {
                r: p.r,
                r_plus: self.r_plus(),
            });
        }
        Ok(())
    }

    /// Metric components in coordinates `(r, ξ, φ³, …, φⁿ)`.
    pub fn eval_metric(&self, p: &Point) -> Result<DMatrix<f64>> {
        self.check_point(p)?;
        let n = self.n();
        let r = p.r;
        let a = self.background.a_jet(r)[0];
        let su = self.exp_u_hat.eval(r);
        let sv = self.exp_v_hat.eval(r, p.xi());
        let mut g = DMatrix::zeros(n, n);
        g[(0, 0)] = su * su / a;
        g[(1, 1)] = sv * sv * a;
        let w = self.w_hat.eval(r, &p.angles, n - 2);
        for i in 0..n - 2 {
            for j in 0..n - 2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                g[(i + 2, j + 2)] = r * r * (delta + w[(i, j)]);
            }
        }
        Ok(g)
    }

    /// Profile jets at a point with `r > r₊`.
    pub fn local(&self, p: &Point) -> Result<LocalData> {
        self.check_point(p)?;
        Ok(self.local_unchecked(p))
    }

    pub(crate) fn local_unchecked(&self, p: &Point) -> LocalData {
        LocalData {
            r: p.r,
            su: self.exp_u_hat.jet(p.r),
            sv: self.exp_v_hat.jet(p.r, p.xi()),
            w: self.w_hat.jet(p.r, &p.angles, self.n() - 2),
        }
    }

    /// Copy with the constant terms of `e^û`, `e^v̂` normalized to 1.
    pub fn normalized(mut self) -> Self {
        self.exp_u_hat.terms.entry(0).or_insert(1.0);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hm_metric_at_r2() {
        let spec = MetricSpec::horowitz_myers(3, 1.0, vec![1.0]).unwrap();
        let g = spec.eval_metric(&Point::new(2.0, vec![0.3, 0.1])).unwrap();
        assert!((g[(0, 0)] - 2.0 / 7.0).abs() < 1e-15);
        assert!((g[(1, 1)] - 3.5).abs() < 1e-14);
        assert!((g[(2, 2)] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn hm_type_grr() {
        let bg = BackgroundParams::with_unit_torus(3, 1.0, 1.0).unwrap();
        let spec = MetricSpec::hm_type(bg);
        let g = spec.eval_metric(&Point::new(2.0, vec![0.0, 0.0])).unwrap();
        assert!((g[(0, 0)] - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn horizon_is_rejected() {
        let spec = MetricSpec::horowitz_myers(3, 1.0, vec![1.0]).unwrap();
        assert!(matches!(
            spec.eval_metric(&Point::new(1.0, vec![0.0, 0.0])),
            Err(Error::SingularAtHorizon { .. })
        ));
    }
}
