//! Finite trigonometric series on tori, with exact derivatives.

use std::f64::consts::TAU;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// One term `c·cos θ + s·sin θ` with phase `θ = Σ 2π kⱼ xⱼ / Pⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub k: Vec<i32>,
    pub cos: f64,
    pub sin: f64,
}

/// A finite Fourier series in `d` periodic variables.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    periods: Vec<f64>,
    modes: Vec<Mode>,
}

/// Series in ξ alone (period `β`).
pub type AngularSeries = FourierSeries;

/// Value, gradient and Hessian of a scalar at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: Vec<f64>,
    /// Row-major `d × d`.
    pub hess: Vec<f64>,
}

impl Jet {
    pub fn zero(d: usize) -> Self {
        Self {
            value: 0.0,
            grad: vec![0.0; d],
            hess: vec![0.0; d * d],
        }
    }

    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[i * self.grad.len() + j]
    }
}

impl FourierSeries {
    pub fn new(periods: Vec<f64>) -> Self {
        Self {
            periods,
            modes: Vec::new(),
        }
    }

    /// Series in one angle of period `period`.
    pub fn angular(period: f64) -> Self {
        Self::new(vec![period])
    }

    /// The constant series `c`.
    pub fn constant(periods: Vec<f64>, c: f64) -> Self {
        let d = periods.len();
        let mut s = Self::new(periods);
        if c != 0.0 {
            s.push(vec![0; d], c, 0.0).expect("dimension matches");
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().all(|m| m.cos == 0.0 && m.sin == 0.0)
    }

    /// Adds a term; repeated wave vectors accumulate.
    pub fn push(&mut self, k: Vec<i32>, cos: f64, sin: f64) -> Result<()> {
        if k.len() != self.dim() {
            return Err(Error::InvalidSpec(format!(
                "mode {:?} has {} indices, series has {} angles",
                k,
                k.len(),
                self.dim()
            )));
        }
        if let Some(m) = self.modes.iter_mut().find(|m| m.k == k) {
            m.cos += cos;
            m.sin += sin;
        } else {
            self.modes.push(Mode { k, cos, sin });
        }
        Ok(())
    }

    /// `self += factor · other` (periods must agree).
    pub fn add_scaled(&mut self, other: &FourierSeries, factor: f64) {
        for m in &other.modes {
            self.push(m.k.clone(), factor * m.cos, factor * m.sin)
                .expect("matching dimensions");
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = Self::new(self.periods.clone());
        out.add_scaled(self, factor);
        out
    }

    /// Mean over the torus (the amplitude of the zero mode).
    pub fn mean(&self) -> f64 {
        self.modes
            .iter()
            .filter(|m| m.k.iter().all(|&k| k == 0))
            .map(|m| m.cos)
            .sum()
    }

    /// Whether any term depends on angle `j`.
    pub fn depends_on(&self, j: usize) -> bool {
        self.modes.iter().any(|m| m.k[j] != 0 && (m.cos != 0.0 || m.sin != 0.0))
    }

    /// Largest |kⱼ| over the terms.
    pub fn max_wavenumber(&self, j: usize) -> u32 {
        self.modes.iter().map(|m| m.k[j].unsigned_abs()).max().unwrap_or(0)
    }

    fn frequencies(&self, m: &Mode) -> impl Iterator<Item = f64> + '_ {
        let k = m.k.clone();
        self.periods.iter().zip(k).map(|(p, k)| TAU * k as f64 / p)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for m in &self.modes {
            let theta: f64 = self.frequencies(m).zip(x).map(|(w, xi)| w * xi).sum();
            let (s, c) = theta.sin_cos();
            acc += m.cos * c + m.sin * s;
        }
        acc
    }

    /// Value together with all first and second angular derivatives.
    pub fn jet(&self, x: &[f64]) -> Jet {
        let d = self.dim();
        let mut out = Jet::zero(d);
        let mut w = vec![0.0; d];
        for m in &self.modes {
            for (wi, (p, k)) in w.iter_mut().zip(self.periods.iter().zip(&m.k)) {
                *wi = TAU * *k as f64 / p;
            }
            let theta: f64 = w.iter().zip(x).map(|(wi, xi)| wi * xi).sum();
            let (s, c) = theta.sin_cos();
            let f = m.cos * c + m.sin * s;
            let df = -m.cos * s + m.sin * c;
            out.value += f;
            for i in 0..d {
                if w[i] == 0.0 {
                    continue;
                }
                out.grad[i] += w[i] * df;
                for j in 0..d {
                    out.hess[i * d + j] -= w[i] * w[j] * f;
                }
            }
        }
        out
    }

    /// Value, first and second derivative in angle `j` only.
    pub fn partials(&self, x: &[f64], j: usize) -> [f64; 3] {
        let mut out = [0.0; 3];
        for m in &self.modes {
            let theta: f64 = self.frequencies(m).zip(x).map(|(w, xi)| w * xi).sum();
            let wj = TAU * m.k[j] as f64 / self.periods[j];
            let (s, c) = theta.sin_cos();
            let f = m.cos * c + m.sin * s;
            out[0] += f;
            out[1] += wj * (-m.cos * s + m.sin * c);
            out[2] -= wj * wj * f;
        }
        out
    }
}

/// A symmetric `m × m` tensor on `T^m` whose components are Fourier
/// series in `(ξ, φ³, …, φⁿ)`; only the upper triangle is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusTensorSeries {
    m: usize,
    periods: Vec<f64>,
    components: Vec<FourierSeries>,
}

/// Value and angular derivatives of a tensor series at a point.
#[derive(Debug, Clone)]
pub struct TensorJet {
    pub value: DMatrix<f64>,
    /// `grad[a]` is `∂_a` of the tensor.
    pub grad: Vec<DMatrix<f64>>,
    /// `hess[a*d+b]` is `∂_a ∂_b` of the tensor.
    pub hess: Vec<DMatrix<f64>>,
}

impl TensorJet {
    pub fn zero(m: usize, d: usize) -> Self {
        Self {
            value: DMatrix::zeros(m, m),
            grad: vec![DMatrix::zeros(m, m); d],
            hess: vec![DMatrix::zeros(m, m); d * d],
        }
    }
}

impl TorusTensorSeries {
    /// Zero tensor of size `m` over angles with the given periods.
    pub fn zeros(m: usize, periods: Vec<f64>) -> Self {
        let components = (0..m * (m + 1) / 2)
            .map(|_| FourierSeries::new(periods.clone()))
            .collect();
        Self { m, periods, components }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.m - i * (i + 1) / 2 + j
    }

    pub fn component(&self, i: usize, j: usize) -> &FourierSeries {
        &self.components[self.index(i, j)]
    }

    pub fn component_mut(&mut self, i: usize, j: usize) -> &mut FourierSeries {
        let idx = self.index(i, j);
        &mut self.components[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FourierSeries::is_zero)
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &TorusTensorSeries, factor: f64) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.add_scaled(b, factor);
        }
    }

    /// Trace with respect to the flat metric `δ`, as a Fourier series.
    pub fn trace(&self) -> FourierSeries {
        let mut out = FourierSeries::new(self.periods.clone());
        for i in 0..self.m {
            out.add_scaled(self.component(i, i), 1.0);
        }
        out
    }

    pub fn depends_on(&self, j: usize) -> bool {
        self.components.iter().any(|c| c.depends_on(j))
    }

    pub fn max_wavenumber(&self, j: usize) -> u32 {
        self.components.iter().map(|c| c.max_wavenumber(j)).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.m, self.m);
        for i in 0..self.m {
            for j in i..self.m {
                let v = self.component(i, j).eval(x);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }

    pub fn jet(&self, x: &[f64]) -> TensorJet {
        let d = self.periods.len();
        let mut out = TensorJet::zero(self.m, d);
        for i in 0..self.m {
            for j in i..self.m {
                let c = self.component(i, j);
                if c.modes().is_empty() {
                    continue;
                }
                let jet = c.jet(x);
                out.value[(i, j)] = jet.value;
                out.value[(j, i)] = jet.value;
                for a in 0..d {
                    out.grad[a][(i, j)] = jet.grad[a];
                    out.grad[a][(j, i)] = jet.grad[a];
                    for b in 0..d {
                        out.hess[a * d + b][(i, j)] = jet.hess[a * d + b];
                        out.hess[a * d + b][(j, i)] = jet.hess[a * d + b];
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_match_finite_differences() {
        let mut f = FourierSeries::new(vec![2.0, 3.0]);
        f.push(vec![1, 2], 0.3, -0.7).unwrap();
        f.push(vec![0, 1], 1.1, 0.2).unwrap();
        f.push(vec![0, 0], 0.5, 0.0).unwrap();
        let x = [0.37, 1.21];
        let jet = f.jet(&x);
        let h = 1e-5;
        for a in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let fd = (f.eval(&xp) - f.eval(&xm)) / (2.0 * h);
            assert!((jet.grad[a] - fd).abs() < 1e-8);
            let fd2 = (f.jet(&xp).grad[0] - f.jet(&xm).grad[0]) / (2.0 * h);
            assert!((jet.hess_at(a, 0) - fd2).abs() < 1e-7);
        }
        assert!((f.mean() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tensor_is_symmetric() {
        let mut t = TorusTensorSeries::zeros(3, vec![1.0, 1.0, 2.0, 2.0]);
        t.component_mut(2, 0).push(vec![1, 0, 1, 0], 0.4, 0.1).unwrap();
        let v = t.eval(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(v[(0, 2)], v[(2, 0)]);
        assert!(v[(0, 2)] != 0.0);
    }
}
