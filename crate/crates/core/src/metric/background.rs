use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::bisect;

/// Background data `(n, a, r0, λ)` of the HM-type family, with the
/// horizon radius `r₊` resolved at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBackground", into = "RawBackground")]
pub struct BackgroundParams {
    n: usize,
    a: f64,
    r0: f64,
    torus_periods: Vec<f64>,
    r_plus: f64,
}

#[derive(Serialize, Deserialize)]
struct RawBackground {
    n: usize,
    a: f64,
    r0: f64,
    torus_periods: Vec<f64>,
}

impl TryFrom<RawBackground> for BackgroundParams {
    type Error = Error;
    fn try_from(raw: RawBackground) -> Result<Self> {
        BackgroundParams::new(raw.n, raw.a, raw.r0, raw.torus_periods)
    }
}

impl From<BackgroundParams> for RawBackground {
    fn from(bg: BackgroundParams) -> Self {
        RawBackground {
            n: bg.n,
            a: bg.a,
            r0: bg.r0,
            torus_periods: bg.torus_periods,
        }
    }
}

impl BackgroundParams {
    pub fn new(n: usize, a: f64, r0: f64, torus_periods: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidBackground(format!(
                "dimension n = {n} must be at least 3"
            )));
        }
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidBackground(format!("r0 = {r0} must be positive")));
        }
        if !a.is_finite() {
            return Err(Error::InvalidBackground(format!("a = {a} is not finite")));
        }
        if torus_periods.len() != n - 2 {
            return Err(Error::InvalidBackground(format!(
                "expected {} torus periods, got {}",
                n - 2,
                torus_periods.len()
            )));
        }
        if let Some(bad) = torus_periods.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidBackground(format!("torus period {bad} must be positive")));
        }
        let r_plus = find_r_plus_raw(n, a, r0)?;
        Ok(Self {
            n,
            a,
            r0,
            torus_periods,
            r_plus,
        })
    }

    /// Unit torus periods.
    pub fn with_unit_torus(n: usize, a: f64, r0: f64) -> Result<Self> {
        Self::new(n, a, r0, vec![1.0; n.saturating_sub(2)])
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn r0(&self) -> f64 {
        self.r0
    }
    pub fn torus_periods(&self) -> &[f64] {
        &self.torus_periods
    }
    pub fn r_plus(&self) -> f64 {
        self.r_plus
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `r0ⁿ`.
    pub fn r0n(&self) -> f64 {
        self.r0.powi(self.n as i32)
    }

    /// `Q(r) − 1 = a r^{1−n} − r0ⁿ r^{−n}`.
    pub fn q_minus_one(&self, r: f64) -> f64 {
        let n = self.n as i32;
        self.a * r.powi(1 - n) - (self.r0 / r).powi(n)
    }

    pub fn q(&self, r: f64) -> f64 {
        1.0 + self.q_minus_one(r)
    }

    /// `ln Q(r)`, accurate at large `r`.
    pub fn ln_q(&self, r: f64) -> f64 {
        self.q_minus_one(r).ln_1p()
    }

    /// `Q'(r)`.
    pub fn dq(&self, r: f64) -> f64 {
        let n = self.n as i32;
        (1 - n) as f64 * self.a * r.powi(-n) + self.nf() * self.r0n() * r.powi(-n - 1)
    }

    /// `Q(r₊+δ)/δ`, finite and accurate as `δ → 0`.
    pub fn q_over_gap(&self, delta: f64) -> f64 {
        let rp = self.r_plus;
        let mut binom = 1.0;
        let mut acc = self.a;
        for k in 1..=self.n {
            binom = binom * (self.n + 1 - k) as f64 / k as f64;
            acc += binom * rp.powi((self.n - k) as i32) * delta.powi(k as i32 - 1);
        }
        acc / (rp + delta).powi(self.n as i32)
    }

    /// `A(r) = r² Q(r)` and its first two derivatives.
    pub fn a_jet(&self, r: f64) -> [f64; 3] {
        let n = self.n as i32;
        let nf = self.nf();
        let a = self.a;
        let c = self.r0n();
        [
            r * r + a * r.powi(3 - n) - c * r.powi(2 - n),
            2.0 * r + (3.0 - nf) * a * r.powi(2 - n) - (2.0 - nf) * c * r.powi(1 - n),
            2.0 + (3.0 - nf) * (2.0 - nf) * a * r.powi(1 - n) - (2.0 - nf) * (1.0 - nf) * c * r.powi(-n),
        ]
    }

    /// `r0ⁿ / r₊ⁿ`.
    fn horizon_ratio(&self) -> f64 {
        (self.r0 / self.r_plus).powi(self.n as i32)
    }

    /// The ξ-period `β` that closes the ξ-circle smoothly at `r₊`.
    pub fn beta(&self) -> f64 {
        4.0 * PI / (self.r_plus * (self.nf() - 1.0 + self.horizon_ratio()))
    }

    /// `r̆₀ = 4π/(nβ)`: the HM radius with ξ-period `β`.
    pub fn r_breve0(&self) -> f64 {
        self.r_plus * (self.nf() - 1.0 + self.horizon_ratio()) / self.nf()
    }

    /// `∏ λᵢ`.
    pub fn torus_volume(&self) -> f64 {
        self.torus_periods.iter().product()
    }
}

/// The HM radius whose ξ-period is `beta`.
pub fn r_breve_for_period(n: usize, beta: f64) -> f64 {
    4.0 * PI / (n as f64 * beta)
}

fn find_r_plus_raw(n: usize, a: f64, r0: f64) -> Result<f64> {
    let ni = n as i32;
    let q = |r: f64| 1.0 + a * r.powi(1 - ni) - (r0 / r).powi(ni);
    let lo = 1e-6 * r0;
    let hi = 1e3 * r0.max(a.abs() + 1.0);
    let samples = 20_000;
    let step = (hi / lo).ln() / samples as f64;
    let mut right = hi;
    let mut q_right = q(hi);
    for i in (0..samples).rev() {
        let left = lo * (step * i as f64).exp();
        let q_left = q(left);
        if q_left == 0.0 {
            return Ok(left);
        }
        if (q_left > 0.0) != (q_right > 0.0) {
            return Ok(bisect(q, left, right, 4.0 * f64::EPSILON));
        }
        right = left;
        q_right = q_left;
    }
    Err(Error::NoRoot { n, a, r0 })
}

/// Largest positive root of `Q`.
pub fn find_r_plus(bg: &BackgroundParams) -> f64 {
    bg.r_plus
}

pub fn period_beta(bg: &BackgroundParams) -> f64 {
    bg.beta()
}

pub fn hm_reference(bg: &BackgroundParams) -> f64 {
    bg.r_breve0()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_roots() {
        let bg = BackgroundParams::with_unit_torus(3, 0.0, 1.0).unwrap();
        assert!((bg.r_plus() - 1.0).abs() < 1e-14);
        assert!((bg.beta() - 4.0 * PI / 3.0).abs() < 1e-13);
        let bg = BackgroundParams::with_unit_torus(4, 0.0, 2.0).unwrap();
        assert!((bg.beta() - PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn q_over_gap_matches_direct_ratio() {
        let bg = BackgroundParams::with_unit_torus(5, 0.7, 1.3).unwrap();
        let rp = bg.r_plus();
        for d in [1e-3, 0.1, 1.0] {
            let direct = bg.q(rp + d) / d;
            assert!((bg.q_over_gap(d) - direct).abs() < 1e-10 * direct.abs());
        }
    }

    #[test]
    fn a_jet_derivatives() {
        let bg = BackgroundParams::with_unit_torus(4, -0.5, 1.0).unwrap();
        let r = 2.3;
        let h = 1e-5;
        let [_, d1, d2] = bg.a_jet(r);
        let fd1 = (bg.a_jet(r + h)[0] - bg.a_jet(r - h)[0]) / (2.0 * h);
        let fd2 = (bg.a_jet(r + h)[1] - bg.a_jet(r - h)[1]) / (2.0 * h);
        assert!((d1 - fd1).abs() < 1e-7);
        assert!((d2 - fd2).abs() < 1e-7);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BackgroundParams::with_unit_torus(2, 0.0, 1.0).is_err());
        assert!(BackgroundParams::with_unit_torus(3, 0.0, -1.0).is_err());
        assert!(BackgroundParams::new(4, 0.0, 1.0, vec![1.0]).is_err());
    }
}
