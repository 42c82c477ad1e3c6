//! The radial gauge `r ↦ r̃` with `F(r̃/r̃₀) = I(r)`, which puts the radial
//! metric component into exact HM form `dr̃²/(r̃²(1 − r̃₀ⁿ/r̃ⁿ))`.

use serde::Serialize;

use crate::asymptotics::RadialIntegral;
use crate::error::{Error, Result};
use crate::metric::{BackgroundParams, MetricSpec, RadialSeries};
use crate::numerics::{geometric, newton_increasing, poly_fit};

/// Nodes of the tabulated map, including the horizon.
pub const TABLE_NODES: usize = 256;

/// `F(ρ) = ∫_1^ρ ds/(s√(1−s^{−n}))`, as a radial integral with unit horizon.
#[derive(Debug, Clone)]
pub struct FProfile {
    integral: RadialIntegral,
}

impl FProfile {
    pub fn new(n: usize) -> Result<Self> {
        let bg = BackgroundParams::new(n, 0.0, 1.0, vec![1.0; n - 2])?;
        Ok(Self {
            integral: RadialIntegral::new(bg, RadialSeries::with_terms([(0, 1.0)]))?,
        })
    }

    pub fn n(&self) -> usize {
        self.integral.background().n()
    }

    /// `F₀ = lim (F(ρ) − ln ρ)`.
    pub fn f0(&self) -> f64 {
        self.integral.c()
    }

    pub fn eval(&self, rho: f64) -> Result<f64> {
        self.integral.i(rho)
    }

    /// `F(1 + σ²)`.
    pub fn eval_near(&self, sigma: f64) -> Result<f64> {
        self.integral.i_near(sigma)
    }

    /// `K_F(ρ) = F(ρ) − ln ρ − F₀`.
    pub fn k(&self, rho: f64) -> Result<f64> {
        self.integral.k(rho)
    }

    /// `1 − ρ^{−n}` divided by `ρ − 1`.
    pub fn q_over_gap(&self, gap: f64) -> f64 {
        self.integral.background().q_over_gap(gap)
    }
}

/// `F(ρ)` for `ρ ≥ 1`.
pub fn f_profile(n: usize, rho: f64) -> Result<f64> {
    FProfile::new(n)?.eval(rho)
}

/// `F₀ = ∫_1^∞ (1/√(1−s^{−n}) − 1) ds/s`.
pub fn f0(n: usize) -> Result<f64> {
    Ok(FProfile::new(n)?.f0())
}

/// The gauge map at a single radius `r > r₊`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugePoint {
    pub r: f64,
    pub r_tilde: f64,
    /// `r̃ − r`
    pub delta: f64,
    /// `r̃/r̃₀ − 1`
    pub rho_minus_one: f64,
    /// `ln(dr̃/dr)`
    pub ln_dr: f64,
    pub dr: f64,
    /// `d ln(dr̃/dr)/dr`
    pub ell1: f64,
    /// `Q̃ = 1 − (r̃₀/r̃)ⁿ`
    pub q_tilde: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeNode {
    pub r: f64,
    pub r_tilde: f64,
    pub dr_tilde: f64,
}

/// Fitted and predicted coefficients of
/// `r̃ − r = α r^{2−n} + β r^{1−n} + O(r^{−n})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeExpansion {
    pub leading: f64,
    pub next: f64,
    pub predicted_leading: f64,
    pub predicted_next: f64,
}

impl GaugeExpansion {
    pub fn deviation(&self) -> f64 {
        (self.leading - self.predicted_leading)
            .abs()
            .max((self.next - self.predicted_next).abs())
    }
}

#[derive(Debug, Clone)]
pub struct GaugeMap {
    pub r_tilde_0: f64,
    pub f0: f64,
    /// Expansion constant of `I(r) = ln r + C + o(1)`.
    pub c: f64,
    pub table: Vec<GaugeNode>,
    pub expansion: GaugeExpansion,
    integral: RadialIntegral,
    f: FProfile,
    su: RadialSeries<f64>,
}

impl GaugeMap {
    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn background(&self) -> &BackgroundParams {
        self.integral.background()
    }

    pub fn r_plus(&self) -> f64 {
        self.background().r_plus()
    }

    /// `dr̃/dr` at `r₊`: `e^{2û(r₊)} r̃₀ / r̆₀`, with `r̆₀` the HM radius
    /// whose period closes the background ξ-circle.
    pub fn dr_at_horizon(&self) -> f64 {
        let su = self.su.eval(self.r_plus());
        su * su * self.r_tilde_0 / self.background().r_breve0()
    }

    /// Radius beyond which the analytic tail replaces the table.
    pub fn r_cut(&self) -> f64 {
        self.table.last().map_or(f64::INFINITY, |n| n.r)
    }

    /// `(r̃/r̃₀ − 1, r̃ − r)` solving `F(r̃/r̃₀) = I(r)`.
    fn solve(&self, r: f64) -> Result<(f64, f64)> {
        let n = self.n() as i32;
        if r <= self.integral.switch_radius() {
            let target = self.integral.i(r)?;
            let g0 = self.f.q_over_gap(0.0);
            let hi = target.exp_m1().sqrt() * (1.0 + 1e-9) + 1e-300;
            let start = 0.5 * target * g0.sqrt();
            let eval = |s: f64| match self.f.eval_near(s) {
                Ok(v) => (v - target, 2.0 / ((1.0 + s * s) * self.f.q_over_gap(s * s).sqrt())),
                Err(_) => (f64::NAN, f64::NAN),
            };
            let sigma = newton_increasing(eval, 0.0, hi, start, 1e-16 * hi);
            let gap = sigma * sigma;
            if !gap.is_finite() {
                return Err(Error::NoRoot {
                    n: self.n(),
                    a: self.background().a(),
                    r0: self.background().r0(),
                });
            }
            return Ok((gap, self.r_tilde_0 * (1.0 + gap) - r));
        }
        let k = self.integral.k_far(r)?;
        let kf = |z: f64| self.f.k(r * z.exp() / self.r_tilde_0);
        let z0 = k - kf(k)?;
        let tol = 1e-16 * k.abs().max(z0.abs()).max(1e-300);
        let eval = |z: f64| {
            let rho = r * z.exp() / self.r_tilde_0;
            match self.f.k(rho) {
                Ok(v) => (z + v - k, 1.0 / (1.0 - rho.powi(-n)).sqrt()),
                Err(_) => (f64::NAN, f64::NAN),
            }
        };
        let z = newton_increasing(eval, k, k + self.f0, z0, tol);
        let r_tilde = r * z.exp();
        Ok((r_tilde / self.r_tilde_0 - 1.0, r * z.exp_m1()))
    }

    /// Solves the gauge equation at `r > r₊` and evaluates `dr̃/dr`.
    pub fn point(&self, r: f64) -> Result<GaugePoint> {
        let rp = self.r_plus();
        if !(r > rp) {
            return Err(Error::SingularAtHorizon { r, r_plus: rp });
        }
        let bg = self.background();
        let nf = self.n() as f64;
        let (gap, delta) = self.solve(r)?;
        let r_tilde = r + delta;
        let su = self.su.jet(r);
        let near = r <= self.integral.switch_radius();
        let (ln_q_ratio, q_tilde) = if near {
            let qt = gap * self.f.q_over_gap(gap);
            let ratio = gap.ln() + self.f.q_over_gap(gap).ln() - (r - rp).ln() - bg.q_over_gap(r - rp).ln();
            (ratio, qt)
        } else {
            let m = -(1.0 + gap).powf(-nf);
            (m.ln_1p() - bg.ln_q(r), 1.0 + m)
        };
        let ln_dr = (delta / r).ln_1p() + 0.5 * ln_q_ratio + su.dev.ln_1p();
        let dr = ln_dr.exp();
        let rho_n = (1.0 + gap).powf(-nf);
        let dln_qt = nf * rho_n / (r_tilde * q_tilde);
        let dln_q = bg.dq(r) / bg.q(r);
        let ell1 = (r * ln_dr.exp_m1() - delta) / (r * r_tilde) + 0.5 * (dln_qt * dr - dln_q) + su.d1 / su.value;
        Ok(GaugePoint {
            r,
            r_tilde,
            delta,
            rho_minus_one: gap,
            ln_dr,
            dr,
            ell1,
            q_tilde,
        })
    }

    /// Radius `r` with `r̃(r) = r_tilde`, by safeguarded Newton on the
    /// solved map.
    pub fn r_of_r_tilde(&self, r_tilde: f64) -> Result<f64> {
        let rp = self.r_plus();
        if !(r_tilde > self.r_tilde_0) {
            return Err(Error::SingularAtHorizon {
                r: r_tilde,
                r_plus: self.r_tilde_0,
            });
        }
        let mut hi = 2.0 * rp.max(r_tilde);
        while self.point(hi)?.r_tilde < r_tilde {
            hi *= 2.0;
        }
        let eval = |r: f64| match self.point(r) {
            Ok(p) => (p.r_tilde - r_tilde, p.dr),
            Err(_) => (-1.0, f64::NAN),
        };
        let start = (2.0 * r_tilde - self.r_tilde_of_r(r_tilde)).clamp(rp, hi);
        Ok(newton_increasing(eval, rp, hi, start, 1e-15 * r_tilde))
    }

    /// `r̃(r)` from the table by cubic Hermite interpolation, with the
    /// analytic expansion beyond the last node.
    pub fn r_tilde_of_r(&self, r: f64) -> f64 {
        let t = &self.table;
        if r <= t[0].r {
            return self.r_tilde_0;
        }
        if r >= self.r_cut() {
            let n = self.n() as i32;
            return r
                + self.expansion.predicted_leading * r.powi(2 - n)
                + self.expansion.predicted_next * r.powi(1 - n);
        }
        let j = t.partition_point(|node| node.r <= r) - 1;
        let (a, b) = (&t[j], &t[j + 1]);
        let h = b.r - a.r;
        let s = (r - a.r) / h;
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * a.r_tilde
            + (s3 - 2.0 * s2 + s) * h * a.dr_tilde
            + (-2.0 * s3 + 3.0 * s2) * b.r_tilde
            + (s3 - s2) * h * b.dr_tilde
    }

    /// Largest relative gap, at the table midpoints, between a fourth-order
    /// difference of the solved map and the closed form of `dr̃/dr`.
    pub fn gauge_relation_residual(&self) -> Result<f64> {
        let rp = self.r_plus();
        let mut worst: f64 = 0.0;
        for pair in self.table.windows(2) {
            let r = 0.5 * (pair[0].r + pair[1].r);
            let h = (1e-3 * r).min(0.2 * (r - rp));
            let f = |x: f64| -> Result<f64> { Ok(self.point(x)?.delta) };
            let d = (f(r - 2.0 * h)? - 8.0 * f(r - h)? + 8.0 * f(r + h)? - f(r + 2.0 * h)?) / (12.0 * h);
            let exact = self.point(r)?.dr;
            worst = worst.max(((1.0 + d) - exact).abs() / exact);
        }
        Ok(worst)
    }

    /// Gauge table as CSV with columns `r,r_tilde,dr_tilde`.
    pub fn table_csv(&self) -> String {
        let mut out = String::from("r,r_tilde,dr_tilde\n");
        for node in &self.table {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e}\n",
                node.r, node.r_tilde, node.dr_tilde
            ));
        }
        out
    }
}

/// Table radii: the horizon, then log-spaced in `r − r₊` up to `2r₊`, then
/// log-spaced in `r` up to `10⁴·max(r₊, 1)`.
fn table_radii(r_plus: f64) -> Vec<f64> {
    let near = (TABLE_NODES - 1) / 2;
    let far = TABLE_NODES - 1 - near;
    let mut rs = vec![r_plus];
    rs.extend(geometric(1e-6 * r_plus, r_plus, near).into_iter().map(|d| r_plus + d));
    rs.extend(
        geometric(2.0 * r_plus, 1e4 * r_plus.max(1.0), far + 1)
            .into_iter()
            .skip(1),
    );
    rs
}

/// Solves `F(r̃/r̃₀) = ∫_{r₊}^r e^{û(s)} ds/(s√Q(s))` with `r̃₀ = e^{F₀−C}`.
pub fn radial_gauge(spec: &MetricSpec) -> Result<GaugeMap> {
    let integral = RadialIntegral::new(spec.background.clone(), spec.exp_u_hat.clone())?;
    radial_gauge_with(spec, integral)
}

/// As [`radial_gauge`], reusing an already computed radial integral.
pub fn radial_gauge_with(spec: &MetricSpec, integral: RadialIntegral) -> Result<GaugeMap> {
    let n = spec.n();
    let nf = n as f64;
    let f = FProfile::new(n)?;
    let c = integral.c();
    let f0 = f.f0();
    let r_tilde_0 = (f0 - c).exp();
    let nn = n as u32;
    let a = spec.background.a();
    let predicted_leading = (a - 2.0 * spec.u_coeff(nn - 1)) / (2.0 * (nf - 1.0));
    let predicted_next = (r_tilde_0.powi(n as i32) - spec.background.r0n() - 2.0 * spec.u_coeff(nn)) / (2.0 * nf);
    let mut gm = GaugeMap {
        r_tilde_0,
        f0,
        c,
        table: Vec::new(),
        expansion: GaugeExpansion {
            leading: f64::NAN,
            next: f64::NAN,
            predicted_leading,
            predicted_next,
        },
        integral,
        f,
        su: spec.exp_u_hat.clone(),
    };
    let rs = table_radii(gm.r_plus());
    let mut table = Vec::with_capacity(rs.len());
    table.push(GaugeNode {
        r: rs[0],
        r_tilde: r_tilde_0,
        dr_tilde: gm.dr_at_horizon(),
    });
    for &r in &rs[1..] {
        let p = gm.point(r)?;
        table.push(GaugeNode {
            r,
            r_tilde: p.r_tilde,
            dr_tilde: p.dr,
        });
    }
    gm.table = table;

    let scale = gm.r_plus().max(1.0);
    let radii = geometric(20.0 * scale, 2000.0 * scale, 32);
    let mut xs = Vec::with_capacity(radii.len());
    let mut ys = Vec::with_capacity(radii.len());
    for &r in &radii {
        xs.push(1.0 / r);
        ys.push(gm.point(r)?.delta * r.powi(n as i32 - 2));
    }
    let fit = poly_fit(&xs, &ys, 4)?;
    gm.expansion.leading = fit.coeffs[0];
    gm.expansion.next = fit.coeffs[1];
    Ok(gm)
}
