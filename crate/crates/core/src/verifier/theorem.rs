//! The full pipeline: hypothesis gates, gauge change, integrated identity,
//! energy lower bound, verdict and rigidity.

use serde::{Deserialize, Serialize};

use super::identity::{integrated_identity, IdentityReport};
use super::inequality::elementary_inequality;
use super::integrand::tilde_terms;
use crate::asymptotics::{energy_summary, l1_condition, L1_TOL};
use crate::check::Check;
use crate::curvature::{scalar_deficit, torus_scalar_integral};
use crate::error::Result;
use crate::gauge::{closed_form_coeffs, exp_v_tilde_minus_one, l1_condition_tilde, radial_gauge, GaugeMap};
use crate::metric::{r_breve_for_period, validate_spec, GridSpec, MetricSpec, Point};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Gate `R + n(n−1) ≥ −curvature·(1 + |R|)`.
    pub curvature: f64,
    pub l1: f64,
    /// Relative gap between `r̆₀` from the declared period and from `r₊`.
    pub beta: f64,
    pub torus_integral: f64,
    pub identity: f64,
    /// Verdict `equality` iff `|E − E_HM| ≤ equality·(|E_HM| + 1)`.
    pub equality: f64,
    pub rigidity: f64,
    /// Slack of the lower-bound ordering, relative to `max(1, |E_HM|)`.
    pub ordering: f64,
    /// Lower bound on pointwise `A`.
    pub a_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            curvature: 1e-9,
            l1: L1_TOL,
            beta: 1e-10,
            torus_integral: 1e-8,
            identity: 1e-4,
            equality: 1e-6,
            rigidity: 1e-8,
            ordering: 1e-4,
            a_floor: -1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Grid for the curvature sign gate and the rigidity scan.
    pub grid: GridSpec,
    /// Boundary grid of the integrated identity (radial count unused).
    pub identity_grid: GridSpec,
    pub tolerances: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            identity_grid: GridSpec::new(0, 16, 8),
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Strict,
    Equality,
    HypothesisFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisFlags {
    pub validity: Check,
    pub regularity: Check,
    pub beta_match: Check,
    pub scalar_curvature_sign: Check,
    pub l1: Check,
    pub torus_integral: Check,
}

impl HypothesisFlags {
    pub fn all(&self) -> [&Check; 6] {
        [
            &self.validity,
            &self.regularity,
            &self.beta_match,
            &self.scalar_curvature_sign,
            &self.l1,
            &self.torus_integral,
        ]
    }

    pub fn passed(&self) -> bool {
        self.all().iter().all(|c| c.passed)
    }

    /// Hypotheses under which the integrated identity holds.
    fn identity_applies(&self) -> bool {
        self.validity.passed && self.regularity.passed && self.beta_match.passed && self.l1.passed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RigidityReport {
    pub residual: f64,
    pub deficit: f64,
    pub w_r_hat: f64,
    pub w_xi: f64,
    pub w_r_traceless: f64,
    pub w_xi_traceless: f64,
    pub ode: f64,
    pub torus_block: f64,
    pub metric_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub e_g: f64,
    pub e_hm: f64,
    pub difference: f64,
    pub r_breve_0: f64,
    pub boundary_volume: f64,
    pub r_tilde_0: Option<f64>,
    pub identity_residual: Option<f64>,
    pub a_integral: Option<f64>,
    /// `r̃0ⁿ(n − 1 + sⁿ − ns)Vol + ∬A`, `s = r̆₀/r̃₀`.
    pub lower_bound: Option<f64>,
    pub hypothesis_flags: HypothesisFlags,
    /// Assertions made by the pipeline (identity, ordering, A ≥ 0, ...).
    pub checks: Vec<Check>,
    pub equality_verdict: Verdict,
    pub rigidity_residual: Option<f64>,
    pub rigidity: Option<RigidityReport>,
    pub identity: Option<IdentityReport>,
    pub options: VerifyOptions,
}

impl EnergyReport {
    /// All asserted checks passed and, under the hypotheses, the verdict
    /// is consistent.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn scalar_curvature_gate(spec: &MetricSpec, grid: &GridSpec, tol: f64) -> Result<Check> {
    let nn1 = (spec.n() * (spec.n() - 1)) as f64;
    let points = grid.boundary_points(spec, !spec.w_depends_on_torus());
    let mut worst = f64::INFINITY;
    let mut at = Point::new(spec.r_plus(), points[0].clone());
    for r in grid.radii(spec.r_plus()) {
        for angles in &points {
            let p = Point::new(r, angles.clone());
            let d = scalar_deficit(spec, &p)?;
            let margin = d + tol * (1.0 + (d - nn1).abs());
            if margin < worst {
                worst = margin;
                at = p;
            }
        }
    }
    Ok(Check::at_least("scalar_curvature_sign", worst, 0.0)
        .with_detail(format!("smallest margin at r = {}, angles = {:?}", at.r, at.angles)))
}

fn torus_integral_gate(spec: &MetricSpec, grid: &GridSpec, tol: f64) -> Result<Check> {
    let mut worst = f64::NEG_INFINITY;
    if spec.n() >= 4 && spec.w_depends_on_torus() {
        let radii = GridSpec::new(grid.r_nodes.min(8), 0, 0).radii(spec.r_plus());
        for r in radii {
            for xi in GridSpec::circle(spec.xi_period, grid.xi_nodes.min(4)) {
                worst = worst.max(torus_scalar_integral(spec, r, xi)?);
            }
        }
    } else {
        worst = 0.0;
    }
    Ok(Check::at_most("torus_integral", worst, tol))
}

/// `e^{v̂̃}` and its first two `r̃`-derivatives by central differences in `r`.
fn exp_v_derivatives(spec: &MetricSpec, gm: &GaugeMap, r: f64, xi: f64) -> Result<(f64, f64, f64)> {
    let h = 0.01 * r.min(r - gm.r_plus());
    let f = |x: f64| -> Result<f64> { Ok(exp_v_tilde_minus_one(spec, &gm.point(x)?, xi)) };
    let (fm, f0, fp) = (f(r - h)?, f(r)?, f(r + h)?);
    let p = gm.point(r)?;
    let fr = (fp - fm) / (2.0 * h);
    let frr = (fp - 2.0 * f0 + fm) / (h * h);
    let d1 = fr / p.dr;
    let d2 = (frr - fr * p.ell1) / (p.dr * p.dr);
    Ok((1.0 + f0, d1, d2))
}

/// Distance of `g` from `g_HM` in the gauge `r̃`, and the residual of
/// `∂²_{r̃}e^{v̂̃} + ((n+1)r̃ⁿ + (n/2−1)r̃0ⁿ)/(r̃(r̃ⁿ−r̃0ⁿ))(∂_{r̃}e^{v̂̃})² = 0`.
pub fn rigidity_residual(
    spec: &MetricSpec,
    gm: &GaugeMap,
    grid: &GridSpec,
    boundary: &GridSpec,
) -> Result<RigidityReport> {
    let n = spec.n();
    let nf = n as f64;
    let m = n - 2;
    let rp = spec.r_plus();
    let rb = r_breve_for_period(n, spec.xi_period);
    let rt0n = gm.r_tilde_0.powi(n as i32);
    let radii: Vec<f64> = grid.radii(rp).into_iter().filter(|&r| r >= 1.01 * rp).collect();
    let stride = (radii.len() / 16).max(1);
    let points = boundary.boundary_points(spec, !spec.w_depends_on_torus());
    let mut out = RigidityReport {
        residual: 0.0,
        deficit: 0.0,
        w_r_hat: 0.0,
        w_xi: 0.0,
        w_r_traceless: 0.0,
        w_xi_traceless: 0.0,
        ode: 0.0,
        torus_block: 0.0,
        metric_distance: 0.0,
    };
    for &r in radii.iter().step_by(stride) {
        let p = gm.point(r)?;
        let rt = p.r_tilde;
        let shrink = (-2.0 * (p.delta / r).ln_1p()).exp_m1();
        let a_hm = rt * rt * (1.0 - (rb / rt).powi(n as i32));
        for angles in &points {
            let t = tilde_terms(spec, &p, angles)?;
            out.deficit = out.deficit.max(t.deficit.abs());
            out.w_r_hat = out.w_r_hat.max(t.w_r_hat.abs());
            out.w_xi = out.w_xi.max(t.w_xi.abs());
            out.w_r_traceless = out.w_r_traceless.max(t.w_r_traceless_sq.max(0.0).sqrt());
            let xi_sq = 8.0 * (t.q_xi - (nf - 1.0) / (2.0 * (nf - 2.0)) * t.w_xi * t.w_xi);
            out.w_xi_traceless = out.w_xi_traceless.max(xi_sq.max(0.0).sqrt());

            let (_, d1, d2) = exp_v_derivatives(spec, gm, r, angles[0])?;
            let coef = ((nf + 1.0) * rt.powi(n as i32) + (0.5 * nf - 1.0) * rt0n) / (rt * (rt.powi(n as i32) - rt0n));
            out.ode = out.ode.max((d2 + coef * d1 * d1).abs());

            let w = spec.w_hat.eval(r, angles, m);
            for i in 0..m {
                for j in 0..m {
                    let diag = if i == j { shrink } else { 0.0 };
                    out.torus_block = out.torus_block.max((diag + (1.0 + shrink) * w[(i, j)]).abs());
                }
            }
            if a_hm > 0.0 {
                let rr = (a_hm / t.a_tilde - 1.0).abs();
                let xx = (t.a_tilde * t.exp_v * t.exp_v / a_hm - 1.0).abs();
                out.metric_distance = out.metric_distance.max(rr).max(xx);
            }
        }
    }
    out.residual = [
        out.deficit,
        out.w_r_hat,
        out.w_xi,
        out.w_r_traceless,
        out.w_xi_traceless,
        out.ode,
        out.torus_block,
        out.metric_distance,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(out)
}

/// Runs every gate and numerical step of the positive-energy argument.
pub fn verify_theorem(spec: &MetricSpec, options: &VerifyOptions) -> Result<EnergyReport> {
    let tol = &options.tolerances;
    let grid = &options.grid;
    let n = spec.n();
    let energy = energy_summary(spec);

    let validation = validate_spec(spec, grid);
    let validity_failures: Vec<&str> = validation
        .checks
        .iter()
        .filter(|c| !c.passed && c.name != "regularity")
        .map(|c| c.name.as_str())
        .collect();
    let validity =
        Check::at_most("validity", validity_failures.len() as f64, 0.0).with_detail(if validity_failures.is_empty() {
            "all structural checks pass".to_string()
        } else {
            format!("failed: {}", validity_failures.join(", "))
        });
    let regularity = validation
        .check("regularity")
        .cloned()
        .expect("validation reports regularity");
    let beta_gap = (energy.r_breve_0 - spec.background.r_breve0()).abs() / energy.r_breve_0;
    let beta_match = Check::at_most("beta_match", beta_gap, tol.beta);

    let (scalar_curvature_sign, l1, torus_integral) = if validity.passed {
        let l1_rep = l1_condition(spec, grid, tol.l1)?;
        (
            scalar_curvature_gate(spec, grid, tol.curvature)?,
            Check::at_most("l1", l1_rep.sup, tol.l1),
            torus_integral_gate(spec, grid, tol.torus_integral)?,
        )
    } else {
        let skipped = |name: &str| Check::at_most(name, f64::NAN, 0.0).with_detail("skipped: invalid spec");
        (
            skipped("scalar_curvature_sign"),
            skipped("l1"),
            skipped("torus_integral"),
        )
    };
    let flags = HypothesisFlags {
        validity,
        regularity,
        beta_match,
        scalar_curvature_sign,
        l1,
        torus_integral,
    };

    let mut report = EnergyReport {
        e_g: energy.e_g,
        e_hm: energy.e_hm,
        difference: energy.difference,
        r_breve_0: energy.r_breve_0,
        boundary_volume: energy.boundary_volume,
        r_tilde_0: None,
        identity_residual: None,
        a_integral: None,
        lower_bound: None,
        hypothesis_flags: flags,
        checks: Vec::new(),
        equality_verdict: Verdict::HypothesisFailed,
        rigidity_residual: None,
        rigidity: None,
        identity: None,
        options: *options,
    };
    if !report.hypothesis_flags.identity_applies() {
        return Ok(report);
    }

    let gm = radial_gauge(spec)?;
    report.r_tilde_0 = Some(gm.r_tilde_0);
    let coeffs = closed_form_coeffs(&gm, spec);
    let tilde = l1_condition_tilde(&coeffs, spec, grid, tol.l1);
    report.checks.push(Check::at_least(
        "l1_tilde_agrees",
        f64::from(u8::from(tilde.agrees_with_original)),
        1.0,
    ));
    let identity = integrated_identity(spec, &gm, &coeffs, &options.identity_grid)?;
    report
        .checks
        .push(Check::at_most("integrated_identity", identity.residual, tol.identity));
    report
        .checks
        .push(Check::at_most("xi_cancellation", identity.xi_cancellation, 1e-10));
    report.identity_residual = Some(identity.residual);
    report.a_integral = Some(identity.a_integral);

    let scale = report.e_hm.abs().max(1.0);
    let s = report.r_breve_0 / gm.r_tilde_0;
    let lower =
        gm.r_tilde_0.powi(n as i32) * elementary_inequality(n, s).direct * report.boundary_volume + identity.a_integral;
    report.lower_bound = Some(lower);
    let curvature_ok = report.hypothesis_flags.scalar_curvature_sign.passed;
    if curvature_ok {
        report
            .checks
            .push(Check::at_least("a_nonnegative", identity.a_min, tol.a_floor));
    }
    report.identity = Some(identity);

    if !report.hypothesis_flags.passed() {
        return Ok(report);
    }
    report.checks.push(
        Check::at_least("lower_bound_ordering", report.difference - lower, -tol.ordering * scale)
            .with_detail(format!("difference {} vs lower bound {}", report.difference, lower)),
    );
    report.checks.push(Check::at_least(
        "difference_nonnegative",
        report.difference,
        -tol.equality * (report.e_hm.abs() + 1.0),
    ));
    if report.difference.abs() <= tol.equality * (report.e_hm.abs() + 1.0) {
        report.equality_verdict = Verdict::Equality;
        let rig = rigidity_residual(spec, &gm, grid, &options.identity_grid)?;
        report
            .checks
            .push(Check::at_most("rigidity", rig.residual, tol.rigidity));
        report.rigidity_residual = Some(rig.residual);
        report.rigidity = Some(rig);
    } else {
        report.equality_verdict = Verdict::Strict;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::fixtures::vanishing_tail;
    use crate::metric::BackgroundParams;

    fn quick() -> VerifyOptions {
        VerifyOptions {
            grid: GridSpec::new(16, 8, 4),
            identity_grid: GridSpec::new(0, 4, 2),
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn hm_equality() {
        let spec = MetricSpec::horowitz_myers(3, 1.0, vec![1.0]).unwrap();
        let rep = verify_theorem(&spec, &quick()).unwrap();
        assert_eq!(rep.equality_verdict, Verdict::Equality);
        assert!(rep.difference.abs() < 1e-12);
        assert!(rep.rigidity_residual.unwrap() <= 1e-8, "{:?}", rep.rigidity);
        assert!(rep.passed(), "{:?}", rep.checks);
    }

    #[test]
    fn hm_type_strict() {
        for a in [-0.5, 0.7] {
            let spec = MetricSpec::hm_type(BackgroundParams::with_unit_torus(3, a, 1.0).unwrap());
            let rep = verify_theorem(&spec, &quick()).unwrap();
            assert!(rep.hypothesis_flags.passed(), "{:?}", rep.hypothesis_flags);
            assert_eq!(rep.equality_verdict, Verdict::Strict);
            assert!(rep.difference > 0.0);
            assert!(rep.passed(), "{:?}", rep.checks);
        }
    }

    #[test]
    fn negative_curvature_fails_gate() {
        let mut spec = MetricSpec::horowitz_myers(3, 1.0, vec![1.0]).unwrap();
        let (e1, e2) = vanishing_tail(3, spec.r_plus(), 0.0, -0.05);
        spec.add_v_const(3, -0.05);
        spec.add_v_const(4, e1);
        spec.add_v_const(5, e2);
        let rep = verify_theorem(&spec, &quick()).unwrap();
        assert!(rep.difference < 0.0);
        assert!(!rep.hypothesis_flags.scalar_curvature_sign.passed);
        assert_eq!(rep.equality_verdict, Verdict::HypothesisFailed);
        assert!(rep.lower_bound.is_some() && rep.rigidity_residual.is_none());
        assert!(rep.passed(), "{:?}", rep.checks);
    }
}
