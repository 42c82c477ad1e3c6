use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::spec::MetricSpec;
use crate::check::Check;
use crate::error::{Error, Result};
use crate::numerics::geometric;

/// Sampling grid: log-spaced radii above the horizon times uniform angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_nodes: usize,
    pub xi_nodes: usize,
    pub phi_nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_nodes: 64,
            xi_nodes: 32,
            phi_nodes: 16,
        }
    }
}

impl GridSpec {
    pub fn new(r_nodes: usize, xi_nodes: usize, phi_nodes: usize) -> Self {
        Self {
            r_nodes,
            xi_nodes,
            phi_nodes,
        }
    }

    /// Radii on `[r₊(1+10⁻⁶), 10³ r₊]`.
    pub fn radii(&self, r_plus: f64) -> Vec<f64> {
        geometric(r_plus * (1.0 + 1e-6), 1e3 * r_plus, self.r_nodes)
    }

    /// Uniform nodes `j·P/N`.
    pub fn circle(period: f64, nodes: usize) -> Vec<f64> {
        (0..nodes).map(|j| period * j as f64 / nodes as f64).collect()
    }

    /// All boundary points `(ξ, φ³, …)`. Torus circles collapse to one
    /// node when `collapse_torus` is set.
    pub fn boundary_points(&self, spec: &MetricSpec, collapse_torus: bool) -> Vec<Vec<f64>> {
        let periods = spec.angle_periods();
        let mut axes = vec![Self::circle(periods[0], self.xi_nodes)];
        for p in &periods[1..] {
            axes.push(if collapse_torus {
                vec![0.0]
            } else {
                Self::circle(*p, self.phi_nodes)
            });
        }
        cartesian(&axes)
    }
}

/// Cartesian product of coordinate axes, last axis fastest.
pub fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for &x in axis {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Diagnostics of [`validate_spec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub regularity_residual: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Tolerance on `max_ξ |v̂(r₊,ξ) − û(r₊)|`.
pub const REGULARITY_TOL: f64 = 1e-10;

/// `max_ξ |v̂(r₊, ξ) − û(r₊)|` sampled on `xi_nodes` points.
pub fn regularity_residual(spec: &MetricSpec, xi_nodes: usize) -> f64 {
    let rp = spec.r_plus();
    let u = spec.exp_u_hat.eval(rp).ln();
    GridSpec::circle(spec.xi_period, xi_nodes.max(1))
        .into_iter()
        .map(|xi| (spec.exp_v_hat.eval(rp, xi).ln() - u).abs())
        .fold(0.0, f64::max)
}

/// Largest absolute coefficient at orders `1..=n−2` of any profile, and
/// the deviation of the constant terms from their required values.
fn structure_defect(spec: &MetricSpec) -> f64 {
    let n = spec.n() as u32;
    let mut worst: f64 = 0.0;
    for (&m, &c) in &spec.exp_u_hat.terms {
        if m == 0 {
            worst = worst.max((c - 1.0).abs());
        } else if m < n - 1 {
            worst = worst.max(c.abs());
        }
    }
    for (&m, s) in &spec.exp_v_hat.terms {
        let size: f64 = s.modes().iter().map(|md| md.cos.abs() + md.sin.abs()).sum();
        if m == 0 {
            let excess = s.modes().iter().map(|md| {
                if md.k[0] == 0 {
                    (md.cos - 1.0).abs() + md.sin.abs()
                } else {
                    md.cos.abs() + md.sin.abs()
                }
            });
            worst = worst.max(excess.sum());
        } else if m < n - 1 {
            worst = worst.max(size);
        }
    }
    for (&m, t) in &spec.w_hat.terms {
        if m < n - 1 {
            let msize = spec.n() - 2;
            for i in 0..msize {
                for j in i..msize {
                    let size: f64 = t
                        .component(i, j)
                        .modes()
                        .iter()
                        .map(|md| md.cos.abs() + md.sin.abs())
                        .sum();
                    worst = worst.max(size);
                }
            }
        }
    }
    worst
}

/// Checks positivity of the profiles and of `γ`, horizon regularity and
/// the leading-order structure of the expansions.
pub fn validate_spec(spec: &MetricSpec, grid: &GridSpec) -> ValidationReport {
    let n = spec.n();
    let radii = grid.radii(spec.r_plus());
    let mut checks = Vec::new();

    let mut min_su = f64::INFINITY;
    let mut at_su = 0.0;
    for &r in std::iter::once(&spec.r_plus()).chain(&radii) {
        let v = spec.exp_u_hat.eval(r);
        if v < min_su {
            min_su = v;
            at_su = r;
        }
    }
    checks.push(
        Check::at_least("exp_u_hat_positive", min_su, f64::MIN_POSITIVE).with_detail(format!("minimum at r = {at_su}")),
    );

    let xis = GridSpec::circle(spec.xi_period, grid.xi_nodes);
    let mut min_sv = f64::INFINITY;
    let mut at_sv = (0.0, 0.0);
    for &r in std::iter::once(&spec.r_plus()).chain(&radii) {
        for &xi in &xis {
            let v = spec.exp_v_hat.eval(r, xi);
            if v < min_sv {
                min_sv = v;
                at_sv = (r, xi);
            }
        }
    }
    checks.push(
        Check::at_least("exp_v_hat_positive", min_sv, f64::MIN_POSITIVE)
            .with_detail(format!("minimum at (r, xi) = ({}, {})", at_sv.0, at_sv.1)),
    );

    let collapse = !spec.w_depends_on_torus();
    let bpoints = grid.boundary_points(spec, collapse);
    let mut min_eig = f64::INFINITY;
    let mut at_eig = (spec.r_plus(), vec![0.0; n - 1]);
    if spec.w_hat.is_zero() {
        min_eig = 1.0;
    } else {
        for &r in std::iter::once(&spec.r_plus()).chain(&radii) {
            for angles in &bpoints {
                let m = DMatrix::identity(n - 2, n - 2) + spec.w_hat.eval(r, angles, n - 2);
                let e = m.symmetric_eigenvalues().min();
                if e < min_eig {
                    min_eig = e;
                    at_eig = (r, angles.clone());
                }
            }
        }
    }
    checks.push(
        Check::at_least("gamma_positive_definite", min_eig, f64::MIN_POSITIVE).with_detail(format!(
            "smallest eigenvalue of r^-2 gamma at r = {}, angles = {:?}",
            at_eig.0, at_eig.1
        )),
    );

    let reg = regularity_residual(spec, grid.xi_nodes);
    checks.push(Check::at_most("regularity", reg, REGULARITY_TOL));
    checks.push(Check::at_most("leading_order_structure", structure_defect(spec), 0.0));

    ValidationReport {
        checks,
        regularity_residual: reg,
    }
}

/// Fails with [`Error::InvalidSpec`] if positivity or structure checks fail.
pub fn require_valid(spec: &MetricSpec, grid: &GridSpec) -> Result<ValidationReport> {
    let report = validate_spec(spec, grid);
    for c in &report.checks {
        if !c.passed && c.name != "regularity" {
            return Err(Error::InvalidSpec(format!("{} failed (value {:e})", c.name, c.value)));
        }
    }
    Ok(report)
}
