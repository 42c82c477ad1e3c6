//! Subcommand bodies. Each spec-level command returns its JSON result and
//! the checks it asserts, and appends rows to the shared table.

use ahm_core::asymptotics::energy_summary;
use ahm_core::check::Check;
use ahm_core::curvature::{default_step, scalar_curvature_oracle_order, scalar_curvature_warped};
use ahm_core::gauge::{horizon_value_check, radial_gauge, transformed_coeffs, TransformedCoeffs};
use ahm_core::metric::fixtures::random_l1_perturbation;
use ahm_core::metric::{validate_spec, FourierSeries, GridSpec, MetricDocument, MetricSpec, Point, TorusTensorSeries};
use ahm_core::verifier::{elementary_sweep_range, verify_theorem, Verdict, VerifyOptions};
use ahm_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{FuzzConfig, SweepConfig};
use crate::report::{num, Table};

/// Header `spec, <lead…>, xi, phi3…phiN, value, reference, residual`.
pub fn grid_header(lead: &[&str], max_n: usize) -> Vec<String> {
    let mut h = vec!["spec".to_string()];
    h.extend(lead.iter().map(|s| s.to_string()));
    h.push("xi".into());
    h.extend((3..=max_n).map(|i| format!("phi{i}")));
    h.extend(["value", "reference", "residual"].map(String::from));
    h
}

fn angle_cells(angles: &[f64], max_n: usize) -> Vec<String> {
    let mut cells: Vec<String> = angles.iter().map(|&a| num(a)).collect();
    cells.resize(max_n - 1, String::new());
    cells
}

pub fn validate(spec: &MetricSpec, grid: &GridSpec, label: &str, table: &mut Table) -> Result<(Value, Vec<Check>)> {
    let rep = validate_spec(spec, grid);
    for c in &rep.checks {
        table.push(vec![
            label.into(),
            c.name.clone(),
            num(c.value),
            num(c.tolerance),
            c.passed.to_string(),
        ]);
    }
    let value = serde_json::to_value(&rep).expect("serializable");
    Ok((value, rep.checks))
}

/// Accuracy order of the finite-difference reference.
const ORACLE_ORDER: usize = 4;

pub fn curvature(
    spec: &MetricSpec,
    grid: &GridSpec,
    tol: f64,
    label: &str,
    max_n: usize,
    table: &mut Table,
) -> Result<(Value, Vec<Check>)> {
    let nn1 = (spec.n() * (spec.n() - 1)) as f64;
    let angles = grid.boundary_points(spec, !spec.w_depends_on_torus());
    let mut worst = 0.0_f64;
    let mut worst_at: Option<(f64, Vec<f64>)> = None;
    let mut deficit_range = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut compared, mut skipped) = (0usize, 0usize);
    for r in grid.radii(spec.r_plus()) {
        for a in &angles {
            let p = Point::new(r, a.clone());
            let value = scalar_curvature_warped(spec, &p)?;
            deficit_range.0 = deficit_range.0.min(value + nn1);
            deficit_range.1 = deficit_range.1.max(value + nn1);
            let reference = match scalar_curvature_oracle_order(spec, &p, default_step(r), ORACLE_ORDER) {
                Ok(v) => Some(v),
                Err(Error::StencilOutOfDomain { .. }) => None,
                Err(e) => return Err(e),
            };
            let mut row = vec![label.to_string(), num(r)];
            row.extend(angle_cells(a, max_n));
            row.push(num(value));
            match reference {
                Some(v) => {
                    compared += 1;
                    let residual = (value - v).abs();
                    if residual > worst || worst_at.is_none() {
                        worst = worst.max(residual);
                        worst_at = Some((r, a.clone()));
                    }
                    row.extend([num(v), num(residual)]);
                }
                None => {
                    skipped += 1;
                    row.extend([String::new(), String::new()]);
                }
            }
            table.push(row);
        }
    }
    let mut check = Check::at_most("oracle_agreement", worst, tol);
    if let Some((r, a)) = &worst_at {
        check = check.with_detail(format!("largest gap at r = {r:e}, angles = {a:?}"));
    }
    let value = json!({
        "points": compared + skipped,
        "compared": compared,
        "skipped_near_horizon": skipped,
        "oracle_step": "1e-3 * max(r, 1)",
        "oracle_order": ORACLE_ORDER,
        "max_residual": worst,
        "worst_point": worst_at.map(|(r, a)| json!({"r": r, "angles": a})),
        "deficit_min": deficit_range.0,
        "deficit_max": deficit_range.1,
    });
    Ok((value, vec![check]))
}

pub fn energy(spec: &MetricSpec, tol: f64, label: &str, table: &mut Table) -> Result<(Value, Vec<Check>)> {
    let e = energy_summary(spec);
    let gap = (e.e_g - e.e_hm - e.difference).abs();
    let check = Check::at_most("difference_consistency", gap, tol * (1.0 + e.e_hm.abs()))
        .with_detail("|E(g) - E_HM - difference|");
    table.push(vec![
        label.into(),
        num(e.e_g),
        num(e.e_hm),
        num(e.difference),
        num(e.r_breve_0),
        num(e.boundary_volume),
    ]);
    Ok((serde_json::to_value(e).expect("serializable"), vec![check]))
}

fn series_json(s: &FourierSeries) -> Value {
    Value::Array(
        s.modes()
            .iter()
            .map(|m| json!({"k": m.k, "cos": m.cos, "sin": m.sin}))
            .collect(),
    )
}

fn tensor_json(t: &TorusTensorSeries) -> Value {
    let mut comps = serde_json::Map::new();
    for i in 0..t.size() {
        for j in i..t.size() {
            let c = t.component(i, j);
            if !c.is_zero() {
                comps.insert(format!("{},{}", i + 3, j + 3), series_json(c));
            }
        }
    }
    Value::Object(comps)
}

fn coeffs_json(c: &TransformedCoeffs) -> Value {
    json!({
        "v_n_minus_1": series_json(&c.v_n_minus_1),
        "v_n": series_json(&c.v_n),
        "w_n_minus_1": tensor_json(&c.w_n_minus_1),
        "w_n": tensor_json(&c.w_n),
    })
}

/// Tolerances of the gauge checks besides the horizon residual.
const GAUGE_FIT_TOL: f64 = 1e-3;
const GAUGE_RELATION_TOL: f64 = 1e-8;

pub fn gauge(spec: &MetricSpec, tol: f64, label: &str, table: &mut Table) -> Result<(Value, Vec<Check>)> {
    let gm = radial_gauge(spec)?;
    let coeffs = transformed_coeffs(&gm, spec)?;
    let horizon = horizon_value_check(&gm, spec)?;
    let relation = gm.gauge_relation_residual()?;
    for node in &gm.table {
        table.push(vec![label.into(), num(node.r), num(node.r_tilde), num(node.dr_tilde)]);
    }
    let checks = vec![
        Check::at_most("horizon_residual", horizon.residual, tol),
        Check::at_most("coefficient_fit", coeffs.fit_deviation, GAUGE_FIT_TOL),
        Check::at_most("expansion_fit", gm.expansion.deviation(), GAUGE_FIT_TOL),
        Check::at_most("gauge_relation", relation, GAUGE_RELATION_TOL),
    ];
    let value = json!({
        "r_plus": gm.r_plus(),
        "r_tilde_0": gm.r_tilde_0,
        "f0": gm.f0,
        "c": gm.c,
        "expansion": gm.expansion,
        "gauge_relation_residual": relation,
        "coefficients": coeffs_json(&coeffs.coeffs),
        "coefficient_fit_deviation": coeffs.fit_deviation,
        "horizon": horizon,
    });
    Ok((value, checks))
}

pub fn verify(
    spec: &MetricSpec,
    options: &VerifyOptions,
    label: &str,
    max_n: usize,
    table: &mut Table,
) -> Result<(Value, Vec<Check>)> {
    let rep = verify_theorem(spec, options)?;
    if let Some(id) = &rep.identity {
        for p in &id.points {
            let mut row = vec![label.to_string()];
            row.extend(angle_cells(&p.angles, max_n));
            row.extend([num(p.left), num(p.right), num((p.left - p.right).abs())]);
            table.push(row);
        }
    }
    let checks = rep.checks.clone();
    Ok((serde_json::to_value(&rep).expect("serializable"), checks))
}

pub const SWEEP_HEADER: [&str; 5] = ["n", "min", "argmin", "max_rel_gap", "spurious_zeros"];

pub fn sweep(cfg: &SweepConfig, tol: f64, table: &mut Table) -> (Value, Vec<Check>) {
    let SweepConfig { n, s } = *cfg;
    let covers_one = s.start <= 1.0 && 1.0 <= s.stop;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for dim in n.first..=n.last {
        let row = elementary_sweep_range(dim, s.start, s.stop, s.step);
        table.push(vec![
            dim.to_string(),
            num(row.min),
            num(row.argmin),
            num(row.max_rel_gap),
            row.spurious_zeros.to_string(),
        ]);
        checks.push(Check::at_least(format!("n{dim}_nonnegative"), row.min, -tol));
        if covers_one {
            checks.push(Check::at_most(
                format!("n{dim}_argmin_at_one"),
                (row.argmin - 1.0).abs(),
                0.5 * s.step,
            ));
        }
        checks.push(Check::at_most(format!("n{dim}_forms_agree"), row.max_rel_gap, tol));
        checks.push(Check::at_most(
            format!("n{dim}_spurious_zeros"),
            row.spurious_zeros as f64,
            0.0,
        ));
        rows.push(row);
    }
    (json!({ "rows": rows }), checks)
}

pub const FUZZ_HEADER: [&str; 8] = [
    "spec",
    "sample",
    "verdict",
    "curvature_gate",
    "difference",
    "lower_bound",
    "identity_residual",
    "passed",
];

pub fn fuzz(
    base: &MetricSpec,
    cfg: &FuzzConfig,
    options: &VerifyOptions,
    label: &str,
    table: &mut Table,
) -> Result<(Value, Vec<Check>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut strict, mut equality, mut failed_gate) = (0usize, 0usize, 0usize);
    let mut failures = Vec::new();
    let mut samples = Vec::with_capacity(cfg.samples);
    for k in 0..cfg.samples {
        let spec = random_l1_perturbation(base.background.clone(), cfg.amplitude, &mut rng);
        let document = MetricDocument::from_spec(&spec);
        let outcome = verify_theorem(&spec, options);
        let (cells, entry) = match &outcome {
            Ok(rep) => {
                match rep.equality_verdict {
                    Verdict::Strict => strict += 1,
                    Verdict::Equality => equality += 1,
                    Verdict::HypothesisFailed => failed_gate += 1,
                }
                if !rep.passed() {
                    let name = rep
                        .checks
                        .iter()
                        .find(|c| !c.passed)
                        .map(|c| c.name.clone())
                        .unwrap_or_default();
                    failures.push(format!("sample {k}: {name}"));
                }
                let verdict = serde_json::to_value(rep.equality_verdict).expect("serializable");
                let gate = rep.hypothesis_flags.scalar_curvature_sign.passed;
                let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
                (
                    vec![
                        verdict.as_str().unwrap_or_default().to_string(),
                        gate.to_string(),
                        num(rep.difference),
                        opt(rep.lower_bound),
                        opt(rep.identity_residual),
                        rep.passed().to_string(),
                    ],
                    json!({
                        "sample": k,
                        "verdict": verdict,
                        "curvature_gate": gate,
                        "difference": rep.difference,
                        "lower_bound": rep.lower_bound,
                        "identity_residual": rep.identity_residual,
                        "passed": rep.passed(),
                        "first_failure": rep.checks.iter().find(|c| !c.passed),
                        "spec": document,
                    }),
                )
            }
            Err(e) => {
                failures.push(format!("sample {k}: error: {e}"));
                (
                    vec![
                        "error".into(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        "false".into(),
                    ],
                    json!({ "sample": k, "error": e.to_string(), "passed": false, "spec": document }),
                )
            }
        };
        let mut row = vec![label.to_string(), k.to_string()];
        row.extend(cells);
        table.push(row);
        samples.push(entry);
    }
    let mut check = Check::at_most("failed_samples", failures.len() as f64, 0.0);
    if let Some(first) = failures.first() {
        check = check.with_detail(first.clone());
    }
    let value = json!({
        "counts": { "strict": strict, "equality": equality, "hypothesis_failed": failed_gate },
        "samples": samples,
    });
    Ok((value, vec![check]))
}
