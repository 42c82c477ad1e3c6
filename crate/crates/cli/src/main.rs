//! `ahm`: batch checks of asymptotically Horowitz–Myers metrics.
//!
//! Exit status 0 when every asserted check passes, 1 when one fails (the
//! first failure is named on stderr), 2 on configuration errors.

mod commands;
mod config;
mod error;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ahm_core::check::Check;
use ahm_core::metric::{MetricDocument, MetricSpec};
use ahm_core::verifier::VerifyOptions;
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use config::{
    check_grid, check_specs, check_tol, parse_grid, DimRange, FileConfig, Format, FuzzConfig, RunConfig, SRange,
    SweepConfig,
};
use error::CliError;
use report::{Report, Run, Table};

#[derive(Parser)]
#[command(
    name = "ahm",
    version,
    about = "Curvature, energy and positive-energy checks for asymptotically Horowitz-Myers metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spec diagnostics: background, horizon regularity, decay, conditioning.
    Validate(Common),
    /// Scalar curvature on a grid, compared with a finite-difference oracle.
    Curvature(Common),
    /// Total energy, the HM energy of equal period, and their difference.
    Energy(Common),
    /// Radial gauge table, transformed coefficients and the horizon value.
    Gauge(Common),
    /// Full positive-energy pipeline.
    Verify(Common),
    /// Sweep of n − 1 + sⁿ − ns over a grid in s.
    Sweep(SweepArgs),
    /// Random perturbations of a background through the verify pipeline.
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct Common {
    /// Metric spec files (TOML or JSON).
    specs: Vec<PathBuf>,
    /// Run configuration file (TOML); flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Node counts R,XI,PHI (each at least 8).
    #[arg(long)]
    grid: Option<String>,
    /// Headline tolerance of the subcommand.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Dimensions, e.g. `3..8` (inclusive).
    #[arg(long)]
    n: Option<String>,
    /// `START:STOP:STEP`.
    #[arg(long)]
    s: Option<String>,
}

#[derive(Args)]
struct FuzzArgs {
    #[command(flatten)]
    common: Common,
    /// ChaCha8 seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Perturbations per spec (default 5).
    #[arg(long)]
    samples: Option<usize>,
    /// Coefficient amplitude of each perturbation (default 1e-3).
    #[arg(long)]
    amplitude: Option<f64>,
}

/// Per-subcommand defaults: grid (if used) and headline tolerance (if used).
fn defaults(sub: &str) -> (Option<[usize; 3]>, Option<f64>) {
    match sub {
        "validate" => (Some([64, 32, 16]), None),
        "curvature" => (Some([16, 8, 8]), Some(1e-5)),
        "energy" => (None, Some(1e-10)),
        "gauge" => (None, Some(1e-6)),
        "verify" => (Some([64, 32, 16]), Some(1e-4)),
        "sweep" => (None, Some(1e-12)),
        "fuzz" => (Some([16, 8, 8]), Some(1e-4)),
        _ => unreachable!("unknown subcommand"),
    }
}

fn resolve(sub: &str, common: Common, file: &FileConfig) -> Result<RunConfig, CliError> {
    let (grid_default, tol_default) = defaults(sub);
    let grid_flag = common.grid.as_deref().map(parse_grid).transpose()?;
    let grid_given = grid_flag.or(file.grid);
    let grid = match (grid_default, grid_given) {
        (None, Some(_)) if common.grid.is_some() => {
            return Err(CliError::Config(format!("--grid is not used by `{sub}`")));
        }
        (None, _) => None,
        (Some(d), g) => Some(check_grid(g.unwrap_or(d))?),
    };
    let tol = match (tol_default, common.tol.or(file.tol)) {
        (None, Some(_)) if common.tol.is_some() => {
            return Err(CliError::Config(format!("--tol is not used by `{sub}`")));
        }
        (None, _) => None,
        (Some(d), t) => Some(check_tol(t.unwrap_or(d))?),
    };
    let mut specs = common.specs;
    if sub == "sweep" {
        if !specs.is_empty() {
            return Err(CliError::Config("`sweep` takes no spec files".into()));
        }
    } else if specs.is_empty() {
        specs.extend(file.spec.clone());
        specs.extend(file.specs.iter().cloned());
    }
    if sub != "sweep" && specs.is_empty() {
        return Err(CliError::Config(format!("`{sub}` needs at least one spec file")));
    }
    check_specs(&specs)?;
    Ok(RunConfig {
        subcommand: sub.to_string(),
        specs,
        format: common.format.or(file.format).unwrap_or(Format::Json),
        out: common.out.or(file.out.clone()),
        grid,
        tol,
        fuzz: None,
        sweep: None,
    })
}

fn load_file(common: &Common) -> Result<FileConfig, CliError> {
    match &common.config {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::default()),
    }
}

fn build(command: Command) -> Result<RunConfig, CliError> {
    Ok(match command {
        Command::Validate(c) => resolve_simple("validate", c)?,
        Command::Curvature(c) => resolve_simple("curvature", c)?,
        Command::Energy(c) => resolve_simple("energy", c)?,
        Command::Gauge(c) => resolve_simple("gauge", c)?,
        Command::Verify(c) => resolve_simple("verify", c)?,
        Command::Sweep(a) => {
            let file = load_file(&a.common)?;
            let n = DimRange::parse(a.n.as_deref().or(file.n.as_deref()).unwrap_or("3..8"))?;
            let s = SRange::parse(a.s.as_deref().or(file.s.as_deref()).unwrap_or("0:4:0.001"))?;
            let mut cfg = resolve("sweep", a.common, &file)?;
            cfg.sweep = Some(SweepConfig { n, s });
            cfg
        }
        Command::Fuzz(a) => {
            let file = load_file(&a.common)?;
            let fuzz = FuzzConfig {
                seed: a.seed.or(file.seed).unwrap_or(0),
                samples: a.samples.or(file.samples).unwrap_or(5),
                amplitude: a.amplitude.or(file.amplitude).unwrap_or(1e-3),
            };
            if !(fuzz.amplitude >= 0.0 && fuzz.amplitude.is_finite()) {
                return Err(CliError::Config(format!(
                    "amplitude {} must be finite and >= 0",
                    fuzz.amplitude
                )));
            }
            let mut cfg = resolve("fuzz", a.common, &file)?;
            cfg.fuzz = Some(fuzz);
            cfg
        }
    })
}

fn resolve_simple(sub: &str, common: Common) -> Result<RunConfig, CliError> {
    let file = load_file(&common)?;
    resolve(sub, common, &file)
}

fn load(path: &Path) -> Result<(MetricSpec, Value), CliError> {
    let doc = MetricDocument::from_path(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let spec = doc
        .to_spec()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let value = serde_json::to_value(MetricDocument::from_spec(&spec)).expect("serializable");
    Ok((spec, value))
}

fn verify_options(cfg: &RunConfig) -> VerifyOptions {
    let mut o = VerifyOptions {
        grid: cfg.grid.unwrap_or_default(),
        ..VerifyOptions::default()
    };
    if let Some(t) = cfg.tol {
        o.tolerances.identity = t;
    }
    o
}

fn execute(cfg: &RunConfig) -> Result<(Vec<Run>, Table), CliError> {
    let sub = cfg.subcommand.as_str();
    if sub == "sweep" {
        let sweep = cfg.sweep.as_ref().expect("sweep config");
        let mut table = Table::new(commands::SWEEP_HEADER);
        let (result, checks) = commands::sweep(sweep, cfg.tol.expect("tolerance"), &mut table);
        let run = Run {
            label: "sweep".into(),
            document: None,
            result,
            checks,
            error: None,
        };
        return Ok((vec![run], table));
    }

    let mut loaded = Vec::with_capacity(cfg.specs.len());
    for p in &cfg.specs {
        loaded.push(load(p)?);
    }
    let max_n = loaded.iter().map(|(s, _)| s.n()).max().unwrap_or(3);
    let grid = cfg.grid.unwrap_or_default();
    let tol = cfg.tol.unwrap_or(0.0);
    let mut table = match sub {
        "validate" => Table::new(["spec", "check", "value", "tolerance", "passed"]),
        "curvature" => Table::new(commands::grid_header(&["r"], max_n)),
        "energy" => Table::new(["spec", "e_g", "e_hm", "difference", "r_breve_0", "boundary_volume"]),
        "gauge" => Table::new(["spec", "r", "r_tilde", "dr_tilde"]),
        "verify" => Table::new(commands::grid_header(&[], max_n)),
        "fuzz" => Table::new(commands::FUZZ_HEADER),
        _ => unreachable!(),
    };
    let options = verify_options(cfg);
    let mut runs = Vec::with_capacity(loaded.len());
    for (path, (spec, document)) in cfg.specs.iter().zip(loaded) {
        let label = path.display().to_string();
        let outcome: ahm_core::Result<(Value, Vec<Check>)> = match sub {
            "validate" => commands::validate(&spec, &grid, &label, &mut table),
            "curvature" => commands::curvature(&spec, &grid, tol, &label, max_n, &mut table),
            "energy" => commands::energy(&spec, tol, &label, &mut table),
            "gauge" => commands::gauge(&spec, tol, &label, &mut table),
            "verify" => commands::verify(&spec, &options, &label, max_n, &mut table),
            "fuzz" => commands::fuzz(
                &spec,
                cfg.fuzz.as_ref().expect("fuzz config"),
                &options,
                &label,
                &mut table,
            ),
            _ => unreachable!(),
        };
        runs.push(match outcome {
            Ok((result, checks)) => Run {
                label,
                document: Some(document),
                result,
                checks,
                error: None,
            },
            Err(e) => Run {
                label,
                document: Some(document),
                result: Value::Null,
                checks: Vec::new(),
                error: Some(e.to_string()),
            },
        });
    }
    Ok((runs, table))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ahm: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let (runs, table) = match execute(&cfg) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("ahm: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let report = Report::new(cfg, runs);
    let written = report
        .render(&table)
        .and_then(|text| report::emit(&text, report.config.out.as_deref()));
    if let Err(e) = written {
        eprintln!("ahm: {e}");
        return ExitCode::from(e.exit_code());
    }
    match &report.first_failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("ahm: check failed: {f}");
            ExitCode::from(1)
        }
    }
}
