//! Command-line front end: runs one experiment from a TOML configuration
//! and writes CSV.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::cavity::{reflection_general, zeeman_detuning, CavityParams};
use crate::config::{ConfigError, ExperimentConfig};
use crate::metrics::{
    fidelity_curve, fit_curve, generation_rate, sweep_beta, GateModel, MetricsError,
};
use crate::oracle::{identity_suite, OracleError};
use crate::scheduler::{build_schedule, validate_schedule};
use crate::tensornet::TensorNetError;

#[derive(Debug, Parser)]
#[command(
    name = "photon-cluster",
    version,
    about = "Photonic cluster-state generation simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Per-photon fidelity and success probability, with the fitted decay factor.
    Fidelity,
    /// Decay factor over a two-axis parameter grid.
    Sweep,
    /// Switch and delay-line timeline with event-simulation check.
    Schedule,
    /// Dense-simulation identity suite.
    OracleCheck,
    /// Reflection coefficients against probe detuning.
    Reflection,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
    #[error("output error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::TensorNet(TensorNetError::WindowTooLarge { .. }) => {
                CliError::Resource(e.to_string())
            }
            MetricsError::Cavity(_) | MetricsError::InvalidModel(_) | MetricsError::Lattice(_) => {
                CliError::Config(ConfigError::from(e))
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::ResourceLimit { .. }
            | OracleError::TensorNet(TensorNetError::WindowTooLarge { .. }) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Fixed 12-significant-digit scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV with a leading `# config: <json>` comment line.
fn write_csv(
    out: Option<&Path>,
    config: &ExperimentConfig,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = io::BufWriter::new(sink);
    writeln!(sink, "# config: {}", config.to_json())?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Run one command; returns the human-readable summary.
pub fn run(
    command: Command,
    config: &ExperimentConfig,
    out: Option<&Path>,
) -> Result<String, CliError> {
    let out = out.or(config.output.as_deref());
    match command {
        Command::Fidelity => run_fidelity(config, out),
        Command::Sweep => run_sweep(config, out),
        Command::Schedule => run_schedule(config, out),
        Command::OracleCheck => run_oracle(config, out),
        Command::Reflection => run_reflection(config, out),
    }
}

fn run_fidelity(config: &ExperimentConfig, out: Option<&Path>) -> Result<String, CliError> {
    let dims = config.lattice()?;
    let e = &config.error_model;
    let gate = config.gate_model()?.gate()?;
    let curve = fidelity_curve(&dims, &gate, e)?;
    let rows: Vec<Vec<String>> = curve
        .iter()
        .map(|r| {
            vec![
                r.k_photons.to_string(),
                fmt_float(r.f0),
                fmt_float(r.f1),
                fmt_float(r.p_success),
            ]
        })
        .collect();
    write_csv(out, config, &["k_photons", "f0", "f1", "p_success"], &rows)?;
    let last = curve.last().expect("at least one photon");
    let mut summary = format!(
        "K = {}: F0 = {:.6}, F1 = {:.6}, P = {:.6}, rate = {:.4e} /s",
        last.k_photons,
        last.f0,
        last.f1,
        last.p_success,
        generation_rate(last.p_success, last.k_photons, e.t_cycle)
    );
    match fit_curve(&curve, dims.stack_size()) {
        Ok(fit) => {
            summary += &format!(
                "\nbeta = {:.6}, amplitude = {:.6}, residual = {:.3e}",
                fit.beta, fit.amplitude, fit.residual
            )
        }
        Err(err) => summary += &format!("\nbeta not fitted: {err}"),
    }
    Ok(summary)
}

fn run_sweep(config: &ExperimentConfig, out: Option<&Path>) -> Result<String, CliError> {
    let dims = config.lattice()?;
    let axis1 = config
        .sweep
        .axis1
        .values()
        .map_err(|m| ConfigError::Invalid {
            field: "sweep.axis1".into(),
            message: m,
        })?;
    let axis2 = config
        .sweep
        .axis2
        .values()
        .map_err(|m| ConfigError::Invalid {
            field: "sweep.axis2".into(),
            message: m,
        })?;
    if dims.window_size() > crate::tensornet::MAX_WINDOW {
        return Err(CliError::Resource(format!(
            "window of {} photons is too large",
            dims.window_size()
        )));
    }
    let cells = sweep_beta(&axis1, &axis2, config.mode, &dims, &config.error_model);
    let mut failed = 0;
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| {
            let mut row = vec![fmt_float(c.axis1), fmt_float(c.axis2)];
            match &c.result {
                Ok(fit) => {
                    row.extend([
                        fmt_float(fit.beta),
                        fmt_float(fit.amplitude),
                        fmt_float(fit.residual),
                        "ok".into(),
                    ]);
                }
                Err(e) => {
                    failed += 1;
                    row.extend([
                        String::new(),
                        String::new(),
                        String::new(),
                        format!("error: {e}"),
                    ]);
                }
            }
            row
        })
        .collect();
    write_csv(
        out,
        config,
        &["axis1", "axis2", "beta", "amplitude", "residual", "status"],
        &rows,
    )?;
    Ok(format!(
        "{} grid points, {} error cells",
        cells.len(),
        failed
    ))
}

fn run_schedule(config: &ExperimentConfig, out: Option<&Path>) -> Result<String, CliError> {
    let dims = config.lattice()?;
    let schedule = build_schedule(&dims, config.error_model.t_cycle, config.taus())
        .map_err(|e| CliError::Validation(format!("infeasible schedule: {e}")))?;
    let report = validate_schedule(&schedule, config.schedule.horizon);
    let rows: Vec<Vec<String>> = schedule
        .timeline()
        .into_iter()
        .map(|ev| vec![fmt_float(ev.time), ev.entity, ev.event])
        .collect();
    write_csv(out, config, &["time_ns", "entity", "event"], &rows)?;
    let delays: Vec<String> = schedule
        .delays()
        .iter()
        .map(|d| format!("{d:.6}"))
        .collect();
    let mut summary = format!(
        "delays (ns): [{}]\ncycles simulated: {}, reflections: {}, exited: {}, in flight: {}",
        delays.join(", "),
        report.cycles,
        report.reflections,
        report.exited,
        report.in_flight
    );
    if report.passed() {
        summary += "\nschedule: PASS";
        Ok(summary)
    } else {
        for v in &report.violations {
            summary += &format!(
                "\n{:?} at {:.4} ns, photons {:?}: {}",
                v.kind, v.time, v.photons, v.detail
            );
        }
        Err(CliError::Validation(format!(
            "{summary}\nschedule: FAIL ({} violations)",
            report.violations.len()
        )))
    }
}

fn run_oracle(config: &ExperimentConfig, out: Option<&Path>) -> Result<String, CliError> {
    let gate = config.gate_model()?.gate()?;
    let reports = identity_suite(&gate, 7)?;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.passed.to_string(),
                fmt_float(r.max_error),
                fmt_float(r.tolerance),
            ]
        })
        .collect();
    write_csv(
        out,
        config,
        &["name", "passed", "max_error", "tolerance"],
        &rows,
    )?;
    let width = reports.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut table = String::new();
    for r in &reports {
        table += &format!(
            "{:<width$}  {}  err {:.2e} (tol {:.0e})\n",
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.max_error,
            r.tolerance
        );
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        Ok(format!("{table}all {} identities pass", reports.len()))
    } else {
        Err(CliError::Validation(format!(
            "{table}{failed} of {} identities failed",
            reports.len()
        )))
    }
}

fn run_reflection(config: &ExperimentConfig, out: Option<&Path>) -> Result<String, CliError> {
    let tau = std::f64::consts::TAU;
    let rc = &config.reflection;
    // both columns share the cavity frequency as the reference (ω_c = 0)
    let (params, shift_a, shift_b, names) = match config.gate_model()? {
        GateModel::Magnetic(p) => (p, 0.0, -zeeman_detuning(&p), ["r_up", "r_down"]),
        GateModel::Chiral(c) => {
            let p = CavityParams::new(c.g(), c.kappa(), c.gamma(), 0.0, 0.0, 0.0).map_err(|e| {
                ConfigError::Invalid {
                    field: "chiral".into(),
                    message: e.to_string(),
                }
            })?;
            let delta_s = crate::cavity::chiral_reflection(&c)
                .map(|r| r.delta_s)
                .unwrap_or(0.0);
            (p, delta_s, f64::NAN, ["r_coupled", "r_uncoupled"])
        }
    };
    let uncoupled =
        CavityParams::new(0.0, params.kappa(), params.gamma(), 0.0, 0.0, 0.0).map_err(|e| {
            ConfigError::Invalid {
                field: "reflection".into(),
                message: e.to_string(),
            }
        })?;
    let mut rows = Vec::with_capacity(rc.points);
    for i in 0..rc.points {
        let det = rc.detuning_min_ghz
            + (rc.detuning_max_ghz - rc.detuning_min_ghz) * i as f64 / (rc.points - 1) as f64;
        let omega = tau * det;
        let a = reflection_general(omega, 0.0, shift_a, &params);
        let b = if shift_b.is_nan() {
            reflection_general(omega, 0.0, 0.0, &uncoupled)
        } else {
            reflection_general(omega, 0.0, shift_b, &params)
        };
        rows.push(vec![
            fmt_float(det),
            fmt_float(a.re),
            fmt_float(a.im),
            fmt_float(b.re),
            fmt_float(b.im),
        ]);
    }
    let header = [
        "detuning_ghz".to_string(),
        format!("{}_re", names[0]),
        format!("{}_im", names[0]),
        format!("{}_re", names[1]),
        format!("{}_im", names[1]),
    ];
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(out, config, &header, &rows)?;
    Ok(format!("{} detuning samples", rc.points))
}

/// Parse arguments, run, print the summary and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Some(jobs) = cli.jobs {
        // a second initialization (e.g. repeated calls in tests) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global();
    }
    let config = match &cli.config {
        Some(path) => ExperimentConfig::load(path),
        None => Ok(ExperimentConfig::default()),
    };
    let result = config
        .map_err(CliError::from)
        .and_then(|c| run(cli.command, &c, cli.out.as_deref()));
    match result {
        Ok(summary) => {
            eprintln!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
