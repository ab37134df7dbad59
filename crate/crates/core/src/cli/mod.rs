//! Command-line orchestration: config ingestion, the five tasks, and file
//! emission.
//!
//! Exit codes: 0 success, 1 validation or configuration error, 2 when a
//! physical invariant fails (including a reference-table row that does not
//! hold).

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::info;

use crate::control::{gate_schedule, verify_tables, NamedGate, TableReport};
use crate::device::{tau_for, timings, DeviceParams, Timings};
use crate::error::{Error, Result};
use crate::measurement::{simulate_records, MeasurementRecord, MeasurementSetting, SamplingOptions};
use crate::process::{chi_exact, process_tomography, standard_channel, Channel, ProcessResult};
use crate::qmath::{eigenvalues_hermitian, trace_distance, CMatrix};
use crate::scalar::C;
use crate::tomography::{reconstruct, default_budget, schedule_1q, schedule_2q, schedule_nq, ReconstructionResult, Route, TomographySchedule};

pub use config::{ChannelSpec, RunConfig, StatePreset, StateSpec, Task};
use output::{fmt_f64, write_file};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

/// Tolerance for the exact-mode self checks.
const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "charge-tomo", version, about = "Charge-qubit pulse simulation and tomography")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand, Clone, Copy)]
pub enum Command {
    /// Gate times, the two-qubit gate time under both conventions, and
    /// schedule durations against the coherence budget.
    Timing,
    /// Recompute every reference-table row.
    VerifyTables,
    /// Measurement records for a state without reconstruction.
    Simulate,
    /// Full state tomography.
    TomoState,
    /// Single-qubit process tomography.
    TomoProcess,
}

impl From<Command> for Task {
    fn from(c: Command) -> Self {
        match c {
            Command::Timing => Task::Timing,
            Command::VerifyTables => Task::VerifyTables,
            Command::Simulate => Task::Simulate,
            Command::TomoState => Task::TomoState,
            Command::TomoProcess => Task::TomoProcess,
        }
    }
}

#[derive(Debug, Args, Clone, Default)]
pub struct CommonArgs {
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    pub shots: Option<u64>,
    /// qubit1, qubit2 or shortest.
    #[arg(long, global = true, value_name = "ROUTE")]
    pub route: Option<Route>,
    /// on or off.
    #[arg(long, global = true, value_name = "on|off", value_parser = config::parse_on_off)]
    pub project: Option<bool>,
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

/// Config file first, then command-line overrides.
pub fn build_config(task: Task, args: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    cfg.task = Some(task);
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(s) = args.shots {
        cfg.shots = s;
    }
    if let Some(r) = args.route {
        cfg.route = r;
    }
    if let Some(p) = args.project {
        cfg.project = p;
    }
    if let Some(o) = &args.out {
        cfg.out = o.clone();
    }
    Ok(cfg)
}

/// Result of a task that ran to completion. `violations` lists failed
/// physical checks; any entry turns the exit code into 2.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_INVARIANT
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_VALIDATION,
    }
}

pub fn run_task(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.task.ok_or_else(|| Error::Config("no task given".into()))? {
        Task::Timing => cmd_timing(cfg),
        Task::VerifyTables => cmd_verify_tables(cfg),
        Task::Simulate => cmd_simulate(cfg),
        Task::TomoState => cmd_tomo_state(cfg),
        Task::TomoProcess => cmd_tomo_process(cfg),
    }
}

/// Parses `args` (program name first), runs the task and returns the exit
/// code. Reports go to stdout, errors to stderr.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let result = build_config(cli.command.into(), &cli.common).and_then(|cfg| run_task(&cfg));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.report);
            for v in &outcome.violations {
                eprintln!("invariant violated: {v}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn ns_and_s(t: f64) -> String {
    format!("{t:.6e} ns ({:.3e} s)", t * 1e-9)
}

/// Numbers behind the timing report.
#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub timings: Timings<f64>,
    /// `τ` with `E_J = E_J(0) = 2E_J⁰`.
    pub tau_alternative: f64,
    /// `(table, row, operation, duration ns)` for every reference-table row.
    pub rows: Vec<(u8, u8, String, f64)>,
    /// Longest of the fifteen two-qubit settings, per route.
    pub max_by_route: Vec<(Route, f64)>,
    pub budget_ns: f64,
}

impl TimingReport {
    pub fn max_default_route(&self) -> f64 {
        self.max_by_route.iter().find(|(r, _)| *r == Route::default()).map_or(f64::NAN, |(_, d)| *d)
    }

    /// Durations strictly below the budget pass.
    pub fn within_budget(&self, duration: f64) -> bool {
        duration < self.budget_ns
    }
}

pub fn timing_report(p: &DeviceParams<f64>, budget_ns: f64) -> Result<TimingReport> {
    let dev = p.clone().with_qubit_count(2)?;
    let rows = crate::control::tables::all_rows()
        .map(|r| {
            let d = crate::control::sequence_schedule(&dev, &r.sequence())?.total_duration();
            Ok((r.table, r.row, r.operation.to_string(), d))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_by_route = [Route::Shortest, Route::Qubit1, Route::Qubit2]
        .into_iter()
        .map(|r| Ok((r, schedule_2q(&dev, r)?.max_duration())))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimingReport {
        timings: timings(&dev),
        tau_alternative: tau_for(2.0 * dev.e_j0),
        rows,
        max_by_route,
        budget_ns,
    })
}

pub fn cmd_timing(cfg: &RunConfig) -> Result<Outcome> {
    let p = &cfg.device;
    let rep = timing_report(p, cfg.t2_budget_ns)?;
    let t = rep.timings;
    let u_tau = gate_schedule(&p.clone().with_qubit_count(2)?, NamedGate::UTau(0, 1))?;
    let mut s = String::new();
    let _ = writeln!(s, "device: E_C = {} GHz, E_J0 = {} GHz, E_J_eff = {} GHz, E_L = {} GHz", fmt_f64(p.e_c), fmt_f64(p.e_j0), fmt_f64(p.e_j_eff), fmt_f64(p.e_l));
    let _ = writeln!(s, "t_x          {}", ns_and_s(t.t_x));
    let _ = writeln!(s, "t_z_quarter  {}", ns_and_s(t.t_z_quarter));
    let _ = writeln!(s, "t_y_total    {}", ns_and_s(t.t_y_total));
    let _ = writeln!(s, "tau          {}  [E_J = E_J_eff]", ns_and_s(t.tau));
    let _ = writeln!(s, "tau_alt      {}  [E_J = E_J(0) = 2 E_J0]", ns_and_s(rep.tau_alternative));
    let _ = writeln!(
        s,
        "note: tau = hbar*pi*sqrt(15)/(4 E_J); the configured E_J_eff sets the pulse, and reading E_J as E_J(0) = 2 E_J0 halves it"
    );
    let _ = writeln!(s, "U(t) pulse: {} segment(s), flux = {}", u_tau.segments.len(), fmt_f64(p.tau_flux()?));
    let _ = writeln!(s, "budget T2 = {} ns", rep.budget_ns);
    let _ = writeln!(s, "table row operation        duration_ns             budget");
    for (table, row, op, d) in &rep.rows {
        let _ = writeln!(s, "{table:>5} {row:>3} {op:<16} {:<23} {}", fmt_f64(*d), pass_fail(rep.within_budget(*d)));
    }
    for (route, d) in &rep.max_by_route {
        let tag = if *route == Route::default() { " (default)" } else { "" };
        let _ = writeln!(s, "max over 15 two-qubit settings, route {route}{tag}: {}  {}", ns_and_s(*d), pass_fail(rep.within_budget(*d)));
    }
    write_file(&cfg.out, "timing.txt", &s)?;
    Ok(Outcome { report: s, violations: Vec::new() })
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn cmd_verify_tables(cfg: &RunConfig) -> Result<Outcome> {
    let report: TableReport = verify_tables(&cfg.device)?;
    let s = report.render();
    write_file(&cfg.out, "tables.txt", &s)?;
    let violations = report
        .rows
        .iter()
        .filter(|r| !r.holds())
        .map(|r| format!("table {} row {} ({}) deviates by {:.3e}", r.row.table, r.row.row, r.row.operation, r.matrix_deviation))
        .collect();
    Ok(Outcome { report: s, violations })
}

/// Builds the input state and a device with the matching qubit count.
pub fn resolve_state(cfg: &RunConfig) -> Result<(CMatrix<f64>, DeviceParams<f64>)> {
    let spec = cfg.state.as_ref().ok_or_else(|| Error::Config("task needs state.preset or state.file".into()))?;
    let rho = match spec {
        StateSpec::Preset(p) => preset_state(*p, cfg.device.n_qubits),
        StateSpec::File(path) => output::read_matrix(path)?,
    };
    let dim = rho.dim();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidDimension(dim));
    }
    let n = rho.num_qubits();
    if n > 4 {
        return Err(Error::Unsupported(format!("{n}-qubit states (at most 4)")));
    }
    rho.ensure_hermitian()?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::Config(format!("state trace {} + {}i is not 1", tr.re, tr.im)));
    }
    if cfg.n_qubits_explicit && cfg.device.n_qubits != n {
        return Err(Error::Config(format!("device.n_qubits = {} but the state has {n} qubits", cfg.device.n_qubits)));
    }
    Ok((rho, cfg.device.clone().with_qubit_count(n)?))
}

pub fn preset_state(p: StatePreset, n: usize) -> CMatrix<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match p {
        StatePreset::Fig3 => {
            let (x, y, z) = (0.5, 3f64.sqrt() / 2.0, 0.0);
            CMatrix::from_vec(2, vec![C::new((1.0 + z) / 2.0, 0.0), C::new(x / 2.0, -y / 2.0), C::new(x / 2.0, y / 2.0), C::new((1.0 - z) / 2.0, 0.0)])
                .expect("2x2")
        }
        StatePreset::Fig4 => {
            let ph = C::from_polar(h, std::f64::consts::FRAC_PI_3);
            CMatrix::outer(&[C::new(h, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), ph])
        }
        StatePreset::Mixed => {
            let d = 1usize << n;
            CMatrix::identity(d).scale_real(1.0 / d as f64)
        }
        StatePreset::Ground => {
            let d = 1usize << n;
            CMatrix::from_fn(d, |i, j| C::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0))
        }
        StatePreset::Bell => crate::measurement::pure_state(&[h, 0.0, 0.0, h]),
        StatePreset::Ghz => {
            let mut v = vec![0.0; 8];
            v[0] = h;
            v[7] = h;
            crate::measurement::pure_state(&v)
        }
    }
}

/// The schedule used for an `n`-qubit device.
pub fn schedule_for(p: &DeviceParams<f64>, route: Route, budget: Option<usize>) -> Result<TomographySchedule<f64>> {
    match p.n_qubits {
        1 => schedule_1q(p),
        2 => schedule_2q(p, route),
        _ => schedule_nq(p, budget.unwrap_or_else(|| default_budget(p.n_qubits))),
    }
}

fn sampling(cfg: &RunConfig) -> SamplingOptions {
    SamplingOptions { shots: cfg.shots, master_seed: cfg.seed, readout_error: cfg.readout_error }
}

fn is_exact(cfg: &RunConfig) -> bool {
    cfg.shots == 0 && cfg.readout_error == 0.0
}

fn simulate_state(cfg: &RunConfig) -> Result<(CMatrix<f64>, TomographySchedule<f64>, Vec<MeasurementRecord>)> {
    let (rho, dev) = resolve_state(cfg)?;
    info!("{}-qubit state, route {}, {} shots, seed {}", dev.n_qubits, cfg.route, cfg.shots, cfg.seed);
    let schedule = schedule_for(&dev, cfg.route, cfg.budget)?;
    let settings: Vec<MeasurementSetting<f64>> = schedule.settings().cloned().collect();
    let records = simulate_records(&rho, &settings, sampling(cfg), "")?;
    Ok((rho, schedule, records))
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Outcome> {
    let (rho, schedule, records) = simulate_state(cfg)?;
    write_file(&cfg.out, "input.json", &output::matrix_to_json(&rho, &[]))?;
    write_file(&cfg.out, "schedule.csv", &output::schedule_csv(&schedule))?;
    let csv = output::records_csv(&records);
    write_file(&cfg.out, "records.csv", &csv)?;
    Ok(Outcome { report: csv, violations: Vec::new() })
}

/// Writes the reconstruction files and returns the diagnostics text.
fn write_reconstruction(dir: &std::path::Path, prefix: &str, r: &ReconstructionResult<f64>) -> Result<String> {
    write_file(dir, &format!("{prefix}raw.json"), &output::matrix_to_json(&r.raw, &[]))?;
    write_file(dir, &format!("{prefix}physical.json"), &output::matrix_to_json(&r.physical, &[]))?;
    let mut s = String::new();
    let _ = writeln!(s, "min_eigenvalue_raw {}", fmt_f64(r.diagnostics.min_eigenvalue_raw));
    let _ = writeln!(s, "min_eigenvalue_physical {}", fmt_f64(eigenvalues_hermitian(&r.physical)?[0]));
    let _ = writeln!(s, "trace_distance_raw_physical {}", fmt_f64(trace_distance(&r.raw, &r.physical)?));
    for (label, res) in &r.diagnostics.residuals {
        let _ = writeln!(s, "residual {label} {}", fmt_f64(*res));
    }
    Ok(s)
}

fn physical_checks(r: &ReconstructionResult<f64>, violations: &mut Vec<String>, what: &str) -> Result<()> {
    let min = eigenvalues_hermitian(&r.physical)?[0];
    if min < -1e-12 {
        violations.push(format!("{what}: projected state has eigenvalue {min:e}"));
    }
    let tr = r.physical.trace().re;
    if (tr - 1.0).abs() > 1e-12 {
        violations.push(format!("{what}: projected trace {tr}"));
    }
    Ok(())
}

pub fn cmd_tomo_state(cfg: &RunConfig) -> Result<Outcome> {
    let (rho, schedule, records) = simulate_state(cfg)?;
    let r = reconstruct(&schedule, &records)?;
    let dir = &cfg.out;
    write_file(dir, "input.json", &output::matrix_to_json(&rho, &[]))?;
    write_file(dir, "schedule.csv", &output::schedule_csv(&schedule))?;
    write_file(dir, "records.csv", &output::records_csv(&records))?;
    write_file(dir, "coefficients.csv", &output::coefficients_csv(&r.coefficients))?;
    write_file(dir, "barchart_raw.csv", &output::barchart_csv(&r.raw))?;
    write_file(dir, "barchart_physical.csv", &output::barchart_csv(&r.physical))?;
    let chosen = r.state(cfg.project);
    write_file(dir, "state.json", &output::matrix_to_json(chosen, &[]))?;
    let mut diag = write_reconstruction(dir, "", &r)?;
    let td = trace_distance(chosen, &rho)?;
    let _ = writeln!(diag, "projected {}", if cfg.project { "on" } else { "off" });
    let _ = writeln!(diag, "trace_distance_to_input {}", fmt_f64(td));
    let mut violations = Vec::new();
    physical_checks(&r, &mut violations, "state")?;
    if is_exact(cfg) && trace_distance(&r.raw, &rho)? > EXACT_TOL {
        violations.push(format!("exact reconstruction misses the input by {td:e}"));
    }
    write_file(dir, "diagnostics.txt", &diag)?;
    let mut report = output::coefficients_csv(&r.coefficients);
    report += &diag;
    Ok(Outcome { report, violations })
}

pub fn resolve_channel(cfg: &RunConfig) -> Result<Channel<f64>> {
    match cfg.channel.as_ref().ok_or_else(|| Error::Config("task needs channel.preset or channel.kraus_file".into()))? {
        ChannelSpec::Standard(k) => standard_channel(*k),
        ChannelSpec::KrausFile(path) => {
            let label = path.file_stem().map_or("kraus".to_string(), |s| s.to_string_lossy().into_owned());
            Channel::new(output::read_kraus(path)?, label)
        }
    }
}

pub fn cmd_tomo_process(cfg: &RunConfig) -> Result<Outcome> {
    let ch = resolve_channel(cfg)?;
    let dev = cfg.device.clone().with_qubit_count(1)?;
    let res: ProcessResult<f64> = process_tomography(&dev, &ch, sampling(cfg), cfg.project)?;
    let dir = &cfg.out;
    let chi = &res.chi;
    write_file(dir, "chi.json", &output::matrix_to_json(&chi.entries, &[("basis_label", &chi.basis_label), ("channel", &ch.label)]))?;
    write_file(dir, "chi_barchart.csv", &output::barchart_csv(&chi.entries))?;
    let mut violations = Vec::new();
    let mut diag = String::new();
    for (k, r) in res.outputs.iter().enumerate() {
        let text = write_reconstruction(dir, &format!("output{}_", k + 1), r)?;
        for line in text.lines() {
            let _ = writeln!(diag, "output{} {line}", k + 1);
        }
        physical_checks(r, &mut violations, &format!("output {}", k + 1))?;
    }
    let d = chi.diagnostics()?;
    let _ = writeln!(diag, "chi_hermitian_deviation {}", fmt_f64(d.hermitian_deviation));
    let _ = writeln!(diag, "chi_trace {}", fmt_f64(d.trace));
    let _ = writeln!(diag, "chi_min_eigenvalue {}", fmt_f64(d.min_eigenvalue));
    let _ = writeln!(diag, "chi_tp_residual {}", fmt_f64(d.tp_residual));
    let cp = d.min_eigenvalue >= -1e-8;
    let _ = writeln!(diag, "completely_positive {}", if cp { "yes" } else { "no" });
    let _ = writeln!(diag, "projected {}", if cfg.project { "on" } else { "off" });
    if is_exact(cfg) {
        let dev_exact = chi.entries.max_abs_diff(&chi_exact(&ch)?.entries);
        let _ = writeln!(diag, "deviation_from_exact {}", fmt_f64(dev_exact));
        if dev_exact > EXACT_TOL {
            violations.push(format!("exact process tomography misses the channel by {dev_exact:e}"));
        }
    }
    write_file(dir, "diagnostics.txt", &diag)?;
    let mut report = output::barchart_csv(&chi.entries);
    report += &diag;
    Ok(Outcome { report, violations })
}
