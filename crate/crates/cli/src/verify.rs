//! `verify`: audit a trace file against the configured certificates.
//!
//! The CSV is authoritative for every value it carries (gaps, gradient
//! norms, `A`, `τ`, `a`, `β`). Iterates, half-steps and the momentum points
//! are not in the file, so the configured solvers are re-run and their
//! internal state is paired with the file's values row by row.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use altmin::certificates::{certify, BoundConstants, BoundKind, BoundSpec, CertificateReport};
use altmin::zoo::Instance;
use altmin::{BlockObjective, Error, SolverKind, SolverTrace};
use serde::Serialize;

use crate::config::{create_output, output_dir, RunConfig};
use crate::error::CliError;
use crate::run::{execute, f_star, SolverRun};
use crate::trace::{read_trace, TraceRow, GAP_FLOOR};

pub const MISSING_CONSTANTS: &str = "skipped: missing constants";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateSummary {
    pub certificate: String,
    pub solver: String,
    /// `pass`, `fail`, or `skipped: <reason>`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Smallest normalized slack over checked rows.
    pub worst_slack: Option<f64>,
    pub first_failure_k: Option<usize>,
    pub failed_k: Vec<usize>,
    pub checked_rows: usize,
    pub skipped_rows: usize,
    pub warnings: usize,
}

impl CertificateSummary {
    fn skipped(certificate: &str, solver: &str, status: String, detail: Option<String>) -> Self {
        Self {
            certificate: certificate.into(),
            solver: solver.into(),
            status,
            detail,
            worst_slack: None,
            first_failure_k: None,
            failed_k: Vec::new(),
            checked_rows: 0,
            skipped_rows: 0,
            warnings: 0,
        }
    }

    fn from_report(solver: &str, r: &CertificateReport) -> Self {
        if let Some(reason) = &r.skipped {
            return Self::skipped(r.kind.name(), solver, format!("skipped: {reason}"), None);
        }
        let mut failed: Vec<usize> = r.rows.iter().filter(|row| !row.pass).map(|row| row.k).collect();
        failed.sort_unstable();
        failed.dedup();
        Self {
            certificate: r.kind.name().into(),
            solver: solver.into(),
            status: if r.passed() { "pass" } else { "fail" }.into(),
            detail: None,
            worst_slack: r.worst_slack.is_finite().then_some(r.worst_slack),
            first_failure_k: r.first_failure,
            failed_k: failed,
            checked_rows: r.checked_rows(),
            skipped_rows: r.rows.len() - r.checked_rows(),
            warnings: r.warnings,
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.status.starts_with("skipped")
    }

    pub fn is_failure(&self) -> bool {
        self.status == "fail"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub trace: String,
    pub strict: bool,
    pub passed: bool,
    pub certificates: Vec<CertificateSummary>,
}

impl VerifyReport {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Put the file's values into the re-run trace.
fn overlay(trace: &mut SolverTrace, rows: &[&TraceRow], fs: f64, label: &str) -> Result<(), CliError> {
    if rows.len() != trace.records.len() {
        return Err(CliError::TraceParse(format!(
            "solver '{label}': trace has {} rows but the configured run has {}",
            rows.len(),
            trace.records.len()
        )));
    }
    for (rec, row) in trace.records.iter_mut().zip(rows) {
        if row.k != rec.k {
            return Err(CliError::TraceParse(format!("solver '{label}': expected k = {}, found {}", rec.k, row.k)));
        }
        let value = row.f_gap + fs;
        rec.f_value += value - rec.composite_value;
        rec.composite_value = value;
        rec.grad_norm = row.grad_norm;
        if let Some(state) = rec.aam.as_mut() {
            let missing = || CliError::TraceParse(format!("solver '{label}': k = {}: missing AAM columns", row.k));
            state.big_a = row.big_a.ok_or_else(missing)?;
            state.tau = row.tau.ok_or_else(missing)?;
            if let Some(step) = state.step.as_mut() {
                step.a = row.a.ok_or_else(missing)?;
                step.beta = row.beta.ok_or_else(missing)?;
                step.block = row.block.ok_or_else(missing)?;
            }
        }
    }
    Ok(())
}

fn gap_floor_check(label: &str, rows: &[&TraceRow], fs: f64) -> CertificateSummary {
    let floor = GAP_FLOOR * (1.0 + fs.abs());
    let failed: Vec<usize> = rows.iter().filter(|r| !(r.f_gap >= floor)).map(|r| r.k).collect();
    let scale = 1.0 + fs.abs();
    let worst = rows.iter().map(|r| (r.f_gap - floor) / scale).fold(f64::INFINITY, f64::min);
    CertificateSummary {
        certificate: "f_gap_floor".into(),
        solver: label.into(),
        status: if failed.is_empty() { "pass" } else { "fail" }.into(),
        detail: None,
        worst_slack: worst.is_finite().then_some(worst),
        first_failure_k: failed.first().copied(),
        failed_k: failed,
        checked_rows: rows.len(),
        skipped_rows: 0,
        warnings: 0,
    }
}

/// The adaptive bound is stated for runs that assume `μ = 0`.
fn applies(kind: BoundKind, trace: &SolverTrace) -> bool {
    match trace.solver {
        SolverKind::Am => kind.for_am(),
        SolverKind::Aam => !kind.for_am() && (kind != BoundKind::AamAdaptive || trace.mu == 0.0),
        SolverKind::Fgm => false,
    }
}

fn constants(inst: &Instance, x0: &[f64]) -> BoundConstants {
    let mut c = BoundConstants::from_objective(inst.objective(), x0);
    if let Instance::Quadratic(q) = inst {
        c.level_radius = Some(q.level_set_radius(x0));
    }
    c
}

fn evaluate(kind: BoundKind, run: &SolverRun, c: &BoundConstants, h: &dyn BlockObjective) -> CertificateSummary {
    let label = run.label.as_str();
    let spec = BoundSpec {
        kind,
        constants: c.clone(),
    };
    match certify(&spec, &run.trace, Some(h)) {
        Ok(report) => CertificateSummary::from_report(label, &report),
        Err(Error::MissingConstants(names)) => {
            CertificateSummary::skipped(kind.name(), label, MISSING_CONSTANTS.into(), Some(names))
        }
        Err(e) => CertificateSummary::skipped(kind.name(), label, "skipped: not applicable".into(), Some(e.to_string())),
    }
}

/// Check a parsed trace against `cfg`. Pure apart from re-running solvers.
pub fn verify_rows(cfg: &RunConfig, rows: &[TraceRow], strict: bool, trace_name: &str) -> Result<VerifyReport, CliError> {
    cfg.check_solvers()?;
    let inst = cfg.build_instance()?;
    let h = inst.objective();
    let fs = f_star(h)?;

    let mut by_solver: BTreeMap<&str, Vec<&TraceRow>> = BTreeMap::new();
    for r in rows {
        by_solver.entry(r.solver.as_str()).or_default().push(r);
    }
    for label in by_solver.keys() {
        if !cfg.solvers.iter().any(|s| s.label() == *label) {
            return Err(CliError::TraceParse(format!("solver '{label}' is not in the config")));
        }
    }
    for s in &cfg.solvers {
        if !by_solver.contains_key(s.label()) {
            return Err(CliError::TraceParse(format!("solver '{}' has no rows in the trace", s.label())));
        }
    }

    let mut runs = execute(&cfg.solvers, &inst)?;
    let mut out = Vec::new();
    for run in runs.iter_mut() {
        let rows = &by_solver[run.label.as_str()];
        out.push(gap_floor_check(&run.label, rows, fs));
        overlay(&mut run.trace, rows, fs, &run.label)?;
    }
    let c = constants(&inst, &inst.default_start());
    for &kind in &cfg.certificates {
        let mut any = false;
        for run in &runs {
            if applies(kind, &run.trace) {
                any = true;
                out.push(evaluate(kind, run, &c, h));
            }
        }
        if !any {
            out.push(CertificateSummary::skipped(
                kind.name(),
                "-",
                "skipped: no applicable solver".into(),
                None,
            ));
        }
    }
    let failed = out.iter().any(|c| c.is_failure());
    let skipped = out.iter().any(|c| c.is_skipped());
    Ok(VerifyReport {
        trace: trace_name.into(),
        strict,
        passed: !failed && !(strict && skipped),
        certificates: out,
    })
}

#[derive(Debug)]
pub struct VerifyOutput {
    pub report_path: PathBuf,
    pub report: VerifyReport,
}

/// `verify --trace <path> --config <path> [--strict]`. The report goes next
/// to the trace unless an output directory is configured.
pub fn cmd_verify(trace_path: &Path, config_path: &Path, strict: bool) -> Result<VerifyOutput, CliError> {
    let cfg = RunConfig::load(config_path)?;
    let file = std::fs::File::open(trace_path)
        .map_err(|e| CliError::TraceParse(format!("cannot read {}: {e}", trace_path.display())))?;
    let rows = read_trace(std::io::BufReader::new(file))
        .map_err(|e| match e {
            CliError::TraceParse(m) => CliError::TraceParse(format!("{}: {m}", trace_path.display())),
            other => other,
        })?;
    let fallback = cfg
        .output
        .dir
        .clone()
        .or_else(|| trace_path.parent().map(Path::to_path_buf));
    let dir = output_dir(fallback.as_deref());
    let (report_path, mut file) = create_output(&dir, &cfg.output.report)?;
    let report = verify_rows(&cfg, &rows, strict, &trace_path.display().to_string())?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    file.write_all(format!("{json}\n").as_bytes())
        .map_err(|e| CliError::unwritable(&report_path, e))?;
    Ok(VerifyOutput { report_path, report })
}
