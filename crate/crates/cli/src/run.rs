//! `run`: execute every configured solver on the instance.

use std::io::Write;
use std::path::{Path, PathBuf};

use altmin::batch::par_map;
use altmin::certificates::{aam_main_bound, am_linear_factor, BoundConstants};
use altmin::solvers::StopStatus;
use altmin::zoo::{Instance, InstanceSpec};
use altmin::{run_aam, run_am, run_fgm, BlockObjective, Regularizer, SolverConfig, SolverKind, SolverTrace};
use serde::Serialize;

use crate::config::{create_output, output_dir, RunConfig, SolverEntry};
use crate::error::CliError;
use crate::trace::{write_trace, TraceRow, GAP_FLOOR};

#[derive(Debug, Clone)]
pub struct SolverRun {
    pub label: String,
    pub config: SolverConfig,
    pub trace: SolverTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryEntry {
    pub instance: InstanceSpec,
    pub solver: String,
    pub final_gap: f64,
    pub iterations: usize,
    pub status: StopStatus,
}

pub fn f_star(h: &dyn BlockObjective) -> Result<f64, CliError> {
    h.optimum()
        .map(|o| o.value)
        .ok_or_else(|| CliError::Config("instance has no reference optimum".into()))
}

pub fn run_solver(kind: SolverKind, h: &dyn BlockObjective, x0: &[f64], cfg: &SolverConfig) -> altmin::Result<SolverTrace> {
    match kind {
        SolverKind::Am => run_am(h, x0, cfg),
        SolverKind::Aam => run_aam(h, x0, cfg),
        SolverKind::Fgm => run_fgm(h, x0, cfg),
    }
}

/// Runs every entry, in parallel when the feature is on. Results keep the
/// order of `entries`.
pub fn execute(entries: &[SolverEntry], inst: &Instance) -> Result<Vec<SolverRun>, CliError> {
    let h = inst.objective();
    let x0 = inst.default_start();
    let configs = entries
        .iter()
        .map(|e| e.resolve(h))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(&SolverEntry, SolverConfig)> = entries.iter().zip(configs).collect();
    par_map(&jobs, |(e, cfg)| {
        run_solver(e.kind, h, &x0, cfg)
            .map(|trace| SolverRun {
                label: e.label().to_string(),
                config: cfg.clone(),
                trace,
            })
            .map_err(|err| CliError::Solver(format!("solver '{}': {err}", e.label())))
    })
    .into_iter()
    .collect()
}

fn has_box(h: &dyn BlockObjective) -> bool {
    (0..h.partition().n_blocks()).any(|i| matches!(h.regularizer(i), Regularizer::Box { .. }))
}

/// Trace rows for one run. Wall-clock times are only written when asked
/// for, since they break byte-for-byte reproducibility.
pub fn trace_rows(h: &dyn BlockObjective, run: &SolverRun, wall_time: bool) -> Result<Vec<TraceRow>, CliError> {
    let fs = f_star(h)?;
    let trace = &run.trace;
    let c = BoundConstants::from_objective(h, &trace.x0);
    let n = trace.n_blocks;
    let main = match (c.lipschitz, c.radius) {
        (Some(l), Some(r)) if trace.solver == SolverKind::Aam && trace.mu < n as f64 * l => Some((l, r)),
        _ => None,
    };
    let linear = match (&c.block_lipschitz, &c.block_mu) {
        (Some(l), Some(mu)) if trace.solver == SolverKind::Am && n == 2 && !has_box(h) => Some(am_linear_factor(l, mu)),
        _ => None,
    };
    let gaps = trace.gaps(fs);
    let floor = GAP_FLOOR * (1.0 + fs.abs());
    if let Some(k) = gaps.iter().position(|g| !(*g >= floor)) {
        return Err(CliError::Solver(format!(
            "solver '{}': gap {:e} at k = {k} is below the reference optimum",
            run.label, gaps[k]
        )));
    }
    Ok(trace
        .records
        .iter()
        .map(|r| {
            let k = r.k;
            let state = r.aam.as_ref();
            let step = state.and_then(|s| s.step.as_ref());
            TraceRow {
                k,
                solver: run.label.clone(),
                f_gap: gaps[k],
                grad_norm: r.grad_norm,
                block: step.map(|s| s.block),
                beta: step.map(|s| s.beta),
                a: step.map(|s| s.a),
                big_a: state.map(|s| s.big_a),
                tau: state.map(|s| s.tau),
                bound_aam_main: main.filter(|_| k >= 1).map(|(l, rad)| aam_main_bound(k, n, l, rad, trace.mu)),
                bound_am_linear: linear.filter(|_| k >= 1).map(|q| q * gaps[k - 1]),
                wall_ms: wall_time.then_some(r.wall_time * 1e3),
            }
        })
        .collect())
}

pub fn summary(spec: &InstanceSpec, h: &dyn BlockObjective, runs: &[SolverRun]) -> Result<Vec<SummaryEntry>, CliError> {
    let fs = f_star(h)?;
    Ok(runs
        .iter()
        .map(|r| SummaryEntry {
            instance: spec.clone(),
            solver: r.label.clone(),
            final_gap: r.trace.last().composite_value - fs,
            iterations: r.trace.iterations(),
            status: r.trace.status,
        })
        .collect())
}

#[derive(Debug)]
pub struct RunOutput {
    pub trace: PathBuf,
    pub summary: PathBuf,
    pub entries: Vec<SummaryEntry>,
}

/// `run --config <path> --out <dir>`
pub fn cmd_run(config_path: &Path, out: Option<&Path>) -> Result<RunOutput, CliError> {
    let cfg = RunConfig::load(config_path)?;
    cfg.check_solvers()?;
    let inst = cfg.build_instance()?;
    let h = inst.objective();
    let dir = output_dir(out.or(cfg.output.dir.as_deref()));
    // open both files first so a bad path fails before any solver runs
    let (trace_path, trace_file) = create_output(&dir, &cfg.output.trace)?;
    let (summary_path, mut summary_file) = create_output(&dir, &cfg.output.summary)?;

    let runs = execute(&cfg.solvers, &inst)?;
    let mut rows = Vec::new();
    for r in &runs {
        rows.extend(trace_rows(h, r, cfg.output.wall_time)?);
    }
    let entries = summary(&cfg.instance, h, &runs)?;

    write_trace(std::io::BufWriter::new(trace_file), &rows)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", trace_path.display())))?;
    let json = serde_json::to_string_pretty(&entries).expect("summary serializes");
    summary_file
        .write_all(format!("{json}\n").as_bytes())
        .map_err(|e| CliError::unwritable(&summary_path, e))?;
    Ok(RunOutput {
        trace: trace_path,
        summary: summary_path,
        entries,
    })
}
