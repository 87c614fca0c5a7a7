//! `figure`: gap against iteration for AM, AAM with `μ = 0`, AAM with the
//! true `μ`, and FGM on one quadratic instance.

use std::path::{Path, PathBuf};

use altmin::batch::par_map;
use altmin::zoo::Instance;
use altmin::{SolverConfig, SolverKind};

use crate::config::{create_output, output_dir, RunConfig};
use crate::error::CliError;
use crate::run::{f_star, run_solver};
use crate::trace::fmt_num;

pub const COLUMNS: [&str; 5] = ["k", "am", "aam_mu0", "aam_mustar", "fgm"];

/// Gap columns in the order of `COLUMNS[1..]`. Shorter runs leave their
/// trailing cells empty.
pub fn figure_gaps(cfg: &RunConfig) -> Result<Vec<Vec<f64>>, CliError> {
    let inst = cfg.build_instance()?;
    if !matches!(inst, Instance::Quadratic(_)) {
        return Err(CliError::Config(format!(
            "figure needs a quadratic instance, got {}",
            cfg.instance.kind()
        )));
    }
    let h = inst.objective();
    let c = h.constants();
    let (Some(l), Some(mu)) = (c.lipschitz, c.strong_convexity) else {
        return Err(CliError::Config("figure needs a strongly convex quadratic".into()));
    };
    if cfg.figure.iters == 0 {
        return Err(CliError::Config("figure.iters must be at least 1".into()));
    }
    let base = SolverConfig {
        max_iters: cfg.figure.iters,
        l_known: Some(l),
        coefficient_rule: cfg.figure.coefficient_rule,
        fgm_momentum: cfg.figure.fgm_momentum,
        ..SolverConfig::default()
    };
    let jobs = [
        (SolverKind::Am, 0.0),
        (SolverKind::Aam, 0.0),
        (SolverKind::Aam, mu),
        (SolverKind::Fgm, 0.0),
    ];
    let fs = f_star(h)?;
    let x0 = inst.default_start();
    par_map(&jobs, |(kind, m)| {
        let cfg = SolverConfig {
            mu_assumed: *m,
            ..base.clone()
        };
        run_solver(*kind, h, &x0, &cfg)
            .map(|t| t.gaps(fs))
            .map_err(|e| CliError::Solver(format!("{}: {e}", kind.name())))
    })
    .into_iter()
    .collect()
}

pub fn render(columns: &[Vec<f64>]) -> String {
    let rows = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for k in 0..rows {
        out.push_str(&k.to_string());
        for col in columns {
            out.push(',');
            if let Some(g) = col.get(k) {
                out.push_str(&fmt_num(*g));
            }
        }
        out.push('\n');
    }
    out
}

/// `figure --config <path> --out <path>`. An output directory from the
/// environment replaces the directory part of `out`.
pub fn cmd_figure(config_path: &Path, out: Option<&Path>) -> Result<PathBuf, CliError> {
    let cfg = RunConfig::load(config_path)?;
    let out = out.map(Path::to_path_buf).unwrap_or_else(|| {
        cfg.output
            .dir
            .clone()
            .unwrap_or_else(|| PathBuf::from("."))
            .join("figure.csv")
    });
    let name = out
        .file_name()
        .ok_or_else(|| CliError::Config(format!("{} is not a file path", out.display())))?
        .to_string_lossy()
        .into_owned();
    let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
    let dir = output_dir(parent);
    let (path, mut file) = create_output(&dir, &name)?;
    let text = render(&figure_gaps(&cfg)?);
    std::io::Write::write_all(&mut file, text.as_bytes()).map_err(|e| CliError::unwritable(&path, e))?;
    Ok(path)
}
