use std::path::PathBuf;
use std::process::ExitCode;

use altmin_bench::error::CliError;
use altmin_bench::{figure, run, verify};
use clap::{Parser, Subcommand};

/// Run alternating-minimization experiments and audit their convergence bounds.
///
/// Exit codes: 0 pass, 1 certificate violation, 2 input error, 3 solver failure.
/// ALTMIN_OUT_DIR, when set, replaces the directory of every output file.
#[derive(Parser)]
#[command(name = "altmin-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured solver and write the trace CSV and summary JSON.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: `[output].dir`, else the working directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a trace against the certificates listed in the config.
    Verify {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Treat skipped certificates as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Write gap-versus-iteration data for AM, AAM (μ = 0), AAM (μ = μ*) and FGM.
    Figure {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cmd: Command) -> Result<u8, CliError> {
    match cmd {
        Command::Run { config, out } => {
            let res = run::cmd_run(&config, out.as_deref())?;
            for e in &res.entries {
                println!(
                    "{:<12} iterations {:>6}  final gap {:.3e}  {:?}",
                    e.solver, e.iterations, e.final_gap, e.status
                );
            }
            println!("trace: {}", res.trace.display());
            println!("summary: {}", res.summary.display());
            Ok(0)
        }
        Command::Verify { trace, config, strict } => {
            let res = verify::cmd_verify(&trace, &config, strict)?;
            for c in &res.report.certificates {
                let slack = c.worst_slack.map(|s| format!("{s:.3e}")).unwrap_or_else(|| "-".into());
                let at = c.first_failure_k.map(|k| format!(" first failure at k = {k}")).unwrap_or_default();
                println!("{:<20} {:<12} {:<34} worst slack {slack}{at}", c.certificate, c.solver, c.status);
            }
            println!("report: {}", res.report_path.display());
            Ok(res.report.exit_code())
        }
        Command::Figure { config, out } => {
            let path = figure::cmd_figure(&config, out.as_deref())?;
            println!("figure data: {}", path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
