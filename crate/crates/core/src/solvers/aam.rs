use std::time::Instant;

use super::coefficients::{choose_a_adaptive, choose_a_known_l, AdaptiveInputs};
use super::line_search::exact_line_search;
use super::{
    AamState, AamStep, CoefficientRule, IterRecord, MomentumRule, SolverConfig, SolverKind,
    SolverTrace, StopRule, StopStatus,
};
use crate::error::{Error, Result};
use crate::linalg::vecops::{check_len, dist2, dot, norm2, norm2_sq, sub};
use crate::objective::{exact_block_min, require_smooth, BlockObjective, BlockPartition};

/// Block with the largest gradient norm; ties go to the lowest index.
pub fn greedy_block(h: &dyn BlockObjective, y: &[f64]) -> usize {
    greedy_from_gradient(h.partition(), &h.gradient(y))
}

pub(crate) fn greedy_from_gradient(p: &BlockPartition, g: &[f64]) -> usize {
    let mut best = (0, -1.0);
    for (i, idx) in p.blocks().iter().enumerate() {
        let sq: f64 = idx.iter().map(|&j| g[j] * g[j]).sum();
        if sq > best.1 {
            best = (i, sq);
        }
    }
    best.0
}

/// Accelerated alternating minimization on a smooth unconstrained objective.
///
/// Each iteration: exact line search between `x^k` and `v^k`, greedy block
/// choice at `y^k`, exact minimization over that block, coefficient update
/// and momentum step. The estimating-function minimum `min ψ_k` is tracked
/// alongside so the recurrence `A_k f(x^k) ≤ min ψ_k` can be audited.
pub fn run_aam(h: &dyn BlockObjective, x0: &[f64], cfg: &SolverConfig) -> Result<SolverTrace> {
    cfg.validate()?;
    require_smooth(h)?;
    let p = h.partition();
    check_len(x0, p.total_dim())?;
    let n = p.n_blocks();
    let mu = cfg.mu_assumed;
    let rule = match cfg.coefficient_rule {
        CoefficientRule::Auto if cfg.l_known.is_some() => CoefficientRule::KnownL,
        CoefficientRule::Auto => CoefficientRule::Adaptive,
        CoefficientRule::KnownL if cfg.l_known.is_none() => return Err(Error::MissingL),
        r => r,
    };
    let start = Instant::now();
    let stop = StopRule::new(cfg, h.optimum().map(|o| o.value));

    let mut x = x0.to_vec();
    let mut v = x0.to_vec();
    // minimizer of ψ_k; differs from v only under the literal momentum rule
    let mut center = x0.to_vec();
    let mut big_a = 0.0;
    let mut tau = 1.0;
    let mut psi_min = 0.0;
    let mut f_x = h.smooth_value(&x);
    let grad_norm = norm2(&h.gradient(&x));

    let mut records = vec![IterRecord {
        k: 0,
        x: x.clone(),
        f_value: f_x,
        composite_value: f_x,
        grad_norm,
        block_steps: Vec::new(),
        aam: Some(AamState {
            big_a,
            tau,
            v: v.clone(),
            psi_min,
            step: None,
        }),
        fgm_v: None,
        wall_time: start.elapsed().as_secs_f64(),
    }];
    let mut status = stop.check(f_x, grad_norm);

    let mut k = 0;
    while status.is_none() && k < cfg.max_iters {
        let ls = exact_line_search(h, &x, &v, cfg.line_search_tol);
        let y = ls.y;
        let f_y = ls.f_y;
        let g = h.gradient(&y);
        let g_sq = norm2_sq(&g);
        if g_sq.sqrt() <= cfg.grad_tolerance {
            status = Some(StopStatus::GradTolerance);
            break;
        }
        let block = greedy_from_gradient(p, &g);
        let x_next = exact_block_min(h, &y, block)?;
        let f_next = h.smooth_value(&x_next);

        let a = match rule {
            CoefficientRule::KnownL => {
                let l = cfg.l_known.ok_or(Error::MissingL)?;
                choose_a_known_l(big_a, tau, mu, l, n)?
            }
            _ => {
                let inp = AdaptiveInputs {
                    f_y,
                    f_next,
                    grad_sq: g_sq,
                    v_dist_sq: dist2(&v, &y).powi(2),
                    big_a,
                    tau,
                    mu,
                };
                match choose_a_adaptive(inp) {
                    Ok(a) => a,
                    Err(Error::NoPositiveRoot) => {
                        status = Some(StopStatus::NoProgress);
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        };
        let tau_next = tau + mu * a;

        // ψ_{k+1}(z) = min ψ_k + τ_k/2‖z − c‖² + a(f(y) + ⟨g, z − y⟩ + μ/2‖z − y‖²)
        let center_next: Vec<f64> = center
            .iter()
            .zip(&y)
            .zip(&g)
            .map(|((c, yi), gi)| (tau * c + mu * a * yi - a * gi) / tau_next)
            .collect();
        let dz = sub(&center_next, &y);
        psi_min = psi_min
            + 0.5 * tau * dist2(&center_next, &center).powi(2)
            + a * (f_y + dot(&g, &dz) + 0.5 * mu * norm2_sq(&dz));
        center = center_next;

        v = match cfg.momentum_rule {
            MomentumRule::Proof => center.clone(),
            MomentumRule::Literal => v.iter().zip(&g).map(|(vi, gi)| vi - a * gi).collect(),
        };
        big_a += a;
        tau = tau_next;
        x = x_next;
        f_x = f_next;
        k += 1;

        let grad_norm = norm2(&h.gradient(&x));
        records.push(IterRecord {
            k,
            x: x.clone(),
            f_value: f_x,
            composite_value: f_x,
            grad_norm,
            block_steps: Vec::new(),
            aam: Some(AamState {
                big_a,
                tau,
                v: v.clone(),
                psi_min,
                step: Some(AamStep {
                    beta: ls.beta,
                    y,
                    f_y,
                    grad_y: g,
                    a,
                    block,
                }),
            }),
            fgm_v: None,
            wall_time: start.elapsed().as_secs_f64(),
        });
        status = stop.check(f_x, grad_norm);
    }

    Ok(SolverTrace {
        solver: SolverKind::Aam,
        x0: x0.to_vec(),
        mu,
        n_blocks: n,
        records,
        status: status.unwrap_or(StopStatus::MaxIters),
    })
}
