use std::time::Instant;

use super::{FgmMomentum, IterRecord, SolverConfig, SolverKind, SolverTrace, StopRule, StopStatus};
use crate::error::{Error, Result};
use crate::linalg::vecops::{check_len, norm2};
use crate::objective::{require_smooth, BlockObjective};

/// Fast gradient method:
/// `z^{k+1} = v^k − ∇f(v^k)/L`, `v^{k+1} = z^k + k/(k+3)·(z^{k+1} − z^k)`.
///
/// `L` comes from `cfg.l_known`, falling back to the declared constant.
pub fn run_fgm(h: &dyn BlockObjective, x0: &[f64], cfg: &SolverConfig) -> Result<SolverTrace> {
    cfg.validate()?;
    require_smooth(h)?;
    let p = h.partition();
    check_len(x0, p.total_dim())?;
    let l = cfg
        .l_known
        .or(h.constants().lipschitz)
        .ok_or(Error::MissingL)?;
    let start = Instant::now();
    let stop = StopRule::new(cfg, h.optimum().map(|o| o.value));

    let mut z = x0.to_vec();
    let mut v = x0.to_vec();
    let f0 = h.smooth_value(&z);
    let grad_norm = norm2(&h.gradient(&z));
    let mut records = vec![IterRecord {
        k: 0,
        x: z.clone(),
        f_value: f0,
        composite_value: f0,
        grad_norm,
        block_steps: Vec::new(),
        aam: None,
        fgm_v: Some(v.clone()),
        wall_time: start.elapsed().as_secs_f64(),
    }];
    let mut status = stop.check(f0, grad_norm);

    let mut k = 0;
    while status.is_none() && k < cfg.max_iters {
        let g = h.gradient(&v);
        if norm2(&g) <= cfg.grad_tolerance {
            status = Some(StopStatus::GradTolerance);
            break;
        }
        let z_next: Vec<f64> = v.iter().zip(&g).map(|(vi, gi)| vi - gi / l).collect();
        let theta = k as f64 / (k as f64 + 3.0);
        v = match cfg.fgm_momentum {
            FgmMomentum::Listed => z
                .iter()
                .zip(&z_next)
                .map(|(a, b)| a + theta * (b - a))
                .collect(),
            FgmMomentum::Nesterov => z
                .iter()
                .zip(&z_next)
                .map(|(a, b)| b + theta * (b - a))
                .collect(),
        };
        z = z_next;
        k += 1;
        let f = h.smooth_value(&z);
        let grad_norm = norm2(&h.gradient(&z));
        records.push(IterRecord {
            k,
            x: z.clone(),
            f_value: f,
            composite_value: f,
            grad_norm,
            block_steps: Vec::new(),
            aam: None,
            fgm_v: Some(v.clone()),
            wall_time: start.elapsed().as_secs_f64(),
        });
        status = stop.check(f, grad_norm);
    }

    Ok(SolverTrace {
        solver: SolverKind::Fgm,
        x0: x0.to_vec(),
        mu: 0.0,
        n_blocks: p.n_blocks(),
        records,
        status: status.unwrap_or(StopStatus::MaxIters),
    })
}
