use std::time::Instant;

use super::{BlockStep, IterRecord, SolverConfig, SolverKind, SolverTrace, StopRule, StopStatus};
use crate::error::Result;
use crate::linalg::vecops::{check_len, norm2_sq};
use crate::objective::{composite_value, exact_block_min, BlockObjective};
use crate::prox::prox_map;

/// Norm of the full prox-gradient mapping at `x` with step constant `L`
/// (or 1 when `L` is unknown). Equals `‖∇f(x)‖` for smooth objectives.
pub(crate) fn mapping_norm(h: &dyn BlockObjective, x: &[f64]) -> Result<f64> {
    let m = h.constants().lipschitz.unwrap_or(1.0);
    let mut sq = 0.0;
    for i in 0..h.partition().n_blocks() {
        sq += norm2_sq(&prox_map(h, x, i, m)?.g_map);
    }
    Ok(sq.sqrt())
}

/// Alternating minimization: cyclic exact minimization over the blocks in
/// index order. One record per full sweep; each record keeps the
/// intermediate block steps.
pub fn run_am(h: &dyn BlockObjective, x0: &[f64], cfg: &SolverConfig) -> Result<SolverTrace> {
    cfg.validate()?;
    let p = h.partition();
    check_len(x0, p.total_dim())?;
    let start = Instant::now();
    let stop = StopRule::new(cfg, h.optimum().map(|o| o.value));

    let mut x = x0.to_vec();
    let mut value = composite_value(h, &x)?;
    let grad_norm = mapping_norm(h, &x)?;
    let mut records = vec![IterRecord {
        k: 0,
        x: x.clone(),
        f_value: h.smooth_value(&x),
        composite_value: value,
        grad_norm,
        block_steps: Vec::new(),
        aam: None,
        fgm_v: None,
        wall_time: start.elapsed().as_secs_f64(),
    }];
    let mut status = stop.check(value, grad_norm);

    let mut k = 0;
    while status.is_none() && k < cfg.max_iters {
        let mut steps = Vec::with_capacity(p.n_blocks());
        for i in 0..p.n_blocks() {
            let next = exact_block_min(h, &x, i)?;
            let next_value = composite_value(h, &next)?;
            steps.push(BlockStep {
                block: i,
                before: std::mem::replace(&mut x, next),
                after: Vec::new(),
                value_before: value,
                value_after: next_value,
            });
            steps.last_mut().expect("just pushed").after = x.clone();
            value = next_value;
        }
        k += 1;
        let grad_norm = mapping_norm(h, &x)?;
        records.push(IterRecord {
            k,
            x: x.clone(),
            f_value: h.smooth_value(&x),
            composite_value: value,
            grad_norm,
            block_steps: steps,
            aam: None,
            fgm_v: None,
            wall_time: start.elapsed().as_secs_f64(),
        });
        status = stop.check(value, grad_norm);
    }

    Ok(SolverTrace {
        solver: SolverKind::Am,
        x0: x0.to_vec(),
        mu: 0.0,
        n_blocks: p.n_blocks(),
        records,
        status: status.unwrap_or(StopStatus::MaxIters),
    })
}
