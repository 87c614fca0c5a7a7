//! Small dense problems `min ½zᵀQz − qᵀz + Σⱼ rⱼ(zⱼ)` with separable
//! `rⱼ ∈ {0, γ|·|, box indicator}`.
//!
//! Accelerated proximal gradient identifies the active set; an equality
//! constrained Newton solve on the free coordinates then polishes the answer
//! to machine precision once it passes the KKT check.

use crate::error::{Error, Result};
use crate::linalg::vecops::{norm2, norm_inf};
use crate::linalg::{cholesky, spectral_extremes, Matrix};
#[cfg(test)]
use crate::objective::ProxTerm;
use crate::objective::Regularizer;

const MAX_ITERS: usize = 200_000;
const POLISH_EVERY: usize = 20;
const KKT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Fixed {
    Free,
    At(f64),
}

#[cfg(test)]
pub(crate) fn objective(q_mat: &Matrix, q: &[f64], regs: &[Regularizer], z: &[f64]) -> f64 {
    let qz = q_mat.matvec(z).expect("square");
    let mut v = 0.0;
    for j in 0..z.len() {
        v += 0.5 * z[j] * qz[j] - q[j] * z[j];
        v += regs[j].value(&z[j..j + 1]);
    }
    v
}

/// Gradient-mapping norm with step `1/lip`.
pub(crate) fn mapping_norm(q_mat: &Matrix, q: &[f64], regs: &[Regularizer], z: &[f64], lip: f64) -> f64 {
    let qz = q_mat.matvec(z).expect("square");
    let g: Vec<f64> = z
        .iter()
        .enumerate()
        .map(|(j, &zj)| {
            let t = regs[j]
                .scalar_prox(zj - (qz[j] - q[j]) / lip, 1.0 / lip)
                .expect("separable");
            lip * (zj - t)
        })
        .collect();
    norm2(&g)
}

fn classify(reg: &Regularizer, zj: f64) -> Fixed {
    match reg {
        Regularizer::L1 { weight } if *weight > 0.0 && zj == 0.0 => Fixed::At(0.0),
        Regularizer::Box { lo, hi } if zj <= *lo => Fixed::At(*lo),
        Regularizer::Box { lo, hi } if zj >= *hi => Fixed::At(*hi),
        _ => Fixed::Free,
    }
}

/// Solve on the free set implied by `z` and accept if the KKT conditions hold.
fn polish(q_mat: &Matrix, q: &[f64], regs: &[Regularizer], z: &[f64]) -> Option<Vec<f64>> {
    let n = z.len();
    let status: Vec<Fixed> = (0..n).map(|j| classify(&regs[j], z[j])).collect();
    let free: Vec<usize> = (0..n).filter(|&j| status[j] == Fixed::Free).collect();
    let mut out: Vec<f64> = (0..n)
        .map(|j| match status[j] {
            Fixed::At(v) => v,
            Fixed::Free => 0.0,
        })
        .collect();
    let scale = 1.0 + norm_inf(q);
    if !free.is_empty() {
        let mut rhs = Vec::with_capacity(free.len());
        for &j in &free {
            let mut r = q[j];
            for c in 0..n {
                if let Fixed::At(v) = status[c] {
                    r -= q_mat[(j, c)] * v;
                }
            }
            if let Regularizer::L1 { weight } = regs[j] {
                r -= weight * z[j].signum();
            }
            rhs.push(r);
        }
        let sub = q_mat.select(&free, &free);
        let sol = cholesky(&sub).ok()?.solve(&rhs).ok()?;
        for (&j, v) in free.iter().zip(sol) {
            // free coordinates must stay strictly inside their region
            match regs[j] {
                Regularizer::L1 { weight } if weight > 0.0 && v * z[j].signum() <= 0.0 => return None,
                Regularizer::Box { lo, hi } if v < lo || v > hi => return None,
                _ => {}
            }
            out[j] = v;
        }
    }
    let grad: Vec<f64> = q_mat
        .matvec(&out)
        .expect("square")
        .iter()
        .zip(q)
        .map(|(a, b)| a - b)
        .collect();
    for j in 0..n {
        let ok = match (status[j], &regs[j]) {
            (Fixed::Free, _) => true,
            (Fixed::At(_), Regularizer::L1 { weight }) => grad[j].abs() <= weight + KKT_TOL * scale,
            (Fixed::At(v), Regularizer::Box { lo, .. }) if v == *lo => grad[j] >= -KKT_TOL * scale,
            (Fixed::At(_), Regularizer::Box { .. }) => grad[j] <= KKT_TOL * scale,
            _ => false,
        };
        if !ok {
            return None;
        }
    }
    Some(out)
}

/// Minimize `½zᵀQz − qᵀz + Σⱼ rⱼ(zⱼ)` for symmetric positive definite `Q`.
pub fn solve_separable_qp(q_mat: &Matrix, q: &[f64], regs: &[Regularizer], warm: &[f64]) -> Result<Vec<f64>> {
    let n = q.len();
    if q_mat.rows() != n || q_mat.cols() != n || regs.len() != n || warm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: q_mat.rows().min(regs.len()).min(warm.len()),
        });
    }
    if regs.iter().any(|r| matches!(r, Regularizer::Custom(_))) {
        return Err(Error::InvalidInput("separable QP accepts built-in terms only".into()));
    }
    if regs.iter().all(|r| r.is_zero()) {
        return cholesky(q_mat)?.solve(q);
    }
    let (mu, lip) = spectral_extremes(q_mat)?;
    let prox = |v: &[f64]| -> Vec<f64> {
        let qv = q_mat.matvec(v).expect("square");
        (0..n)
            .map(|j| {
                regs[j]
                    .scalar_prox(v[j] - (qv[j] - q[j]) / lip, 1.0 / lip)
                    .expect("separable")
            })
            .collect()
    };
    let mut z: Vec<f64> = (0..n)
        .map(|j| regs[j].scalar_prox(warm[j], 0.0).expect("separable"))
        .collect();
    let mut y = z.clone();
    let theta = {
        let r = (mu / lip).max(0.0).sqrt();
        (1.0 - r) / (1.0 + r)
    };
    let tol = KKT_TOL * (1.0 + norm_inf(q));
    let mut best = z.clone();
    for it in 1..=MAX_ITERS {
        let z_next = prox(&y);
        y = z_next
            .iter()
            .zip(&z)
            .map(|(a, b)| a + theta * (a - b))
            .collect();
        z = z_next;
        if it % POLISH_EVERY == 0 {
            if let Some(p) = polish(q_mat, q, regs, &z) {
                return Ok(p);
            }
            if mapping_norm(q_mat, q, regs, &z, lip) <= tol {
                best = z.clone();
                break;
            }
        }
        best.clone_from(&z);
    }
    Ok(polish(q_mat, q, regs, &best).unwrap_or(best))
}

/// Cyclic coordinate descent on the same problem. Slow but independent of
/// the solver above; used to cross-check reference optima.
pub fn coordinate_descent(
    q_mat: &Matrix,
    q: &[f64],
    regs: &[Regularizer],
    warm: &[f64],
    max_sweeps: usize,
) -> Vec<f64> {
    let n = q.len();
    let mut z = warm.to_vec();
    let mut qz = q_mat.matvec(&z).expect("square");
    for _ in 0..max_sweeps {
        let mut change: f64 = 0.0;
        for j in 0..n {
            let d = q_mat[(j, j)];
            // minimize ½ d t² − (q_j − Σ_{c≠j} Q_jc z_c) t + r_j(t)
            let lin = q[j] - (qz[j] - d * z[j]);
            let t = regs[j].scalar_prox(lin / d, 1.0 / d).expect("separable");
            let delta = t - z[j];
            if delta != 0.0 {
                for r in 0..n {
                    qz[r] += q_mat[(r, j)] * delta;
                }
                z[j] = t;
            }
            change = change.max(delta.abs());
        }
        if change <= 1e-16 * (1.0 + norm_inf(&z)) {
            break;
        }
    }
    z
}
