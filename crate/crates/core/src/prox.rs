//! Block prox-gradient quantities.
//!
//! For a block `i` and a step constant `M > 0`:
//!
//! * `T_M^i(x) = prox_{gᵢ/M}(xᵢ − ∇ᵢf(x)/M)`
//! * `G_M^i(x) = M (xᵢ − T_M^i(x))`
//! * `D_i(x, M) = −2M · min_u [⟨∇ᵢf(x), u − xᵢ⟩ + M/2 ‖u − xᵢ‖² + gᵢ(u) − gᵢ(xᵢ)]`
//!
//! `D_i` is evaluated by plugging the prox point into the model, so it is
//! exact up to rounding. In the smooth unconstrained case it equals
//! `‖∇ᵢf(x)‖²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::vecops::{check_len, dot, norm2, norm2_sq, sub};
use crate::objective::{composite_value, BlockObjective, ProxTerm};

/// Slack required by the proximal-PL certificate, scaled by `1 + |F*|`.
pub const PROX_PL_TOL: f64 = 1e-8;
/// Slack allowed in `D_i(x, λ₂) ≥ D_i(x, λ₁)`.
pub const D_MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxMapResult {
    pub block: usize,
    pub step_constant: f64,
    /// `T_M^i(x)`
    pub t_point: Vec<f64>,
    /// `G_M^i(x)`
    pub g_map: Vec<f64>,
    /// `D_i(x, M)`
    pub d_value: f64,
}

/// Value of the block prox model at `u`:
/// `⟨∇ᵢf, u − xᵢ⟩ + M/2 ‖u − xᵢ‖² + gᵢ(u) − gᵢ(xᵢ)`.
pub fn prox_model(
    h: &dyn BlockObjective,
    x_block: &[f64],
    grad_block: &[f64],
    i: usize,
    m: f64,
    u: &[f64],
) -> f64 {
    let d = sub(u, x_block);
    let g = h.regularizer(i);
    let dg = if g.is_zero() {
        0.0
    } else {
        g.value(u) - g.value(x_block)
    };
    dot(grad_block, &d) + 0.5 * m * norm2_sq(&d) + dg
}

/// `T_M^i(x)`, `G_M^i(x)` and `D_i(x, M)`.
pub fn prox_map(h: &dyn BlockObjective, x: &[f64], i: usize, m: f64) -> Result<ProxMapResult> {
    let p = h.partition();
    check_len(x, p.total_dim())?;
    p.check_block(i)?;
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidInput(format!("step constant must be positive, got {m}")));
    }
    let xi = p.gather(x, i);
    let gi = h.block_gradient(x, i);
    let reg = h.regularizer(i);
    let shifted: Vec<f64> = xi.iter().zip(&gi).map(|(a, g)| a - g / m).collect();
    let t_point = if reg.is_zero() {
        shifted
    } else {
        reg.prox(&shifted, 1.0 / m)
    };
    let g_map: Vec<f64> = xi.iter().zip(&t_point).map(|(a, t)| m * (a - t)).collect();
    let model_min = prox_model(h, &xi, &gi, i, m, &t_point);
    Ok(ProxMapResult {
        block: i,
        step_constant: m,
        t_point,
        g_map,
        d_value: -2.0 * m * model_min,
    })
}

/// `‖G_M^j(x)‖₂`; zero when block `j` is already optimal given the others.
pub fn stationarity_check(h: &dyn BlockObjective, x: &[f64], j: usize, m: f64) -> Result<f64> {
    Ok(norm2(&prox_map(h, x, j, m)?.g_map))
}

/// Contract for [`stationarity_check`] right after an exact block minimization.
pub fn stationarity_tolerance(h: &dyn BlockObjective, x: &[f64]) -> f64 {
    1e-7 * (1.0 + norm2(&h.gradient(x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlCertificate {
    /// `F*`
    pub lhs: f64,
    /// `F(x) − D_i(x, μᵢ) / (2μᵢ)`
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

/// Proximal-PL inequality `F* ≥ F(x) − D_i(x, μᵢ)/(2μᵢ)` at `x`.
pub fn prox_pl_certificate(
    h: &dyn BlockObjective,
    x: &[f64],
    i: usize,
    mu_i: f64,
) -> Result<PlCertificate> {
    let opt = h.optimum().ok_or(Error::NoOptimum)?;
    if !(mu_i > 0.0) {
        return Err(Error::InvalidInput(format!("μᵢ must be positive, got {mu_i}")));
    }
    let pm = prox_map(h, x, i, mu_i)?;
    let lhs = opt.value;
    let rhs = composite_value(h, x)? - pm.d_value / (2.0 * mu_i);
    let slack = lhs - rhs;
    Ok(PlCertificate {
        lhs,
        rhs,
        slack,
        passed: slack >= -PROX_PL_TOL * (1.0 + lhs.abs()),
    })
}

/// `D_i(x, λ₂) ≥ D_i(x, λ₁) − 1e-9` for `0 < λ₁ < λ₂` on an unconstrained block.
pub fn d_monotonicity_check(
    h: &dyn BlockObjective,
    x: &[f64],
    i: usize,
    lambda1: f64,
    lambda2: f64,
) -> Result<bool> {
    h.partition().check_block(i)?;
    if !(lambda1 > 0.0 && lambda1 < lambda2) {
        return Err(Error::InvalidInput(format!(
            "need 0 < λ₁ < λ₂, got λ₁ = {lambda1}, λ₂ = {lambda2}"
        )));
    }
    if !h.regularizer(i).is_unconstrained() {
        return Err(Error::ConstrainedBlock { block: i });
    }
    let d1 = prox_map(h, x, i, lambda1)?.d_value;
    let d2 = prox_map(h, x, i, lambda2)?.d_value;
    Ok(d2 >= d1 - D_MONOTONE_TOL)
}
