use super::{require, BoundConstants, BoundKind, CertificateReport, ReportBuilder};
use crate::error::{Error, Result};
use crate::linalg::vecops::norm2_sq;
use crate::objective::BlockObjective;
use crate::prox::{prox_map, prox_pl_certificate, stationarity_check, stationarity_tolerance, PROX_PL_TOL};
use crate::solvers::SolverTrace;

/// `Πᵢ (1 − μᵢ/Lᵢ)`
pub fn am_linear_factor(l: &[f64], mu: &[f64]) -> f64 {
    l.iter().zip(mu).map(|(l, m)| 1.0 - m / l).product()
}

/// `Πᵢ (1 − μᵢ/(Lᵢ + μᵢ))`
pub fn nearly_pl_factor(l: &[f64], mu: &[f64]) -> f64 {
    l.iter().zip(mu).map(|(l, m)| 1.0 - m / (l + m)).product()
}

/// `max{gap₀ / 2^{(N−1)/2}, 8·min(L₁, L₂)·R² / (N − 1)}` for `N ≥ 2`.
pub fn am_sublinear_bound(gap0: f64, l: &[f64], radius: f64, n_sweeps: usize) -> f64 {
    let nm1 = (n_sweeps - 1) as f64;
    let lmin = l.iter().copied().fold(f64::INFINITY, f64::min);
    (gap0 / 2f64.powf(nm1 / 2.0)).max(8.0 * lmin * radius * radius / nm1)
}

fn two_block_constants(
    kind: BoundKind,
    trace: &SolverTrace,
    c: &BoundConstants,
    need_mu: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if trace.n_blocks != 2 {
        return Err(Error::BadShape(format!(
            "{} is a two-block bound, trace has {} blocks",
            kind.name(),
            trace.n_blocks
        )));
    }
    let l = require(&c.block_lipschitz, kind, "block_lipschitz")?;
    let mu = if need_mu {
        require(&c.block_mu, kind, "block_mu")?
    } else {
        vec![0.0; 2]
    };
    if l.len() != 2 || mu.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: l.len().min(mu.len()),
        });
    }
    for (li, mi) in l.iter().zip(&mu) {
        if !(*li > 0.0) || *mi < 0.0 || mi > li {
            return Err(Error::InvalidInput(format!("need 0 ≤ μᵢ ≤ Lᵢ, 0 < Lᵢ; got μ = {mi}, L = {li}")));
        }
    }
    Ok((l, mu))
}

/// Whether every block other than `i` is stationary at `x`, measured with
/// step constants `l`.
fn others_stationary(h: &dyn BlockObjective, x: &[f64], i: usize, l: &[f64]) -> Result<bool> {
    let tol = stationarity_tolerance(h, x);
    for j in 0..h.partition().n_blocks() {
        if j != i && stationarity_check(h, x, j, l[j])? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The contraction argument for a sweep starting at `x^k` needs the last
/// block to be optimal there. That holds for every `k ≥ 1`; at `x⁰` it is
/// checked against `h` when available, otherwise the row is skipped.
fn start_ok(h: Option<&dyn BlockObjective>, trace: &SolverTrace, l: &[f64]) -> Result<bool> {
    match h {
        Some(h) => others_stationary(h, &trace.x0, 0, l),
        None => Ok(false),
    }
}

/// `F(x^{k+1}) − F* ≤ (1 − μ₂/L₂)(1 − μ₁/L₁)(F(x^k) − F*)` for every sweep.
pub fn check_am_linear(
    trace: &SolverTrace,
    c: &BoundConstants,
    h: Option<&dyn BlockObjective>,
) -> Result<CertificateReport> {
    let kind = BoundKind::AmLinearPl;
    let (l, mu) = two_block_constants(kind, trace, c, true)?;
    let f_star = require(&c.f_star, kind, "f_star")?;
    let q = am_linear_factor(&l, &mu);
    let first = start_ok(h, trace, &l)?;
    let gaps = trace.gaps(f_star);
    let mut rb = ReportBuilder::new(kind);
    for k in 1..gaps.len() {
        if k == 1 && !first {
            rb.skip(k, "sweep");
            continue;
        }
        rb.upper(k, "sweep", q * gaps[k - 1], gaps[k], f_star);
    }
    Ok(rb.finish())
}

/// Per-sweep factor `(1 − μ₂/(L₂+μ₂))(1 − μ₁/(L₁+μ₁))`, plus for every block
/// step with a recorded sub-trace `μᵢ(F(after) − F*) ≤ Lᵢ(F(before) − F(after))`.
pub fn check_nearly_pl(
    trace: &SolverTrace,
    c: &BoundConstants,
    h: Option<&dyn BlockObjective>,
) -> Result<CertificateReport> {
    let kind = BoundKind::NearlyPlCombined;
    let (l, mu) = two_block_constants(kind, trace, c, true)?;
    let f_star = require(&c.f_star, kind, "f_star")?;
    let q = nearly_pl_factor(&l, &mu);
    let first = start_ok(h, trace, &l)?;
    let gaps = trace.gaps(f_star);
    let mut rb = ReportBuilder::new(kind);
    for k in 1..gaps.len() {
        for step in &trace.records[k].block_steps {
            let label = format!("block {}", step.block);
            if k == 1 && step.block == 0 && !first {
                rb.skip(k, &label);
                continue;
            }
            let i = step.block;
            rb.upper(
                k,
                &label,
                l[i] / mu[i] * (step.value_before - step.value_after),
                step.value_after - f_star,
                f_star,
            );
        }
        if k == 1 && !first {
            rb.skip(k, "sweep");
            continue;
        }
        rb.upper(k, "sweep", q * gaps[k - 1], gaps[k], f_star);
    }
    Ok(rb.finish())
}

/// `F(x^N) − F* ≤ max{(F(x⁰) − F*)/2^{(N−1)/2}, 8·min(L₁,L₂)·R²/(N−1)}` for
/// `N ≥ 2`, with `R` the radius of the initial level set.
pub fn check_am_sublinear(trace: &SolverTrace, c: &BoundConstants) -> Result<CertificateReport> {
    let kind = BoundKind::AmSublinear;
    let (l, _) = two_block_constants(kind, trace, c, false)?;
    let f_star = require(&c.f_star, kind, "f_star")?;
    let radius = require(&c.level_radius, kind, "level_radius")?;
    let gaps = trace.gaps(f_star);
    let mut rb = ReportBuilder::new(kind);
    for n in 2..gaps.len() {
        rb.upper(n, "sweep", am_sublinear_bound(gaps[0], &l, radius, n), gaps[n], f_star);
    }
    Ok(rb.finish())
}

/// `‖G^i_{Lᵢ}(before)‖² ≤ 2Lᵢ(F(before) − F(after))` for every block step.
pub fn check_sufficient_decrease(
    h: &dyn BlockObjective,
    trace: &SolverTrace,
    c: &BoundConstants,
) -> Result<CertificateReport> {
    let kind = BoundKind::SufficientDecrease;
    let l = require(&c.block_lipschitz, kind, "block_lipschitz")?;
    let mut rb = ReportBuilder::new(kind);
    for rec in &trace.records {
        for step in &rec.block_steps {
            let i = step.block;
            let g = prox_map(h, &step.before, i, l[i])?.g_map;
            rb.upper(
                rec.k,
                &format!("block {i}"),
                2.0 * l[i] * (step.value_before - step.value_after),
                norm2_sq(&g),
                2.0 * l[i] * step.value_before,
            );
        }
    }
    Ok(rb.finish())
}

/// Proximal-PL inequality `F* ≥ F(x) − D_i(x, μᵢ)/(2μᵢ)` at every point of an
/// AM trace (`x⁰` and each block step), for every block whose complement is
/// stationary at that point. Other (block, point) pairs are skipped.
pub fn check_prox_pl_trace(
    h: &dyn BlockObjective,
    trace: &SolverTrace,
    c: &BoundConstants,
) -> Result<CertificateReport> {
    let kind = BoundKind::ProxPl;
    let mu = require(&c.block_mu, kind, "block_mu")?;
    let l = c
        .block_lipschitz
        .clone()
        .unwrap_or_else(|| vec![h.constants().lipschitz.unwrap_or(1.0); trace.n_blocks]);
    let mut points: Vec<(usize, &[f64])> = vec![(0, &trace.x0)];
    for rec in trace.records.iter().skip(1) {
        for step in &rec.block_steps {
            points.push((rec.k, &step.after));
        }
    }
    let mut rb = ReportBuilder::with_tolerance(kind, PROX_PL_TOL);
    for (k, x) in points {
        for i in 0..trace.n_blocks {
            let label = format!("block {i}");
            if !others_stationary(h, x, i, &l)? {
                rb.skip(k, &label);
                continue;
            }
            let cert = prox_pl_certificate(h, x, i, mu[i])?;
            rb.upper(k, &label, cert.lhs, cert.rhs, cert.lhs);
        }
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_arithmetic() {
        assert!((am_linear_factor(&[2.0, 2.0], &[1.0, 1.0]) - 0.25).abs() < 1e-15);
        assert!((nearly_pl_factor(&[1.0, 1.0], &[1.0, 1.0]) - 0.25).abs() < 1e-15);
        assert_eq!(am_linear_factor(&[3.0, 5.0], &[3.0, 5.0]), 0.0);
    }

    #[test]
    fn nearly_pl_factor_is_weaker() {
        for (l, m) in [(1.0, 0.1), (10.0, 0.01), (2.0, 2.0), (5.0, 1.0)] {
            assert!(nearly_pl_factor(&[l, l], &[m, m]) > am_linear_factor(&[l, l], &[m, m]));
        }
    }

    #[test]
    fn sublinear_formula_at_three() {
        // N = 3: max{gap₀/2, 8·min L·R²/2}
        let b = am_sublinear_bound(10.0, &[1.0, 2.0], 0.1, 3);
        assert!((b - 5.0).abs() < 1e-15);
        let b = am_sublinear_bound(0.01, &[1.0, 2.0], 1.0, 3);
        assert!((b - 4.0).abs() < 1e-15);
    }
}
