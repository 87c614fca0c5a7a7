use super::{require, BoundConstants, BoundKind, CertificateReport, ReportBuilder, RECURRENCE_TOL};
use crate::error::{Error, Result};
use crate::linalg::vecops::{dot, norm2_sq, sub};
use crate::solvers::{AamState, SolverTrace};

/// `nLR² · min{4/k², (1 − √(μ/(nL)))^{k−1}}`
pub fn aam_main_bound(k: usize, n: usize, l: f64, radius: f64, mu: f64) -> f64 {
    let nl = n as f64 * l;
    let k_f = k as f64;
    let geometric = (1.0 - (mu / nl).sqrt()).powf(k_f - 1.0);
    nl * radius * radius * (4.0 / (k_f * k_f)).min(geometric)
}

fn states(trace: &SolverTrace) -> Result<Vec<&AamState>> {
    trace
        .records
        .iter()
        .map(|r| {
            r.aam
                .as_ref()
                .ok_or_else(|| Error::InvalidInput(format!("record {} has no accelerated state", r.k)))
        })
        .collect()
}

fn smooth_gaps(trace: &SolverTrace, f_star: f64) -> Vec<f64> {
    trace.records.iter().map(|r| r.f_value - f_star).collect()
}

fn check_mu(mu: f64, nl: f64) -> Result<()> {
    if !(mu >= 0.0) || mu >= nl {
        return Err(Error::InvalidInput(format!("need 0 ≤ μ < nL, got μ = {mu}, nL = {nl}")));
    }
    Ok(())
}

/// `f(x^k) − f* ≤ nLR² · min{4/k², (1 − √(μ/(nL)))^{k−1}}` for `k ≥ 1`, with
/// `μ` the value the method ran with.
pub fn check_aam_main(trace: &SolverTrace, c: &BoundConstants) -> Result<CertificateReport> {
    let kind = BoundKind::AamMain;
    let l = require(&c.lipschitz, kind, "lipschitz")?;
    let radius = require(&c.radius, kind, "radius")?;
    let f_star = require(&c.f_star, kind, "f_star")?;
    let n = trace.n_blocks;
    check_mu(trace.mu, n as f64 * l)?;
    let gaps = smooth_gaps(trace, f_star);
    let mut rb = ReportBuilder::new(kind);
    for (k, gap) in gaps.iter().enumerate().skip(1) {
        rb.upper(k, "gap", aam_main_bound(k, n, l, radius, trace.mu), *gap, f_star);
    }
    Ok(rb.finish())
}

/// `A_k ≥ k²/(4Ln)`, `A₁ ≥ 1/(nL)` and, when `μ > 0`,
/// `A_k ≥ (1/(nL))·(1 − √(μ/(nL)))^{−k+1}`.
pub fn check_aam_ak(trace: &SolverTrace, c: &BoundConstants) -> Result<CertificateReport> {
    let kind = BoundKind::AamAkGrowth;
    let l = require(&c.lipschitz, kind, "lipschitz")?;
    let nl = trace.n_blocks as f64 * l;
    check_mu(trace.mu, nl)?;
    let states = states(trace)?;
    let q = 1.0 - (trace.mu / nl).sqrt();
    let mut rb = ReportBuilder::new(kind);
    for (k, st) in states.iter().enumerate().skip(1) {
        let a_k = st.big_a;
        let k_f = k as f64;
        rb.lower(k, "quadratic", k_f * k_f / (4.0 * nl), a_k, a_k);
        if k == 1 {
            rb.lower(k, "first", 1.0 / nl, a_k, a_k);
        }
        if trace.mu > 0.0 {
            rb.lower(k, "geometric", q.powf(1.0 - k_f) / nl, a_k, a_k);
        }
    }
    Ok(rb.finish())
}

/// With the true PL constant `μ` of `f`:
/// `f(x^k) − f* ≤ Π_{j=1}^{k−1}(1 − μ a_j²/A_j) · (f(x⁰) − f*)`.
pub fn check_aam_adaptive(trace: &SolverTrace, c: &BoundConstants) -> Result<CertificateReport> {
    let kind = BoundKind::AamAdaptive;
    let mu = require(&c.mu, kind, "mu")?;
    let f_star = require(&c.f_star, kind, "f_star")?;
    let states = states(trace)?;
    let gaps = smooth_gaps(trace, f_star);
    let mut rb = ReportBuilder::new(kind);
    let mut product = 1.0;
    for k in 1..gaps.len() {
        if k >= 2 {
            let st = states[k - 1];
            let a = st
                .step
                .as_ref()
                .ok_or_else(|| Error::InvalidInput(format!("record {} has no step", k - 1)))?
                .a;
            product *= 1.0 - mu * a * a / st.big_a;
        }
        rb.upper(k, "gap", product * gaps[0], gaps[k], f_star);
    }
    Ok(rb.finish())
}

/// `f(x^k) − f* ≤ R²/(2A_k)` for `k ≥ 1`.
pub fn check_gap_over_a(trace: &SolverTrace, c: &BoundConstants) -> Result<CertificateReport> {
    let kind = BoundKind::NonaccMaxBound;
    let radius = require(&c.radius, kind, "radius")?;
    let f_star = require(&c.f_star, kind, "f_star")?;
    let states = states(trace)?;
    let gaps = smooth_gaps(trace, f_star);
    let mut rb = ReportBuilder::new(kind);
    for k in 1..gaps.len() {
        rb.upper(k, "gap", radius * radius / (2.0 * states[k].big_a), gaps[k], f_star);
    }
    Ok(rb.finish())
}

/// `A_k f(x^k) ≤ ψ_k(v^k)` with
/// `ψ_k(z) = ½‖z − x⁰‖² + Σ_{i<k} a_{i+1}(f(yⁱ) + ⟨∇f(yⁱ), z − yⁱ⟩ + μ/2‖z − yⁱ‖²)`
/// evaluated term by term from the recorded `yⁱ`, `∇f(yⁱ)` and `a_{i+1}`.
pub fn check_aam_recurrence(trace: &SolverTrace) -> Result<CertificateReport> {
    let kind = BoundKind::AamRecurrence;
    let states = states(trace)?;
    let steps: Vec<_> = states.iter().skip(1).filter_map(|s| s.step.as_ref()).collect();
    if steps.len() + 1 != states.len() || steps.iter().any(|s| s.y.is_empty()) {
        return Ok(CertificateReport::skipped(kind, "trace does not carry the extrapolation points"));
    }
    let mu = trace.mu;
    let mut rb = ReportBuilder::with_tolerance(kind, RECURRENCE_TOL);
    for k in 1..states.len() {
        let z = &states[k].v;
        let mut psi = 0.5 * norm2_sq(&sub(z, &trace.x0));
        for s in &steps[..k] {
            let d = sub(z, &s.y);
            psi += s.a * (s.f_y + dot(&s.grad_y, &d) + 0.5 * mu * norm2_sq(&d));
        }
        let lhs = states[k].big_a * trace.records[k].f_value;
        rb.upper(k, "psi", psi, lhs, lhs.abs().max(psi.abs()));
    }
    Ok(rb.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_bound_at_first_step_without_mu() {
        // k = 1, μ = 0: nLR²·min{4, 1} = nLR²
        assert_eq!(aam_main_bound(1, 2, 3.0, 0.5, 0.0), 2.0 * 3.0 * 0.25);
        // k = 4, μ = 0: min{1/4, 1}
        assert_eq!(aam_main_bound(4, 1, 1.0, 1.0, 0.0), 0.25);
    }

    #[test]
    fn geometric_branch_with_mu() {
        let b = aam_main_bound(3, 1, 4.0, 1.0, 1.0);
        // nL = 4, q = 1 − ½, q² = ¼, 4/9 > ¼
        assert!((b - 1.0).abs() < 1e-15);
    }
}
