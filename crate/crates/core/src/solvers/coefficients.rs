//! Step coefficient `a_{k+1}` of the accelerated method.

use crate::error::{Error, Result};

/// Largest positive root of `c2·a² − c1·a − c0 = 0` with `c1, c0 ≥ 0`.
fn largest_root(c2: f64, c1: f64, c0: f64) -> Result<f64> {
    if !(c2 > 0.0) {
        // degenerate leading coefficient: −c1·a = c0 has no positive solution
        return Err(Error::NoPositiveRoot);
    }
    let disc = c1 * c1 + 4.0 * c2 * c0;
    let a = (c1 + disc.sqrt()) / (2.0 * c2);
    if a > 0.0 && a.is_finite() {
        Ok(a)
    } else {
        Err(Error::NoPositiveRoot)
    }
}

/// Solve `a²/((A + a)(τ + μa)) = 1/(Ln)` for the largest positive `a`.
///
/// Expanded: `(Ln − μ)a² − (τ + μA)a − Aτ = 0`.
pub fn choose_a_known_l(big_a: f64, tau: f64, mu: f64, l: f64, n: usize) -> Result<f64> {
    if !(big_a >= 0.0) || !(tau >= 1.0) || !(l > 0.0) || n == 0 || !(mu >= 0.0) || mu > l {
        return Err(Error::InvalidInput(format!(
            "known-L rule needs A ≥ 0, τ ≥ 1, L > 0, n ≥ 1, 0 ≤ μ ≤ L (A={big_a}, τ={tau}, μ={mu}, L={l}, n={n})"
        )));
    }
    let ln = l * n as f64;
    largest_root(ln - mu, tau + mu * big_a, big_a * tau)
}

/// Quantities entering the adaptive coefficient equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveInputs {
    /// `f(y^k)`
    pub f_y: f64,
    /// `f(x^{k+1})`
    pub f_next: f64,
    /// `‖∇f(y^k)‖²`
    pub grad_sq: f64,
    /// `‖v^k − y^k‖²`
    pub v_dist_sq: f64,
    /// `A_k`
    pub big_a: f64,
    /// `τ_k`
    pub tau: f64,
    pub mu: f64,
}

/// Largest `a` with
/// `f(y) − a²/(2(A+a)(τ+μa))‖∇f(y)‖² + μτa/(2(A+a)(τ+μa))‖v − y‖² = f(x_next)`.
///
/// With `δ = f(y) − f(x_next)`, clearing denominators gives the quadratic
/// `(G − 2δμ)a² − (μτV + 2δ(τ + μA))a − 2δAτ = 0`.
pub fn choose_a_adaptive(inp: AdaptiveInputs) -> Result<f64> {
    let AdaptiveInputs {
        f_y,
        f_next,
        grad_sq,
        v_dist_sq,
        big_a,
        tau,
        mu,
    } = inp;
    let delta = f_y - f_next;
    if !(grad_sq > 0.0) || !(delta >= 0.0) {
        return Err(Error::NoPositiveRoot);
    }
    let c2 = grad_sq - 2.0 * delta * mu;
    let c1 = mu * tau * v_dist_sq + 2.0 * delta * (tau + mu * big_a);
    let c0 = 2.0 * delta * big_a * tau;
    largest_root(c2, c1, c0)
}

/// Left-hand side of the adaptive equation minus `f(x_next)`.
#[cfg(test)]
pub(crate) fn adaptive_residual(inp: &AdaptiveInputs, a: f64) -> f64 {
    let den = 2.0 * (inp.big_a + a) * (inp.tau + inp.mu * a);
    inp.f_y - a * a / den * inp.grad_sq + inp.mu * inp.tau * a / den * inp.v_dist_sq - inp.f_next
}
