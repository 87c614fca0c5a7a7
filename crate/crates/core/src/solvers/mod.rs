//! Alternating minimization (AM), accelerated alternating minimization (AAM)
//! and the fast gradient method (FGM), each producing a full trace.

mod aam;
mod am;
mod coefficients;
mod fgm;
mod line_search;

pub use aam::{greedy_block, run_aam};
pub use am::run_am;
pub use coefficients::{choose_a_adaptive, choose_a_known_l, AdaptiveInputs};
pub use fgm::run_fgm;
pub use line_search::{exact_line_search, LineSearchResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which equation picks `a_{k+1}` in AAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientRule {
    /// Known-`L` rule when `l_known` is set, adaptive rule otherwise.
    #[default]
    Auto,
    /// `a²/((A + a)(τ + μa)) = 1/(Ln)`
    KnownL,
    /// Largest `a` matching the observed decrease of the block step.
    Adaptive,
}

/// Momentum update used by AAM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentumRule {
    /// `v ← (τ_k v + μ a y − a ∇f(y)) / τ_{k+1}`, the minimizer of the
    /// estimating function.
    #[default]
    Proof,
    /// `v ← v − a ∇f(y)`, ignoring the strong convexity terms.
    Literal,
}

/// Extrapolation used by FGM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FgmMomentum {
    /// `v_{k+1} = z_k + k/(k+3) (z_{k+1} − z_k)`
    #[default]
    Listed,
    /// `v_{k+1} = z_{k+1} + k/(k+3) (z_{k+1} − z_k)`
    Nesterov,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once `F − F*` drops to this value (needs a known optimum).
    pub target_gap: Option<f64>,
    /// Stop once the gradient (or gradient-mapping) norm drops to this value.
    pub grad_tolerance: f64,
    /// Strong convexity passed to AAM; zero runs the `μ`-free variant.
    pub mu_assumed: f64,
    /// Lipschitz constant passed to AAM's known-`L` rule and FGM.
    pub l_known: Option<f64>,
    /// Final interval width of the golden-section line search.
    pub line_search_tol: f64,
    /// Solvers are deterministic; the seed only labels the run.
    pub rng_seed: u64,
    pub coefficient_rule: CoefficientRule,
    pub momentum_rule: MomentumRule,
    pub fgm_momentum: FgmMomentum,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 200,
            target_gap: None,
            grad_tolerance: 1e-14,
            mu_assumed: 0.0,
            l_known: None,
            line_search_tol: 1e-10,
            rng_seed: 0,
            coefficient_rule: CoefficientRule::Auto,
            momentum_rule: MomentumRule::Proof,
            fgm_momentum: FgmMomentum::Listed,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        if !(self.grad_tolerance > 0.0) || !(self.line_search_tol > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if matches!(self.target_gap, Some(t) if !(t > 0.0)) {
            return Err(Error::InvalidInput("target_gap must be positive".into()));
        }
        if !(self.mu_assumed >= 0.0) || !self.mu_assumed.is_finite() {
            return Err(Error::InvalidInput("mu_assumed must be a finite value ≥ 0".into()));
        }
        if matches!(self.l_known, Some(l) if !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidInput("l_known must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Am,
    Aam,
    Fgm,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Am => "am",
            SolverKind::Aam => "aam",
            SolverKind::Fgm => "fgm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopStatus {
    MaxIters,
    TargetGap,
    GradTolerance,
    /// AAM's adaptive coefficient equation has no positive root: the block
    /// step made no progress.
    NoProgress,
}

/// One block minimization inside an AM sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockStep {
    pub block: usize,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    pub value_before: f64,
    pub value_after: f64,
}

/// State of the accelerated method attached to iterate `k`.
///
/// `step` describes the iteration that produced `x^k` from `x^{k−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AamState {
    /// `A_k`
    pub big_a: f64,
    /// `τ_k`
    pub tau: f64,
    /// `v^k`
    pub v: Vec<f64>,
    /// `min ψ_k`, maintained by the incremental update.
    pub psi_min: f64,
    pub step: Option<AamStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AamStep {
    /// `β_{k−1}`
    pub beta: f64,
    /// `y^{k−1}`
    pub y: Vec<f64>,
    /// `f(y^{k−1})`
    pub f_y: f64,
    /// `∇f(y^{k−1})`
    pub grad_y: Vec<f64>,
    /// `a_k`
    pub a: f64,
    pub block: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterRecord {
    pub k: usize,
    pub x: Vec<f64>,
    /// `f(x^k)`
    pub f_value: f64,
    /// `F(x^k)`
    pub composite_value: f64,
    pub grad_norm: f64,
    /// Sub-steps of the AM sweep that produced this iterate.
    pub block_steps: Vec<BlockStep>,
    pub aam: Option<AamState>,
    /// FGM extrapolation point `v^k`.
    pub fgm_v: Option<Vec<f64>>,
    pub wall_time: f64,
}

impl IterRecord {
    /// The block chosen at the step that produced this record, if any.
    pub fn chosen_block(&self) -> Option<usize> {
        self.aam.as_ref().and_then(|s| s.step.as_ref()).map(|s| s.block)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub solver: SolverKind,
    pub x0: Vec<f64>,
    /// `μ` used by AAM.
    pub mu: f64,
    pub n_blocks: usize,
    pub records: Vec<IterRecord>,
    pub status: StopStatus,
}

impl SolverTrace {
    pub fn last(&self) -> &IterRecord {
        self.records.last().expect("traces hold at least x⁰")
    }

    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }

    /// `F(x^k) − F*` per record.
    pub fn gaps(&self, f_star: f64) -> Vec<f64> {
        self.records.iter().map(|r| r.composite_value - f_star).collect()
    }
}

/// Bookkeeping shared by the solver loops.
pub(crate) struct StopRule<'a> {
    cfg: &'a SolverConfig,
    f_star: Option<f64>,
}

impl<'a> StopRule<'a> {
    pub(crate) fn new(cfg: &'a SolverConfig, f_star: Option<f64>) -> Self {
        Self { cfg, f_star }
    }

    pub(crate) fn check(&self, value: f64, grad_norm: f64) -> Option<StopStatus> {
        if let (Some(t), Some(fs)) = (self.cfg.target_gap, self.f_star) {
            if value - fs <= t {
                return Some(StopStatus::TargetGap);
            }
        }
        if grad_norm <= self.cfg.grad_tolerance {
            return Some(StopStatus::GradTolerance);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            max_iters: 0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            grad_tolerance: 0.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            l_known: Some(-1.0),
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
