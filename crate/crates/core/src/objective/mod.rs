//! Block-structured objectives `F(x) = f(x) + Σᵢ gᵢ(xᵢ)`.
//!
//! An objective exposes the smooth value, block gradients, an optional exact
//! block minimizer, the per-block terms `gᵢ` (with prox), its declared
//! constants and, for test problems, the optimum.

mod closure;
mod partition;
mod regularizer;

pub use closure::FnObjective;
pub use partition::BlockPartition;
pub use regularizer::{soft_threshold, ProxTerm, Regularizer};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::vecops::check_len;

static ZERO_TERM: Regularizer = Regularizer::Zero;

/// Declared smoothness and curvature constants. `None` means unknown.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Lipschitz constant of `∇f`.
    pub lipschitz: Option<f64>,
    /// Per-block Lipschitz constants: `f` restricted to block `i` with the
    /// others fixed has an `Lᵢ`-Lipschitz gradient.
    pub block_lipschitz: Option<Vec<f64>>,
    /// Strong convexity modulus of `f`.
    pub strong_convexity: Option<f64>,
    /// Per-block moduli satisfying the joint inequality
    /// `f(y) ≥ f(x) + ⟨∇f(x), y − x⟩ + Σᵢ μᵢ/2 ‖yᵢ − xᵢ‖²`.
    pub block_strong_convexity: Option<Vec<f64>>,
    /// Polyak-Łojasiewicz constant: `½‖∇f‖² ≥ μ (f − f*)`.
    pub pl: Option<f64>,
}

impl Constants {
    /// Strong convexity if declared, otherwise the PL constant.
    pub fn pl_or_strong(&self) -> Option<f64> {
        self.strong_convexity.or(self.pl)
    }
}

/// Known minimizer and optimal composite value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub point: Vec<f64>,
    pub value: f64,
}

pub trait BlockObjective: Send + Sync {
    fn partition(&self) -> &BlockPartition;

    fn smooth_value(&self, x: &[f64]) -> f64;

    /// `∇ᵢ f(x)`, in the order of `partition().block(i)`.
    fn block_gradient(&self, x: &[f64], block: usize) -> Vec<f64>;

    /// `∇f(x)` assembled from the block gradients.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let p = self.partition();
        let mut g = vec![0.0; p.total_dim()];
        for i in 0..p.n_blocks() {
            p.scatter(&mut g, i, &self.block_gradient(x, i));
        }
        g
    }

    /// New values for block `i` minimizing `F` with the other blocks fixed.
    fn block_argmin(&self, _x: &[f64], _block: usize) -> Option<Vec<f64>> {
        None
    }

    fn regularizer(&self, _block: usize) -> &Regularizer {
        &ZERO_TERM
    }

    fn constants(&self) -> &Constants;

    fn optimum(&self) -> Option<&Optimum> {
        None
    }

    /// `dᵀ ∇²f d` when `f` is quadratic (curvature is constant along lines).
    fn quadratic_curvature(&self, _d: &[f64]) -> Option<f64> {
        None
    }
}

/// `∇f(x)`, checking the dimension.
pub fn full_gradient(h: &dyn BlockObjective, x: &[f64]) -> Result<Vec<f64>> {
    check_len(x, h.partition().total_dim())?;
    Ok(h.gradient(x))
}

/// `Σᵢ gᵢ(xᵢ)`
pub fn nonsmooth_value(h: &dyn BlockObjective, x: &[f64]) -> f64 {
    let p = h.partition();
    (0..p.n_blocks())
        .map(|i| {
            let g = h.regularizer(i);
            if g.is_zero() {
                0.0
            } else {
                g.value(&p.gather(x, i))
            }
        })
        .sum()
}

/// `F(x) = f(x) + Σᵢ gᵢ(xᵢ)`
pub fn composite_value(h: &dyn BlockObjective, x: &[f64]) -> Result<f64> {
    check_len(x, h.partition().total_dim())?;
    Ok(h.smooth_value(x) + nonsmooth_value(h, x))
}

/// Minimize `F` over block `i` with the other blocks fixed; returns the full point.
pub fn exact_block_min(h: &dyn BlockObjective, x: &[f64], i: usize) -> Result<Vec<f64>> {
    let p = h.partition();
    check_len(x, p.total_dim())?;
    p.check_block(i)?;
    let values = h
        .block_argmin(x, i)
        .ok_or(Error::NoBlockSolver { block: i })?;
    check_len(&values, p.block_len(i))?;
    Ok(p.with_block(x, i, &values))
}

/// Error unless every `gᵢ` is identically zero.
pub fn require_smooth(h: &dyn BlockObjective) -> Result<()> {
    match (0..h.partition().n_blocks()).find(|&i| !h.regularizer(i).is_zero()) {
        Some(block) => Err(Error::NonSmoothUnsupported { block }),
        None => Ok(()),
    }
}

/// `F(x) − F*`
pub fn optimality_gap(h: &dyn BlockObjective, x: &[f64]) -> Result<f64> {
    let opt = h.optimum().ok_or(Error::NoOptimum)?;
    Ok(composite_value(h, x)? - opt.value)
}
