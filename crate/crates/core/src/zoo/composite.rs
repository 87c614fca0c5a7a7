use super::qp::{coordinate_descent, solve_separable_qp};
use super::quadratic::{make_quadratic, QuadraticSplitProblem};
use crate::error::{Error, Result};
use crate::linalg::vecops::scale;
use crate::objective::{composite_value, BlockObjective, BlockPartition, Constants, Optimum, Regularizer};

/// Condition number of `WᵀW` used by the composite generators.
pub const COMPOSITE_COND: f64 = 20.0;

/// Agreement required between the two reference solvers.
const CROSS_CHECK_TOL: f64 = 1e-10;

/// `F(z) = ‖Wz − b‖² + Σᵢ gᵢ(zᵢ)` with separable built-in `gᵢ`.
#[derive(Debug, Clone)]
pub struct CompositeQuadraticProblem {
    base: QuadraticSplitProblem,
    regs: Vec<Regularizer>,
    optimum: Optimum,
}

impl CompositeQuadraticProblem {
    /// Attach per-block terms to a quadratic and compute the reference
    /// optimum twice (accelerated prox-gradient with active-set polish, and
    /// coordinate descent). Fails if the two disagree.
    pub fn new(base: QuadraticSplitProblem, regs: Vec<Regularizer>) -> Result<Self> {
        let p = base.partition();
        if regs.len() != p.n_blocks() {
            return Err(Error::DimensionMismatch {
                expected: p.n_blocks(),
                found: regs.len(),
            });
        }
        if let Some(r) = regs.iter().find(|r| matches!(r, Regularizer::Custom(_))) {
            return Err(Error::InvalidInput(format!("unsupported term {r:?}")));
        }
        let coord_regs = expand(p, &regs);
        let q = scale(&base.w().tr_matvec(base.b())?, 2.0);
        let start = vec![0.0; p.total_dim()];
        let x_pg = solve_separable_qp(base.hessian(), &q, &coord_regs, &start)?;
        let x_cd = coordinate_descent(base.hessian(), &q, &coord_regs, &start, 1_000_000);

        let mut out = Self {
            base,
            regs,
            optimum: Optimum {
                point: Vec::new(),
                value: 0.0,
            },
        };
        let f_pg = composite_value(&out, &x_pg)?;
        let f_cd = composite_value(&out, &x_cd)?;
        if (f_pg - f_cd).abs() > CROSS_CHECK_TOL * (1.0 + f_pg.abs()) {
            return Err(Error::InvalidInput(format!(
                "reference optima disagree: {f_pg} vs {f_cd}"
            )));
        }
        let (point, value) = if f_cd < f_pg { (x_cd, f_cd) } else { (x_pg, f_pg) };
        out.optimum = Optimum { point, value };
        Ok(out)
    }

    pub fn base(&self) -> &QuadraticSplitProblem {
        &self.base
    }

    pub fn regularizers(&self) -> &[Regularizer] {
        &self.regs
    }
}

fn expand(p: &BlockPartition, regs: &[Regularizer]) -> Vec<Regularizer> {
    let mut out = vec![Regularizer::Zero; p.total_dim()];
    for (i, idx) in p.blocks().iter().enumerate() {
        for &j in idx {
            out[j] = regs[i].clone();
        }
    }
    out
}

impl BlockObjective for CompositeQuadraticProblem {
    fn partition(&self) -> &BlockPartition {
        self.base.partition()
    }

    fn smooth_value(&self, x: &[f64]) -> f64 {
        self.base.smooth_value(x)
    }

    fn block_gradient(&self, x: &[f64], block: usize) -> Vec<f64> {
        self.base.block_gradient(x, block)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.base.gradient(x)
    }

    fn block_argmin(&self, x: &[f64], block: usize) -> Option<Vec<f64>> {
        if self.regs[block].is_zero() {
            return self.base.block_argmin(x, block);
        }
        let wi = self.base.block_matrix(block);
        let target = self.base.block_target(x, block);
        let q_mat = wi.gram().scaled(2.0);
        let q = scale(&wi.tr_matvec(&target).ok()?, 2.0);
        let regs = vec![self.regs[block].clone(); q.len()];
        let warm = self.partition().gather(x, block);
        solve_separable_qp(&q_mat, &q, &regs, &warm).ok()
    }

    fn regularizer(&self, block: usize) -> &Regularizer {
        &self.regs[block]
    }

    fn constants(&self) -> &Constants {
        self.base.constants()
    }

    fn optimum(&self) -> Option<&Optimum> {
        Some(&self.optimum)
    }

    fn quadratic_curvature(&self, d: &[f64]) -> Option<f64> {
        self.base.quadratic_curvature(d)
    }
}

/// Two-block quadratic with `γ‖·‖₁` on block 0 and nothing on block 1.
pub fn make_composite(seed: u64, dim: usize, gamma: f64) -> Result<CompositeQuadraticProblem> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidInput(format!("γ must be non-negative, got {gamma}")));
    }
    let base = make_quadratic(seed, dim, COMPOSITE_COND, 2)?;
    CompositeQuadraticProblem::new(base, vec![Regularizer::L1 { weight: gamma }, Regularizer::Zero])
}

/// Two-block quadratic with both blocks constrained to `[−bound, bound]`.
pub fn make_box_composite(seed: u64, dim: usize, bound: f64) -> Result<CompositeQuadraticProblem> {
    if !(bound > 0.0) {
        return Err(Error::InvalidInput(format!("box half-width must be positive, got {bound}")));
    }
    let base = make_quadratic(seed, dim, COMPOSITE_COND, 2)?;
    let b = Regularizer::Box { lo: -bound, hi: bound };
    CompositeQuadraticProblem::new(base, vec![b.clone(), b])
}
