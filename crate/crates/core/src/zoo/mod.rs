//! Seeded test problems with exact block solvers, declared constants and
//! reference optima.

mod composite;
mod nonlinear;
mod qp;
mod quadratic;
mod random;

pub use composite::{make_box_composite, make_composite, CompositeQuadraticProblem, COMPOSITE_COND};
pub use nonlinear::{make_nonlinear_pl, make_nonlinear_pl_with, NonlinearEqPlProblem, DEFAULT_EPS};
pub use qp::{coordinate_descent, solve_separable_qp};
pub use quadratic::{make_diagonal, make_quadratic, make_rank_deficient, QuadraticSplitProblem};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::objective::BlockObjective;

fn two() -> usize {
    2
}

fn four() -> usize {
    4
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

fn default_cond() -> f64 {
    COMPOSITE_COND
}

/// Serializable description of a zoo instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSpec {
    Quadratic {
        seed: u64,
        dim: usize,
        cond_number: f64,
        #[serde(default = "two")]
        blocks: usize,
    },
    RankDeficient {
        seed: u64,
        dim: usize,
        rank: usize,
        cond_number: f64,
        #[serde(default = "two")]
        blocks: usize,
    },
    CompositeL1 {
        seed: u64,
        dim: usize,
        gamma: f64,
    },
    CompositeBox {
        seed: u64,
        dim: usize,
        bound: f64,
        #[serde(default = "default_cond")]
        cond_number: f64,
    },
    Nonlinear {
        seed: u64,
        n: usize,
        m: usize,
        #[serde(default = "default_eps")]
        eps: f64,
        #[serde(default = "four")]
        blocks: usize,
    },
}

impl InstanceSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceSpec::Quadratic { .. } => "quadratic",
            InstanceSpec::RankDeficient { .. } => "rank_deficient",
            InstanceSpec::CompositeL1 { .. } => "composite_l1",
            InstanceSpec::CompositeBox { .. } => "composite_box",
            InstanceSpec::Nonlinear { .. } => "nonlinear",
        }
    }

    pub fn build(&self) -> Result<Instance> {
        Ok(match *self {
            InstanceSpec::Quadratic { seed, dim, cond_number, blocks } => {
                Instance::Quadratic(make_quadratic(seed, dim, cond_number, blocks)?)
            }
            InstanceSpec::RankDeficient { seed, dim, rank, cond_number, blocks } => {
                Instance::Quadratic(make_rank_deficient(seed, dim, rank, cond_number, blocks)?)
            }
            InstanceSpec::CompositeL1 { seed, dim, gamma } => Instance::Composite(make_composite(seed, dim, gamma)?),
            InstanceSpec::CompositeBox { seed, dim, bound, cond_number } => {
                let base = make_quadratic(seed, dim, cond_number, 2)?;
                let b = crate::objective::Regularizer::Box { lo: -bound, hi: bound };
                Instance::Composite(CompositeQuadraticProblem::new(base, vec![b.clone(), b])?)
            }
            InstanceSpec::Nonlinear { seed, n, m, eps, blocks } => {
                Instance::Nonlinear(make_nonlinear_pl_with(seed, n, m, eps, blocks)?)
            }
        })
    }
}

#[derive(Debug, Clone)]
pub enum Instance {
    Quadratic(QuadraticSplitProblem),
    Composite(CompositeQuadraticProblem),
    Nonlinear(NonlinearEqPlProblem),
}

impl Instance {
    pub fn objective(&self) -> &dyn BlockObjective {
        match self {
            Instance::Quadratic(p) => p,
            Instance::Composite(p) => p,
            Instance::Nonlinear(p) => p,
        }
    }

    /// The starting point used by the harness: the origin.
    pub fn default_start(&self) -> Vec<f64> {
        vec![0.0; self.objective().partition().total_dim()]
    }
}
