//! Alternating minimization and its accelerated variant for block-structured
//! composite problems, with per-iteration audits of their convergence bounds.
//!
//! * [`linalg`]: small dense matrices, Cholesky, symmetric eigenvalues.
//! * [`objective`]: block partitions, the [`BlockObjective`] trait, prox terms.
//! * [`prox`]: block prox-gradient maps, decrease functional, PL checks.
//! * [`solvers`]: AM, AAM and the fast gradient method.
//! * [`certificates`]: bound checks over solver traces.
//! * [`zoo`]: seeded test problems with known optima.
//! * [`batch`]: order-preserving parallel map.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod batch;
pub mod certificates;
pub mod error;
pub mod linalg;
pub mod objective;
pub mod prox;
pub mod solvers;
pub mod zoo;

pub use error::{Error, Result};
pub use objective::{BlockObjective, BlockPartition, Constants, Optimum, Regularizer};
pub use solvers::{run_aam, run_am, run_fgm, SolverConfig, SolverKind, SolverTrace};
