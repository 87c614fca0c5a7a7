use super::random::{compose_svd, gaussian_vec, geometric_spectrum, orthonormal_columns, rng};
use crate::error::{Error, Result};
use crate::linalg::vecops::{norm2, norm2_sq, scale};
use crate::linalg::{cholesky, Matrix};
use crate::objective::{BlockObjective, BlockPartition, Constants, Optimum};

/// Default perturbation size; gives `λ_min(JJᵀ) ≥ (1 − ε)² = ¼`.
pub const DEFAULT_EPS: f64 = 0.5;
const SIGMA_MAX: f64 = 3.0;

/// `f(x) = ‖g(x)‖²` for the underdetermined system
/// `g(x) = Ax + ε·sin(x_{1..m}) + c`, `A ∈ ℝ^{m×n}`, `m < n`.
///
/// `σ_min(A) = 1` and the Jacobian `J = A + ε·[diag(cos x_{1..m}) | 0]` has
/// `σ_min(J) ≥ 1 − ε`, so `λ_min(JJᵀ) ≥ μ_J = (1 − ε)²` everywhere and `f`
/// is PL with constant `2μ_J`. The system is solvable, so `f* = 0`.
#[derive(Debug, Clone)]
pub struct NonlinearEqPlProblem {
    a: Matrix,
    c: Vec<f64>,
    eps: f64,
    partition: BlockPartition,
    mu_j: f64,
    constants: Constants,
    optimum: Optimum,
}

impl NonlinearEqPlProblem {
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.a.matvec(x).expect("checked dimension");
        for (j, gj) in g.iter_mut().enumerate() {
            *gj += self.eps * x[j].sin() + self.c[j];
        }
        g
    }

    /// `∂g/∂x`, `m × n`.
    pub fn jacobian(&self, x: &[f64]) -> Matrix {
        let mut j = self.a.clone();
        for r in 0..self.a.rows() {
            j[(r, r)] += self.eps * x[r].cos();
        }
        j
    }

    /// Designed lower bound on `λ_min(J(x)J(x)ᵀ)`.
    pub fn mu_j(&self) -> f64 {
        self.mu_j
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn equations(&self) -> usize {
        self.a.rows()
    }

    /// Damped Gauss-Newton on the columns of block `i`.
    fn block_solve(&self, x: &[f64], i: usize) -> Vec<f64> {
        let idx = self.partition.block(i);
        let mut z = x.to_vec();
        let mut g = self.residual(&z);
        let mut val = norm2_sq(&g);
        let mut lambda = 1e-6;
        for _ in 0..500 {
            let jb = self.jacobian(&z).select_cols(idx);
            let grad = jb.tr_matvec(&g).expect("rows");
            if norm2(&grad) <= 1e-15 * (1.0 + norm2(&g)) {
                break;
            }
            let mut accepted = false;
            while lambda < 1e12 {
                let mut sys = jb.gram();
                for d in 0..idx.len() {
                    sys[(d, d)] += lambda;
                }
                let Ok(fac) = cholesky(&sys) else {
                    lambda *= 10.0;
                    continue;
                };
                let step = fac.solve(&grad).expect("block size");
                let mut trial = z.clone();
                for (k, &j) in idx.iter().enumerate() {
                    trial[j] -= step[k];
                }
                let g_trial = self.residual(&trial);
                let v_trial = norm2_sq(&g_trial);
                if v_trial < val {
                    z = trial;
                    g = g_trial;
                    val = v_trial;
                    lambda = (lambda * 0.1).max(1e-15);
                    accepted = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !accepted {
                break;
            }
        }
        self.partition.gather(&z, i)
    }
}

impl BlockObjective for NonlinearEqPlProblem {
    fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    fn smooth_value(&self, x: &[f64]) -> f64 {
        norm2_sq(&self.residual(x))
    }

    fn block_gradient(&self, x: &[f64], block: usize) -> Vec<f64> {
        let g = self.gradient(x);
        self.partition.gather(&g, block)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        scale(&self.jacobian(x).tr_matvec(&self.residual(x)).expect("rows"), 2.0)
    }

    fn block_argmin(&self, x: &[f64], block: usize) -> Option<Vec<f64>> {
        Some(self.block_solve(x, block))
    }

    fn constants(&self) -> &Constants {
        &self.constants
    }

    fn optimum(&self) -> Option<&Optimum> {
        Some(&self.optimum)
    }
}

/// Seeded instance with `ε = 0.5` split into 4 equal blocks (so each block
/// subproblem is overdetermined and has a unique minimizer).
pub fn make_nonlinear_pl(seed: u64, n: usize, m: usize) -> Result<NonlinearEqPlProblem> {
    make_nonlinear_pl_with(seed, n, m, DEFAULT_EPS, 4)
}

pub fn make_nonlinear_pl_with(
    seed: u64,
    n: usize,
    m: usize,
    eps: f64,
    n_blocks: usize,
) -> Result<NonlinearEqPlProblem> {
    if m == 0 || m >= n {
        return Err(Error::BadShape(format!("need 0 < m < n, got m = {m}, n = {n}")));
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidInput(format!("ε must lie in [0, 1), got {eps}")));
    }
    if n_blocks == 0 || !n.is_multiple_of(n_blocks) {
        return Err(Error::BadDimension(format!(
            "n = {n} must be a positive multiple of the block count {n_blocks}"
        )));
    }
    let mut rng = rng(seed);
    let u = orthonormal_columns(&mut rng, m, m);
    let v = orthonormal_columns(&mut rng, n, m);
    let sigma = geometric_spectrum(m, 1.0, SIGMA_MAX);
    let a = compose_svd(&u, &sigma, &v);
    let c = gaussian_vec(&mut rng, m);
    let mu_j = (1.0 - eps).powi(2);
    let partition = BlockPartition::contiguous(n, n_blocks)?;
    let mut out = NonlinearEqPlProblem {
        a,
        c,
        eps,
        partition,
        mu_j,
        constants: Constants {
            pl: Some(2.0 * mu_j),
            ..Constants::default()
        },
        optimum: Optimum {
            point: Vec::new(),
            value: 0.0,
        },
    };
    out.optimum.point = solve_system(&out)?;
    Ok(out)
}

/// Minimum-norm Gauss-Newton steps `δ = −Jᵀ(JJᵀ)⁻¹g` until `g ≈ 0`.
fn solve_system(h: &NonlinearEqPlProblem) -> Result<Vec<f64>> {
    let mut x = vec![0.0; h.partition.total_dim()];
    for _ in 0..100 {
        let g = h.residual(&x);
        if norm2(&g) <= 1e-15 * (1.0 + norm2(&h.c)) {
            return Ok(x);
        }
        let j = h.jacobian(&x);
        let jjt = j.transpose().gram();
        let w = cholesky(&jjt)?.solve(&g)?;
        let step = j.tr_matvec(&w)?;
        for (xi, s) in x.iter_mut().zip(step) {
            *xi -= s;
        }
    }
    if norm2(&h.residual(&x)) <= 1e-12 {
        Ok(x)
    } else {
        Err(Error::NoOptimum)
    }
}
