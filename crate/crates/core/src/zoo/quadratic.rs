use super::random::{compose_svd, gaussian_vec, geometric_spectrum, orthonormal_columns, rng};
use crate::error::{Error, Result};
use crate::linalg::vecops::{dot, norm2_sq, scale, sub};
use crate::linalg::{cholesky, spectral_extremes, symmetric_eigenvalues, Matrix, SpdFactorization};
use crate::objective::{BlockObjective, BlockPartition, Constants, Optimum};

/// Relative size below which an eigenvalue of `WᵀW` counts as zero.
const RANK_TOL: f64 = 1e-12;

/// `f(z) = ‖Wz − b‖²` split into column blocks `W = [W₁ … Wₙ]`.
///
/// Block minimizers solve the restricted normal equations
/// `WᵢᵀWᵢ zᵢ = Wᵢᵀ(b − Σ_{j≠i} Wⱼ zⱼ)` with cached Cholesky factors.
/// For two blocks with `W = [A B; C D]` and `b = (c; d)` this is exactly
/// `x ← (AᵀA + CᵀC)⁻¹[Aᵀ(c − By) + Cᵀ(d − Dy)]` and the symmetric `y` update.
#[derive(Debug, Clone)]
pub struct QuadraticSplitProblem {
    w: Matrix,
    b: Vec<f64>,
    partition: BlockPartition,
    block_cols: Vec<Matrix>,
    block_factors: Vec<SpdFactorization>,
    /// `2WᵀW`
    hessian: Matrix,
    constants: Constants,
    optimum: Optimum,
}

impl QuadraticSplitProblem {
    /// Build from an explicit `W`, `b` and partition. When `optimum` is
    /// `None`, `x*` comes from the normal equations (requires full column rank).
    pub fn from_parts(
        w: Matrix,
        b: Vec<f64>,
        partition: BlockPartition,
        optimum: Option<Vec<f64>>,
    ) -> Result<Self> {
        if w.cols() != partition.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: partition.total_dim(),
                found: w.cols(),
            });
        }
        if b.len() != w.rows() {
            return Err(Error::DimensionMismatch {
                expected: w.rows(),
                found: b.len(),
            });
        }
        let gram = w.gram();
        let hessian = gram.scaled(2.0);
        let (lmin, lmax) = spectral_extremes(&hessian)?;
        let full_rank = lmin > RANK_TOL * lmax;

        let mut block_cols = Vec::with_capacity(partition.n_blocks());
        let mut block_factors = Vec::with_capacity(partition.n_blocks());
        let mut block_l = Vec::with_capacity(partition.n_blocks());
        for idx in partition.blocks() {
            let wi = w.select_cols(idx);
            let gi = wi.gram();
            block_factors.push(cholesky(&gi)?);
            block_l.push(spectral_extremes(&gi.scaled(2.0))?.1);
            block_cols.push(wi);
        }

        let x_star = match optimum {
            Some(x) => x,
            None => {
                if !full_rank {
                    return Err(Error::BadShape(
                        "W is rank deficient; supply the optimum explicitly".into(),
                    ));
                }
                cholesky(&gram)?.solve(&w.tr_matvec(&b)?)?
            }
        };
        let f_star = norm2_sq(&sub(&w.matvec(&x_star)?, &b));

        let mu = full_rank.then_some(lmin);
        let constants = Constants {
            lipschitz: Some(lmax),
            block_lipschitz: Some(block_l),
            strong_convexity: mu,
            // the global modulus satisfies the joint block inequality
            block_strong_convexity: mu.map(|m| vec![m; partition.n_blocks()]),
            pl: mu,
        };
        Ok(Self {
            w,
            b,
            partition,
            block_cols,
            block_factors,
            hessian,
            constants,
            optimum: Optimum {
                point: x_star,
                value: f_star,
            },
        })
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `∇²f = 2WᵀW`
    pub fn hessian(&self) -> &Matrix {
        &self.hessian
    }

    /// Smallest non-zero eigenvalue of `∇²f`.
    pub fn smallest_positive_curvature(&self) -> f64 {
        let eig = symmetric_eigenvalues(&self.hessian).expect("symmetric");
        let top = eig.last().copied().unwrap_or(0.0);
        eig.into_iter()
            .find(|&e| e > RANK_TOL * top)
            .unwrap_or(top)
    }

    /// Largest distance from the solution set over `{z : f(z) ≤ f(x0)}`,
    /// i.e. `√(2(f(x0) − f*)/λ⁺_min)`.
    pub fn level_set_radius(&self, x0: &[f64]) -> f64 {
        let gap = (self.smooth_value(x0) - self.optimum.value).max(0.0);
        (2.0 * gap / self.smallest_positive_curvature()).sqrt()
    }

    pub fn block_matrix(&self, i: usize) -> &Matrix {
        &self.block_cols[i]
    }

    /// `Wx − b`
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        sub(&self.w.matvec(x).expect("checked dimension"), &self.b)
    }

    /// Solve the normal equations of block `i` against residual target `r`.
    pub(crate) fn solve_block(&self, i: usize, target: &[f64]) -> Vec<f64> {
        let rhs = self.block_cols[i].tr_matvec(target).expect("row count");
        self.block_factors[i].solve(&rhs).expect("block size")
    }

    /// `b − Σ_{j≠i} Wⱼ xⱼ`
    pub(crate) fn block_target(&self, x: &[f64], i: usize) -> Vec<f64> {
        let r = self.residual(x);
        let own = self.block_cols[i]
            .matvec(&self.partition.gather(x, i))
            .expect("block size");
        own.iter().zip(&r).map(|(o, ri)| o - ri).collect()
    }
}

impl BlockObjective for QuadraticSplitProblem {
    fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    fn smooth_value(&self, x: &[f64]) -> f64 {
        norm2_sq(&self.residual(x))
    }

    fn block_gradient(&self, x: &[f64], block: usize) -> Vec<f64> {
        let r = self.residual(x);
        scale(&self.block_cols[block].tr_matvec(&r).expect("rows"), 2.0)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        scale(&self.w.tr_matvec(&self.residual(x)).expect("rows"), 2.0)
    }

    fn block_argmin(&self, x: &[f64], block: usize) -> Option<Vec<f64>> {
        Some(self.solve_block(block, &self.block_target(x, block)))
    }

    fn constants(&self) -> &Constants {
        &self.constants
    }

    fn optimum(&self) -> Option<&Optimum> {
        Some(&self.optimum)
    }

    fn quadratic_curvature(&self, d: &[f64]) -> Option<f64> {
        let wd = self.w.matvec(d).ok()?;
        Some(2.0 * dot(&wd, &wd))
    }
}

/// Random `f(z) = ‖Wz − b‖²` with `dim` unknowns, `2·dim` rows and the
/// singular values of `W` spread geometrically over `[1/√κ, 1]`, so that
/// `λ_max(WᵀW)/λ_min(WᵀW) = κ = cond_number`. Split into `n_blocks`
/// contiguous equal blocks.
pub fn make_quadratic(seed: u64, dim: usize, cond_number: f64, n_blocks: usize) -> Result<QuadraticSplitProblem> {
    if dim == 0 || n_blocks == 0 || !dim.is_multiple_of(n_blocks) {
        return Err(Error::BadDimension(format!(
            "dim {dim} must be a positive multiple of the block count {n_blocks}"
        )));
    }
    if !(cond_number >= 1.0) || !cond_number.is_finite() {
        return Err(Error::InvalidInput(format!("condition number {cond_number} < 1")));
    }
    let mut rng = rng(seed);
    let rows = 2 * dim;
    let u = orthonormal_columns(&mut rng, rows, dim);
    let v = orthonormal_columns(&mut rng, dim, dim);
    let sigma = geometric_spectrum(dim, 1.0 / cond_number.sqrt(), 1.0);
    let w = compose_svd(&u, &sigma, &v);
    let x_true = gaussian_vec(&mut rng, dim);
    let noise = gaussian_vec(&mut rng, rows);
    let wx = w.matvec(&x_true)?;
    let b: Vec<f64> = wx.iter().zip(&noise).map(|(a, e)| a + 0.1 * e).collect();
    QuadraticSplitProblem::from_parts(w, b, BlockPartition::contiguous(dim, n_blocks)?, None)
}

/// Like [`make_quadratic`] but only `rank` non-zero singular values
/// (spread over `[1/√κ, 1]`). Each column block keeps full column rank as
/// long as `rank ≥ dim / n_blocks`; the optimum is the minimum-norm solution.
pub fn make_rank_deficient(
    seed: u64,
    dim: usize,
    rank: usize,
    cond_number: f64,
    n_blocks: usize,
) -> Result<QuadraticSplitProblem> {
    if dim == 0 || n_blocks == 0 || !dim.is_multiple_of(n_blocks) {
        return Err(Error::BadDimension(format!(
            "dim {dim} must be a positive multiple of the block count {n_blocks}"
        )));
    }
    if rank == 0 || rank >= dim || rank < dim / n_blocks {
        return Err(Error::BadDimension(format!(
            "rank {rank} must lie in [dim/n_blocks, dim) = [{}, {dim})",
            dim / n_blocks
        )));
    }
    let mut rng = rng(seed);
    let rows = 2 * dim;
    let u = orthonormal_columns(&mut rng, rows, dim);
    let v = orthonormal_columns(&mut rng, dim, dim);
    let mut sigma = geometric_spectrum(rank, 1.0 / cond_number.sqrt(), 1.0);
    sigma.resize(dim, 0.0);
    let w = compose_svd(&u, &sigma, &v);
    let b = gaussian_vec(&mut rng, rows);
    // x* = V Σ⁺ Uᵀ b
    let utb = u.tr_matvec(&b)?;
    let coeffs: Vec<f64> = utb
        .iter()
        .zip(&sigma)
        .map(|(c, s)| if *s > 0.0 { c / s } else { 0.0 })
        .collect();
    let x_star = v.matvec(&coeffs)?;
    QuadraticSplitProblem::from_parts(w, b, BlockPartition::contiguous(dim, n_blocks)?, Some(x_star))
}

/// `W = diag(d)`: the Hessian is block diagonal and one AM sweep is exact.
pub fn make_diagonal(d: &[f64], b: Vec<f64>, n_blocks: usize) -> Result<QuadraticSplitProblem> {
    QuadraticSplitProblem::from_parts(
        Matrix::from_diag(d),
        b,
        BlockPartition::contiguous(d.len(), n_blocks)?,
        None,
    )
}
