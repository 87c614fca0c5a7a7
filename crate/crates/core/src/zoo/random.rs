use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::vecops::{dot, norm2};
use crate::linalg::Matrix;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `rows × cols` matrix with orthonormal columns (modified Gram-Schmidt,
/// applied twice, on a Gaussian matrix).
pub(crate) fn orthonormal_columns(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    assert!(cols <= rows);
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(cols);
    while q.len() < cols {
        let mut v = gaussian_vec(rng, rows);
        for _ in 0..2 {
            for u in &q {
                let c = dot(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let nv = norm2(&v);
        if nv < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        q.push(v);
    }
    Matrix::from_fn(rows, cols, |i, j| q[j][i])
}

/// `U · diag(s) · Vᵀ`
pub(crate) fn compose_svd(u: &Matrix, s: &[f64], v: &Matrix) -> Matrix {
    let us = Matrix::from_fn(u.rows(), s.len(), |i, j| u[(i, j)] * s[j]);
    us.matmul(&v.transpose()).expect("conforming factors")
}

/// `n` values spaced geometrically from `hi` down to `lo`.
pub(crate) fn geometric_spectrum(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    if n == 1 {
        return vec![hi];
    }
    (0..n)
        .map(|k| {
            if k == n - 1 {
                lo
            } else if k == 0 {
                hi
            } else {
                hi * (lo / hi).powf(k as f64 / (n - 1) as f64)
            }
        })
        .collect()
}
