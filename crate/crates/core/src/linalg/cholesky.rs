use super::matrix::Matrix;
use super::vecops::check_len;
use crate::error::{Error, Result};

/// Relative asymmetry accepted before a matrix is rejected as non-symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = source`.
#[derive(Debug, Clone)]
pub struct SpdFactorization {
    source: Matrix,
    factor: Matrix,
}

/// Factor a symmetric positive definite matrix.
pub fn cholesky(m: &Matrix) -> Result<SpdFactorization> {
    if !m.is_square() {
        return Err(Error::BadShape(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let asym = m.relative_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let n = m.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > 0.0) {
            return Err(Error::NotSpd { pivot: j, value: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            // lower triangle of the source; the upper one may differ by rounding
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(SpdFactorization {
        source: m.clone(),
        factor: l,
    })
}

impl SpdFactorization {
    pub fn source(&self) -> &Matrix {
        &self.source
    }

    pub fn factor(&self) -> &Matrix {
        &self.factor
    }

    pub fn dim(&self) -> usize {
        self.factor.rows()
    }

    /// Solve `source · x = rhs` by forward and back substitution.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        check_len(rhs, n)?;
        let l = &self.factor;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[(k, i)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        Ok(y)
    }

    /// `‖L Lᵀ − source‖_F / ‖source‖_F`
    pub fn reconstruction_error(&self) -> f64 {
        let llt = self
            .factor
            .matmul(&self.factor.transpose())
            .expect("square factor");
        let diff = llt.add(&self.source.scaled(-1.0)).expect("same shape");
        diff.frobenius_norm() / self.source.frobenius_norm().max(f64::MIN_POSITIVE)
    }
}

/// Solve `f.source · x = rhs`.
pub fn solve_spd(f: &SpdFactorization, rhs: &[f64]) -> Result<Vec<f64>> {
    f.solve(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vecops::{norm2, sub};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        r.gram().add(&Matrix::identity(n)).unwrap()
    }

    /// Gaussian elimination with partial pivoting, independent of the factorization.
    fn gauss_solve(m: &Matrix, rhs: &[f64]) -> Vec<f64> {
        let n = m.rows();
        let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
        let mut b = rhs.to_vec();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
                .unwrap();
            a.swap(c, p);
            b.swap(c, p);
            for r in (c + 1)..n {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    #[test]
    fn identity_factor_is_identity() {
        let f = cholesky(&Matrix::identity(3)).unwrap();
        assert_eq!(f.factor(), &Matrix::identity(3));
    }

    #[test]
    fn diagonal_factor() {
        let m = Matrix::from_rows(&[vec![4.0, 0.0], vec![0.0, 9.0]]).unwrap();
        let f = cholesky(&m).unwrap();
        assert_eq!(f.factor(), &Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap());
    }

    #[test]
    fn random_reconstruction() {
        let m = random_spd(5, 7);
        let f = cholesky(&m).unwrap();
        assert!(f.reconstruction_error() <= 1e-10);
        for i in 0..5 {
            for j in (i + 1)..5 {
                assert_eq!(f.factor()[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn solve_examples() {
        let f = cholesky(&Matrix::identity(3)).unwrap();
        assert_eq!(solve_spd(&f, &[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        let m = Matrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let f = cholesky(&m).unwrap();
        let x = solve_spd(&f, &[2.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!(matches!(
            solve_spd(&f, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn random_solve_matches_gaussian_elimination() {
        let m = random_spd(6, 11);
        let rhs = [1.0, -2.0, 0.5, 3.0, 0.0, -1.0];
        let f = cholesky(&m).unwrap();
        let x = solve_spd(&f, &rhs).unwrap();
        let oracle = gauss_solve(&m, &rhs);
        assert!(norm2(&sub(&x, &oracle)) <= 1e-10 * (1.0 + norm2(&oracle)));
        let resid = norm2(&sub(&m.matvec(&x).unwrap(), &rhs));
        assert!(resid <= 1e-9 * (1.0 + norm2(&rhs)));
    }

    #[test]
    fn rejects_indefinite_and_asymmetric() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&m), Err(Error::NotSpd { pivot: 1, .. })));
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 2.0]]).unwrap();
        assert!(matches!(cholesky(&m), Err(Error::NotSymmetric { .. })));
    }
}
