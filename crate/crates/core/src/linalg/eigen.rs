//! Symmetric eigenvalues by the cyclic Jacobi method.

use super::cholesky::SYMMETRY_TOL;
use super::matrix::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::BadShape(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let asym = m.relative_asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    let n = m.rows();
    // symmetrize so rotations act on an exactly symmetric array
    let mut a: Vec<f64> = Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
        .as_slice()
        .to_vec();
    let at = |i: usize, j: usize| i * n + j;

    let total: f64 = a.iter().map(|v| v * v).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[at(i, j)] * a[at(i, j)])
            .sum();
        if off <= f64::EPSILON * f64::EPSILON * total * 1e-4 || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[at(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[at(p, p)];
                let aqq = a[at(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[at(k, p)];
                    let akq = a[at(k, q)];
                    a[at(k, p)] = c * akp - s * akq;
                    a[at(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[at(p, k)];
                    let aqk = a[at(q, k)];
                    a[at(p, k)] = c * apk - s * aqk;
                    a[at(q, k)] = s * apk + c * aqk;
                }
                a[at(p, q)] = 0.0;
                a[at(q, p)] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[at(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn spectral_extremes(m: &Matrix) -> Result<(f64, f64)> {
    let eig = symmetric_eigenvalues(m)?;
    Ok((eig[0], eig[eig.len() - 1]))
}
