//! Dense linear algebra kernel: row-major matrices, Cholesky, symmetric spectra.

mod cholesky;
mod eigen;
mod matrix;
pub mod vecops;

pub use cholesky::{cholesky, solve_spd, SpdFactorization, SYMMETRY_TOL};
pub use eigen::{spectral_extremes, symmetric_eigenvalues};
pub use matrix::Matrix;

#[cfg(test)]
mod proptests {
    use super::vecops::{norm2, sub};
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn spd_solve_round_trip(
            n in 1usize..8,
            entries in proptest::collection::vec(-2.0f64..2.0, 64),
            rhs in proptest::collection::vec(-5.0f64..5.0, 8),
        ) {
            let r = Matrix::from_fn(n, n, |i, j| entries[i * 8 + j]);
            let m = r.gram().add(&Matrix::identity(n).scaled(0.5)).unwrap();
            let f = cholesky(&m).unwrap();
            let x = solve_spd(&f, &rhs[..n]).unwrap();
            let resid = norm2(&sub(&m.matvec(&x).unwrap(), &rhs[..n]));
            prop_assert!(resid <= 1e-9 * (1.0 + norm2(&rhs[..n])));
        }
    }
}
