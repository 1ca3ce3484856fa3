//! Dense Hermitian eigendecomposition.
//!
//! nalgebra's `SymmetricEigen` loses accuracy on chiral tridiagonal chains
//! (residuals up to 1e-6 at dimension 36), so dense problems go through faer.

use faer::{Mat, Side};
use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("dense eigendecomposition did not converge")]
pub struct EigenFailure;

/// Eigenvalues ascending, eigenvectors as columns.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>), EigenFailure> {
    let n = m.nrows();
    let a = Mat::<Complex64>::from_fn(n, n, |i, j| m[(i, j)]);
    let e = a.self_adjoint_eigen(Side::Lower).map_err(|_| EigenFailure)?;
    sorted(n, |i| e.S()[i].re, |i, j| e.U()[(i, j)])
}

/// Real symmetric variant.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>), EigenFailure> {
    let n = m.nrows();
    let a = Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    let e = a.self_adjoint_eigen(Side::Lower).map_err(|_| EigenFailure)?;
    sorted(n, |i| e.S()[i], |i, j| e.U()[(i, j)])
}

fn sorted<T: nalgebra::Scalar + Copy>(
    n: usize,
    value: impl Fn(usize) -> f64,
    vector: impl Fn(usize, usize) -> T,
) -> Result<(Vec<f64>, DMatrix<T>), EigenFailure> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| value(a).total_cmp(&value(b)));
    let values: Vec<f64> = order.iter().map(|&i| value(i)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(EigenFailure);
    }
    let vectors = DMatrix::from_fn(n, n, |i, c| vector(i, order[c]));
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chiral_chain_residual() {
        let z = 2.0 * (3.6178883768953547f64 / 2.0).cos().abs();
        let n = 36;
        let t = DMatrix::from_fn(n, n, |i, j| {
            if i.abs_diff(j) == 1 {
                if i.min(j) % 2 == 0 {
                    z
                } else {
                    1.0
                }
            } else {
                0.0
            }
        });
        let (vals, vecs) = symmetric_eigen(&t).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for c in 0..n {
            let v = vecs.column(c);
            assert!((&t * v - v * vals[c]).norm() < 1e-13);
        }
    }

    #[test]
    fn complex_hermitian() {
        let m = DMatrix::from_fn(5, 5, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            let v = Complex64::new(1.0 / (1.0 + a + b), 0.3 * (b - a));
            if i <= j {
                v
            } else {
                v.conj()
            }
        });
        let (vals, vecs) = hermitian_eigen(&m).unwrap();
        for c in 0..5 {
            let v = vecs.column(c);
            assert!((&m * v - v * Complex64::from(vals[c])).norm() < 1e-13);
        }
    }
}
