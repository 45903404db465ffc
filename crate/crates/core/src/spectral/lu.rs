//! LU factorization with partial pivoting and the inverse built from it.

use num_traits::{Float as _, Zero};

use crate::error::{dims, Error, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::matrix::Matrix;

/// Inverses with a 1-norm condition number above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Packed `PA = LU`: unit lower `L` below the diagonal, `U` on and above it.
#[derive(Debug, Clone)]
pub struct Lu<S> {
    lu: Matrix<S>,
    /// `perm[i]` is the original row now at position `i`.
    perm: Vec<usize>,
}

impl<S: Scalar> Lu<S> {
    pub fn factor(a: &Matrix<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(dims(format!("LU needs a square matrix, got {:?}", a.shape())));
        }
        a.check_finite()?;
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| {
                    lu[(i, k)]
                        .modulus()
                        .partial_cmp(&lu[(j, k)].modulus())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(k);
            if lu[(pivot, k)] == S::zero() {
                return Err(Error::Singular { rcond: 0.0 });
            }
            if pivot != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot, j)];
                    lu[(pivot, j)] = t;
                }
                perm.swap(k, pivot);
            }
            let inv = S::one() / lu[(k, k)];
            let pivot_row: Vec<S> = lu.row(k)[k + 1..].to_vec();
            for i in k + 1..n {
                let f = lu[(i, k)] * inv;
                lu[(i, k)] = f;
                if f == S::zero() {
                    continue;
                }
                for (a, &u) in lu.row_mut(i)[k + 1..].iter_mut().zip(&pivot_row) {
                    *a -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `A X = B` for all columns of `B` at once.
    pub fn solve(&self, b: &Matrix<S>) -> Result<Matrix<S>> {
        let n = self.dim();
        if b.rows() != n {
            return Err(dims(format!("right-hand side has {} rows, expected {n}", b.rows())));
        }
        let mut x = b.select_rows(&self.perm);
        for i in 0..n {
            for k in 0..i {
                let f = self.lu[(i, k)];
                if f == S::zero() {
                    continue;
                }
                let (head, tail) = x.as_mut_slice().split_at_mut(i * b.cols());
                let src = &head[k * b.cols()..(k + 1) * b.cols()];
                for (t, &s) in tail[..b.cols()].iter_mut().zip(src) {
                    *t -= f * s;
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let f = self.lu[(i, k)];
                if f == S::zero() {
                    continue;
                }
                let (head, tail) = x.as_mut_slice().split_at_mut(k * b.cols());
                let dst = &mut head[i * b.cols()..(i + 1) * b.cols()];
                for (t, &s) in dst.iter_mut().zip(&tail[..b.cols()]) {
                    *t -= f * s;
                }
            }
            let inv = S::one() / self.lu[(i, i)];
            for t in x.row_mut(i) {
                *t *= inv;
            }
        }
        Ok(x)
    }
}

/// `A⁻¹` via LU, rejecting numerically singular input.
///
/// Rejects when the 1-norm condition number `‖A‖₁‖A⁻¹‖₁` exceeds
/// [`MAX_CONDITION`] or when the residual `‖A·A⁻¹ − I‖_F` exceeds `1e-8·n`.
pub fn invert<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let lu = Lu::factor(a)?;
    let n = a.rows();
    let inv = lu.solve(&Matrix::identity(n))?;
    inv.check_finite().map_err(|_| Error::Singular { rcond: 0.0 })?;
    let kappa = a.one_norm() * inv.one_norm();
    let rcond = if kappa > S::Real::zero() {
        kappa.recip().to_f64_lossy()
    } else {
        0.0
    };
    if !(kappa.to_f64_lossy() <= MAX_CONDITION) {
        return Err(Error::Singular { rcond });
    }
    let residual = a.matmul(&inv)?.sub(&Matrix::identity(n))?.frobenius_norm();
    if residual.to_f64_lossy() > 1e-8 * n as f64 {
        return Err(Error::Singular { rcond });
    }
    Ok(inv)
}

/// Rows `R₁, …, R_n` of `A⁻¹`.
pub fn inverse_rows<S: Scalar>(a: &Matrix<S>) -> Result<Vec<Vec<S>>> {
    Ok(invert(a)?.row_vectors())
}

/// `‖A·X − I‖_F`.
pub fn inverse_residual<S: Scalar>(a: &Matrix<S>, x: &Matrix<S>) -> Result<S::Real> {
    Ok(a.matmul(x)?.sub(&Matrix::identity(a.rows()))?.frobenius_norm())
}
