//! Householder QR with the full unitary factor, orthonormal complements,
//! and Haar-random unitaries.

use num_traits::{Float as _, Zero};

use crate::ensembles::{AtomDistribution, RngStream};
use crate::error::{Error, Result};
use crate::scalar::{Field, Real, Scalar};
use crate::spectral::matrix::{dot, Matrix};
use crate::spectral::svd::householder;

/// Relative size below which a diagonal entry of `R` signals dependence.
pub const RANK_TOL: f64 = 1e-12;

/// `A = Q R` with `Q` square unitary (`p × p`) and `R` upper trapezoidal (`p × k`).
#[derive(Debug, Clone)]
pub struct Qr<S> {
    pub q: Matrix<S>,
    pub r: Matrix<S>,
}

pub fn householder_qr<S: Scalar>(a: &Matrix<S>) -> Qr<S> {
    let (p, k) = a.shape();
    let t = p.min(k);
    let mut r = a.clone();
    let mut reflectors: Vec<(Vec<S>, S)> = Vec::with_capacity(t);
    for j in 0..t {
        let mut v: Vec<S> = (j..p).map(|i| r[(i, j)]).collect();
        let (beta, tau) = householder(&mut v);
        v[0] = S::one();
        r[(j, j)] = S::from_real(beta);
        for i in j + 1..p {
            r[(i, j)] = S::zero();
        }
        if tau != S::zero() && j + 1 < k {
            let mut y = vec![S::zero(); k - j - 1];
            for (i, &vi) in v.iter().enumerate() {
                let cv = vi.conj();
                for (yy, &x) in y.iter_mut().zip(&r.row(j + i)[j + 1..]) {
                    *yy += cv * x;
                }
            }
            let ct = tau.conj();
            for (i, &vi) in v.iter().enumerate() {
                let f = ct * vi;
                for (x, &yy) in r.row_mut(j + i)[j + 1..].iter_mut().zip(&y) {
                    *x -= f * yy;
                }
            }
        }
        reflectors.push((v, tau));
    }
    // Q = H₀ H₁ ⋯ H_{t−1}, accumulated right to left.
    let mut q = Matrix::identity(p);
    for (j, (v, tau)) in reflectors.iter().enumerate().rev() {
        if *tau == S::zero() {
            continue;
        }
        let mut y = vec![S::zero(); p];
        for (i, &vi) in v.iter().enumerate() {
            let cv = vi.conj();
            for (yy, &x) in y.iter_mut().zip(q.row(j + i)) {
                *yy += cv * x;
            }
        }
        for (i, &vi) in v.iter().enumerate() {
            let f = *tau * vi;
            for (x, &yy) in q.row_mut(j + i).iter_mut().zip(&y) {
                *x -= f * yy;
            }
        }
    }
    Qr { q, r }
}

impl<S: Scalar> Qr<S> {
    /// Fails when `|R_jj| ≤ RANK_TOL · max_i |R_ii|` for some `j`.
    pub fn check_full_column_rank(&self) -> Result<()> {
        let t = self.r.rows().min(self.r.cols());
        let diag: Vec<S::Real> = (0..t).map(|j| self.r[(j, j)].modulus()).collect();
        let top = diag.iter().copied().fold(S::Real::zero(), S::Real::max);
        let tol = top * S::Real::of(RANK_TOL);
        match diag.iter().position(|&d| d <= tol) {
            Some(j) if top > S::Real::zero() => Err(Error::RankDeficient(format!(
                "column {j} is numerically dependent on the previous ones"
            ))),
            Some(_) => Err(Error::RankDeficient("all columns vanish".into())),
            None => Ok(()),
        }
    }
}

/// Orthonormal basis (as columns) of the complement of the column span of
/// `x` (`p × k`, `k ≤ p`), which must have full column rank.
pub fn orthonormal_complement<S: Scalar>(x: &Matrix<S>) -> Result<Matrix<S>> {
    let (p, k) = x.shape();
    if k > p {
        return Err(Error::RankDeficient(format!("{k} columns in dimension {p}")));
    }
    let qr = householder_qr(x);
    if k > 0 {
        qr.check_full_column_rank()?;
    }
    Ok(qr.q.select_columns(&(k..p).collect::<Vec<_>>()))
}

/// Orthonormal basis (as columns) of the column span of a full-rank `x`.
pub fn orthonormal_basis<S: Scalar>(x: &Matrix<S>) -> Result<Matrix<S>> {
    let (p, k) = x.shape();
    if k > p {
        return Err(Error::RankDeficient(format!("{k} columns in dimension {p}")));
    }
    let qr = householder_qr(x);
    qr.check_full_column_rank()?;
    Ok(qr.q.select_columns(&(0..k).collect::<Vec<_>>()))
}

/// `x − Q Q* x` for `Q` with orthonormal columns.
pub fn project_out<S: Scalar>(q: &Matrix<S>, x: &[S]) -> Vec<S> {
    let mut r = x.to_vec();
    for j in 0..q.cols() {
        let col = q.column(j);
        let c = dot(&col, x);
        for (ri, &qi) in r.iter_mut().zip(&col) {
            *ri -= qi * c;
        }
    }
    r
}

/// `Q* x` for `Q` with orthonormal columns: coordinates of the projection.
pub fn project_onto<S: Scalar>(q: &Matrix<S>, x: &[S]) -> Vec<S> {
    (0..q.cols()).map(|j| dot(&q.column(j), x)).collect()
}

/// Haar-distributed `n × n` unitary over the given field, from the QR of a
/// gaussian matrix with the diagonal of `R` made positive.
pub fn random_unitary<S: Scalar>(n: usize, stream: &RngStream) -> Matrix<S> {
    let atom = match S::FIELD {
        Field::Real => AtomDistribution::real_gaussian(),
        Field::Complex => AtomDistribution::complex_gaussian(),
    };
    let g = Matrix::from_fn(n, n, |i, j| {
        atom.sample_scalar::<S>(&mut stream.draw((i * n + j) as u64))
    });
    let Qr { mut q, r } = householder_qr(&g);
    for j in 0..n {
        if r[(j, j)].re() < S::Real::zero() {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// `‖Q*Q − I‖_F` for the columns of `q`.
pub fn orthonormality_defect<S: Scalar>(q: &Matrix<S>) -> S::Real {
    let g = q.gram();
    g.sub(&Matrix::identity(q.cols()))
        .map(|m| m.frobenius_norm())
        .unwrap_or_else(|_| S::Real::infinity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn sample(p: usize, k: usize) -> Matrix<Complex64> {
        Matrix::from_fn(p, k, |i, j| {
            Complex64::new(((i * 5 + j * 3) % 7) as f64 - 3.0, ((i + 2 * j) % 3) as f64 - 1.0)
        })
    }

    #[test]
    fn qr_reconstructs() {
        for (p, k) in [(5, 3), (4, 4), (3, 5)] {
            let a = sample(p, k);
            let Qr { q, r } = householder_qr(&a);
            assert!(orthonormality_defect(&q) < 1e-13);
            assert!(q.matmul(&r).unwrap().sub(&a).unwrap().frobenius_norm() < 1e-12);
            for i in 0..p {
                for j in 0..k.min(i) {
                    assert_eq!(r[(i, j)], Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn complement_is_orthogonal() {
        let x = sample(6, 2);
        let c = orthonormal_complement(&x).unwrap();
        assert_eq!(c.shape(), (6, 4));
        assert!(orthonormality_defect(&c) < 1e-13);
        let cross = c.adjoint().matmul(&x).unwrap();
        assert!(cross.frobenius_norm() < 1e-12);
    }

    #[test]
    fn dependent_columns_detected() {
        let mut x = Matrix::<f64>::zeros(4, 2);
        for i in 0..4 {
            x[(i, 0)] = i as f64 + 1.0;
            x[(i, 1)] = 2.0 * (i as f64 + 1.0);
        }
        assert!(matches!(orthonormal_complement(&x), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn projection_split() {
        let x = sample(5, 2);
        let b = orthonormal_basis(&x).unwrap();
        let v: Vec<Complex64> = (0..5).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let out = project_out(&b, &v);
        let coords = project_onto(&b, &v);
        let n_out: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        let n_in: f64 = coords.iter().map(|z| z.norm_sqr()).sum();
        let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((n_out + n_in - total).abs() < 1e-12);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let u: Matrix<Complex64> = random_unitary(7, &RngStream::new(3, 3));
        assert!(orthonormality_defect(&u) < 1e-13);
        let o: Matrix<f64> = random_unitary(7, &RngStream::new(3, 3));
        assert!(orthonormality_defect(&o) < 1e-13);
    }
}
