//! Eigenvalues of self-adjoint matrices by cyclic Jacobi rotations.
//!
//! Slow (`O(n³)` per sweep) but simple and accurate; it serves as the
//! independent route the bidiagonal SVD is checked against.

use num_traits::{Float as _, One, Zero};

use crate::error::{dims, invalid, Error, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::matrix::Matrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a self-adjoint matrix in ascending order.
pub fn hermitian_eigenvalues<S: Scalar>(a: &Matrix<S>) -> Result<Vec<S::Real>> {
    if !a.is_square() {
        return Err(dims(format!("eigenvalues need a square matrix, got {:?}", a.shape())));
    }
    a.check_finite()?;
    let tol = S::Real::of(1e-10);
    if !a.is_self_adjoint(tol) {
        return Err(invalid("matrix is not self-adjoint"));
    }
    let n = a.rows();
    // Symmetrize exactly so rounding in the input cannot stall convergence.
    let mut w = Matrix::from_fn(n, n, |i, j| {
        let half = S::Real::of(0.5);
        (a[(i, j)] + a[(j, i)].conj()).scale(half)
    });
    let eps = S::Real::epsilon();
    let two = S::Real::of(2.0);

    for _ in 0..MAX_SWEEPS {
        let off: S::Real = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| w[(i, j)].abs_sqr())
            .sum();
        let diag: S::Real = (0..n).map(|i| w[(i, i)].abs_sqr()).sum();
        if off <= eps * eps * diag || off == S::Real::zero() {
            let mut ev: Vec<S::Real> = (0..n).map(|i| w[(i, i)].re()).collect();
            ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            return Ok(ev);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[(p, q)];
                let mag = apq.modulus();
                if mag == S::Real::zero() {
                    continue;
                }
                let (app, aqq) = (w[(p, p)].re(), w[(q, q)].re());
                if mag <= eps * eps * (app.abs() + aqq.abs()) {
                    w[(p, q)] = S::zero();
                    w[(q, p)] = S::zero();
                    continue;
                }
                // Rotate column q by conj(phase) so the (p, q) entry becomes
                // real, then apply a real symmetric Jacobi rotation.
                let phase = apq.phase();
                let theta = (aqq - app) / (two * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + S::Real::one()).sqrt());
                let c = (t * t + S::Real::one()).sqrt().recip();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let x = w[(r, p)];
                    let y = w[(r, q)] * phase.conj();
                    let xp = x.scale(c) - y.scale(s);
                    let yq = x.scale(s) + y.scale(c);
                    w[(r, p)] = xp;
                    w[(p, r)] = xp.conj();
                    w[(r, q)] = yq;
                    w[(q, r)] = yq.conj();
                }
                w[(p, p)] = S::from_real(app - t * mag);
                w[(q, q)] = S::from_real(aqq + t * mag);
                w[(p, q)] = S::zero();
                w[(q, p)] = S::zero();
            }
        }
    }
    Err(Error::NoConvergence {
        algorithm: "Jacobi eigenvalue sweep",
        iterations: MAX_SWEEPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn two_by_two_real() {
        let a = Matrix::from_rows(&[vec![2.0f64, 1.0], vec![1.0, 2.0]]).unwrap();
        let ev = hermitian_eigenvalues(&a).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y() {
        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let a = Matrix::from_rows(&[vec![z, -i], vec![i, z]]).unwrap();
        let ev = hermitian_eigenvalues(&a).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let a = Matrix::from_fn(6, 6, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, (i as f64 - j as f64) * 0.3)
        });
        let h = a.add(&a.adjoint()).unwrap();
        let ev = hermitian_eigenvalues(&h).unwrap();
        let tr: f64 = (0..6).map(|i| h[(i, i)].re).sum();
        assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-12);
        let f2: f64 = ev.iter().map(|x| x * x).sum();
        assert!((f2 - h.frobenius_norm_sqr()).abs() < 1e-10 * f2);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(hermitian_eigenvalues(&a).is_err());
        assert!(hermitian_eigenvalues(&Matrix::<f64>::zeros(2, 3)).is_err());
    }
}
