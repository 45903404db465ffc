//! Singular values by Householder bidiagonalization followed by implicit
//! Wilkinson-shift QR on the real bidiagonal (Golub–Kahan).

use num_traits::{Float as _, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::matrix::Matrix;

/// Nonincreasing singular values of an `m × n` matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularSpectrum<T> {
    pub values: Vec<T>,
    pub rows: usize,
    pub cols: usize,
}

impl<T: Real> SingularSpectrum<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// `σ_j` with one-based `j`, zero past `min(m, n)`.
    pub fn get(&self, j: usize) -> T {
        j.checked_sub(1)
            .and_then(|i| self.values.get(i))
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn sum_of_squares(&self) -> T {
        self.values.iter().map(|&s| s * s).sum()
    }
}

/// Householder vector in the LAPACK `larfg` convention: returns `(β, τ)` and
/// overwrites `x[1..]` with `v[1..]` (`v[0] = 1`) so that
/// `(I − τ v v*)* x = β e₁` with `β` real.
pub(crate) fn householder<S: Scalar>(x: &mut [S]) -> (S::Real, S) {
    let alpha = x[0];
    let tail: S::Real = x[1..].iter().map(|a| a.abs_sqr()).sum();
    if tail == S::Real::zero() && alpha.im() == S::Real::zero() {
        return (alpha.re(), S::zero());
    }
    let norm = (alpha.abs_sqr() + tail).sqrt();
    let beta = if alpha.re() >= S::Real::zero() { -norm } else { norm };
    let beta_s = S::from_real(beta);
    let tau = (beta_s - alpha) / beta_s;
    let inv = S::one() / (alpha - beta_s);
    for v in &mut x[1..] {
        *v *= inv;
    }
    (beta, tau)
}

/// Reduces `w` (rows ≥ cols, row-major, consumed) to a real upper bidiagonal
/// `(d, e)` with the same singular values.
fn bidiagonalize<S: Scalar>(mut w: Matrix<S>) -> (Vec<S::Real>, Vec<S::Real>) {
    let (p, q) = w.shape();
    debug_assert!(p >= q);
    let mut d = vec![S::Real::zero(); q];
    let mut e = vec![S::Real::zero(); q.saturating_sub(1)];
    let mut v = vec![S::zero(); p.max(q)];
    let mut y = vec![S::zero(); q];

    for k in 0..q {
        // Left reflector zeroing column k below the diagonal.
        let len = p - k;
        for (i, vi) in v[..len].iter_mut().enumerate() {
            *vi = w[(k + i, k)];
        }
        let (beta, tau) = householder(&mut v[..len]);
        v[0] = S::one();
        d[k] = beta;
        if tau != S::zero() && k + 1 < q {
            let width = q - k - 1;
            let yk = &mut y[..width];
            yk.iter_mut().for_each(|t| *t = S::zero());
            for (i, &vi) in v[..len].iter().enumerate() {
                let cv = vi.conj();
                for (t, &a) in yk.iter_mut().zip(&w.row(k + i)[k + 1..]) {
                    *t += cv * a;
                }
            }
            let ct = tau.conj();
            for (i, &vi) in v[..len].iter().enumerate() {
                let f = ct * vi;
                for (a, &t) in w.row_mut(k + i)[k + 1..].iter_mut().zip(yk.iter()) {
                    *a -= f * t;
                }
            }
        }

        // Right reflector zeroing row k right of the superdiagonal.
        if k + 1 < q {
            let len = q - k - 1;
            for (j, vj) in v[..len].iter_mut().enumerate() {
                *vj = w[(k, k + 1 + j)].conj();
            }
            let (beta, tau) = householder(&mut v[..len]);
            v[0] = S::one();
            e[k] = beta;
            if tau != S::zero() {
                for i in k + 1..p {
                    let row = &mut w.row_mut(i)[k + 1..];
                    let s = row
                        .iter()
                        .zip(&v[..len])
                        .fold(S::zero(), |acc, (&a, &vj)| acc + a * vj);
                    let f = tau * s;
                    for (a, &vj) in row.iter_mut().zip(&v[..len]) {
                        *a -= f * vj.conj();
                    }
                }
            }
        }
    }
    (d, e)
}

/// `(c, s, r)` with `c·y + s·z = r`, `−s·y + c·z = 0`.
#[inline]
fn givens<T: Real>(y: T, z: T) -> (T, T, T) {
    if z == T::zero() {
        (T::one(), T::zero(), y)
    } else {
        let r = y.hypot(z);
        (y / r, z / r, r)
    }
}

/// Singular values of the upper bidiagonal with diagonal `d` and
/// superdiagonal `e`, unsorted and possibly signed on return.
fn bidiagonal_qr<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let q = d.len();
    if q <= 1 {
        return Ok(());
    }
    let eps = T::epsilon();
    let anorm = d
        .iter()
        .chain(e.iter())
        .fold(T::zero(), |m, &x| m.max(x.abs()));
    if anorm == T::zero() {
        return Ok(());
    }
    let tiny = eps * anorm;
    let max_steps = 60 * q + 200;
    let mut steps = 0;

    loop {
        for i in 0..q - 1 {
            if e[i].abs() <= eps * (d[i].abs() + d[i + 1].abs()) || e[i].abs() < T::min_positive_value() {
                e[i] = T::zero();
            }
        }
        let Some(hi) = (1..q).rev().find(|&i| e[i - 1] != T::zero()) else {
            return Ok(());
        };
        let mut lo = hi - 1;
        while lo > 0 && e[lo - 1] != T::zero() {
            lo -= 1;
        }

        steps += 1;
        if steps > max_steps {
            return Err(Error::NoConvergence {
                algorithm: "bidiagonal QR",
                iterations: steps,
            });
        }

        if let Some(i) = (lo..hi).find(|&i| d[i].abs() <= tiny) {
            // Zero on the diagonal: rotate e[i] out along row i.
            d[i] = T::zero();
            let mut bulge = e[i];
            e[i] = T::zero();
            for k in i + 1..=hi {
                let (c, s, r) = givens(d[k], bulge);
                d[k] = r;
                if k < hi {
                    bulge = -s * e[k];
                    e[k] = c * e[k];
                }
            }
            continue;
        }
        if d[hi].abs() <= tiny {
            // Zero in the last diagonal slot: rotate e[hi-1] out up column hi.
            d[hi] = T::zero();
            let mut bulge = e[hi - 1];
            e[hi - 1] = T::zero();
            for k in (lo..hi).rev() {
                let (c, s, r) = givens(d[k], bulge);
                d[k] = r;
                if k > lo {
                    bulge = -s * e[k - 1];
                    e[k - 1] = c * e[k - 1];
                }
            }
            continue;
        }

        // Wilkinson shift from the trailing 2x2 of BᵀB.
        let two = T::one() + T::one();
        let t11 = d[hi - 1] * d[hi - 1] + if hi - 1 > lo { e[hi - 2] * e[hi - 2] } else { T::zero() };
        let t12 = d[hi - 1] * e[hi - 1];
        let t22 = d[hi] * d[hi] + e[hi - 1] * e[hi - 1];
        let delta = (t11 - t22) / two;
        let sign = if delta >= T::zero() { T::one() } else { -T::one() };
        let denom = delta + sign * delta.hypot(t12);
        let mu = if denom == T::zero() { t22 } else { t22 - t12 * t12 / denom };

        let mut y = d[lo] * d[lo] - mu;
        let mut z = d[lo] * e[lo];
        for k in lo..hi {
            // Column rotation on (k, k+1).
            let (c, s, r) = givens(y, z);
            if k > lo {
                e[k - 1] = r;
            }
            let (dk, ek) = (d[k], e[k]);
            d[k] = c * dk + s * ek;
            e[k] = -s * dk + c * ek;
            let bulge = s * d[k + 1];
            d[k + 1] = c * d[k + 1];

            // Row rotation on (k, k+1) removing the subdiagonal bulge.
            let (c, s, r) = givens(d[k], bulge);
            d[k] = r;
            let (ek, dk1) = (e[k], d[k + 1]);
            e[k] = c * ek + s * dk1;
            d[k + 1] = -s * ek + c * dk1;
            y = e[k];
            if k + 1 < hi {
                z = s * e[k + 1];
                e[k + 1] = c * e[k + 1];
            }
        }
    }
}

/// Singular values `σ₁ ≥ … ≥ σ_{min(m,n)} ≥ 0`.
pub fn singular_values<S: Scalar>(a: &Matrix<S>) -> Result<SingularSpectrum<S::Real>> {
    a.check_finite()?;
    let (m, n) = a.shape();
    let work = if m >= n { a.clone() } else { a.adjoint() };
    let (mut d, mut e) = bidiagonalize(work);
    bidiagonal_qr(&mut d, &mut e)?;
    let mut values: Vec<S::Real> = d.into_iter().map(|x| x.abs()).collect();
    values.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    Ok(SingularSpectrum {
        values,
        rows: m,
        cols: n,
    })
}

/// `σ_min / σ_max` for nonzero matrices, zero otherwise.
pub fn reciprocal_condition<T: Real>(spec: &SingularSpectrum<T>) -> T {
    let top = spec.max();
    if top == T::zero() {
        T::zero()
    } else {
        spec.min() / top
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_and_diagonal() {
        let s = singular_values(&Matrix::<f64>::identity(3)).unwrap();
        assert_eq!(s.values, vec![1.0, 1.0, 1.0]);
        let s = singular_values(&Matrix::from_diagonal(&[3.0, 0.0])).unwrap();
        assert_eq!(s.values, vec![3.0, 0.0]);
        let s = singular_values(&Matrix::from_diagonal(&[-2.0, 5.0, 0.5])).unwrap();
        assert_eq!(s.values, vec![5.0, 2.0, 0.5]);
    }

    #[test]
    fn zero_and_empty() {
        let s = singular_values(&Matrix::<f64>::zeros(3, 2)).unwrap();
        assert_eq!(s.values, vec![0.0, 0.0]);
        let s = singular_values(&Matrix::<f64>::zeros(0, 0)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn two_by_two_closed_form() {
        // σ² are eigenvalues of AᵀA = [[10, 14], [14, 20]].
        let a = Matrix::from_rows(&[vec![1.0f64, 2.0], vec![3.0, 4.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        let (tr, det) = (30.0f64, 4.0f64);
        let disc = (tr * tr / 4.0 - det).sqrt();
        assert!((s.values[0] - (tr / 2.0 + disc).sqrt()).abs() < 1e-14);
        assert!((s.values[1] - (tr / 2.0 - disc).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = [1.0f64, -2.0, 2.0];
        let v = [3.0, 4.0];
        let a = Matrix::from_fn(3, 2, |i, j| u[i] * v[j]);
        let s = singular_values(&a).unwrap();
        assert!((s.values[0] - 15.0).abs() < 1e-13);
        assert!(s.values[1].abs() < 1e-13);
    }

    #[test]
    fn wide_matrix_uses_adjoint() {
        let a = Matrix::from_fn(2, 5, |i, j| Complex64::new((i + j) as f64, i as f64 - j as f64));
        let s1 = singular_values(&a).unwrap();
        let s2 = singular_values(&a.adjoint()).unwrap();
        assert_eq!(s1.len(), 2);
        for (x, y) in s1.values.iter().zip(&s2.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn bidiagonal_with_zero_diagonal() {
        // Interior and trailing zeros on the diagonal exercise both chase paths.
        for d0 in [[1.0, 0.0, 2.0, 3.0], [1.0, 2.0, 3.0, 0.0], [0.0, 1.0, 1.0, 1.0]] {
            let mut a = Matrix::<f64>::zeros(4, 4);
            for i in 0..4 {
                a[(i, i)] = d0[i];
                if i < 3 {
                    a[(i, i + 1)] = 0.5 + i as f64;
                }
            }
            let s = singular_values(&a).unwrap();
            let g = a.gram();
            let ev = crate::spectral::eigh::hermitian_eigenvalues(&g).unwrap();
            // Compare squares: the Gram route cannot resolve a zero σ better than √ε.
            let scale = s.values[0] * s.values[0];
            for (x, y) in s.values.iter().zip(ev.iter().rev()) {
                assert!((x * x - y).abs() < 1e-12 * scale, "{:?} vs {:?}", s.values, ev);
            }
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let a = Matrix::<f32>::from_rows(&[vec![4.0, 0.0], vec![3.0, -5.0]]).unwrap();
        let s = singular_values(&a).unwrap();
        let f: f32 = a.frobenius_norm_sqr();
        assert!((s.sum_of_squares() - f).abs() < 1e-4);
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = Matrix::<f64>::identity(2);
        a[(0, 1)] = f64::INFINITY;
        assert!(matches!(singular_values(&a), Err(Error::NonFinite { .. })));
    }
}
