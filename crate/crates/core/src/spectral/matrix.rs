use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::{Float as _, One, Zero};

use crate::error::{dims, Error, Result};
use crate::scalar::{Field, Scalar};

/// Dense `rows × cols` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(dims(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(dims("ragged rows"));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(dims("ragged columns"));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn from_diagonal(diag: &[S]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn field(&self) -> Field {
        S::FIELD
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [S] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self::from_fn(self.rows, indices.len(), |i, j| self[(i, indices[j])])
    }

    /// Rows of `self` followed by rows of `below`.
    pub fn stack(&self, below: &Self) -> Result<Self> {
        if self.cols != below.cols {
            return Err(dims(format!(
                "cannot stack {}x{} on {}x{}",
                self.rows, self.cols, below.rows, below.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(Self {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == S::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.cols {
            return Err(dims(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot_unconj(self.row(i), x)).collect())
    }

    /// `A* A`.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut out = Self::zeros(n, n);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..n {
                let ai = row[i].conj();
                if ai == S::zero() {
                    continue;
                }
                let out_row = &mut out.data[i * n..(i + 1) * n];
                for (o, &aj) in out_row.iter_mut().zip(row) {
                    *o += ai * aj;
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(S, S) -> S) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(dims(format!(
                "shape {:?} against {:?}",
                self.shape(),
                rhs.shape()
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn scaled(&self, s: S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn frobenius_norm_sqr(&self) -> S::Real {
        self.data.iter().map(|a| a.abs_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> S::Real {
        self.frobenius_norm_sqr().sqrt()
    }

    /// Max absolute column sum.
    pub fn one_norm(&self) -> S::Real {
        let mut sums = vec![S::Real::zero(); self.cols];
        for i in 0..self.rows {
            for (s, a) in sums.iter_mut().zip(self.row(i)) {
                *s += a.modulus();
            }
        }
        sums.into_iter().fold(S::Real::zero(), S::Real::max)
    }

    pub fn is_self_adjoint(&self, tol: S::Real) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.frobenius_norm().max(S::Real::one());
        (0..self.rows).all(|i| {
            (i..self.cols).all(|j| (self[(i, j)] - self[(j, i)].conj()).modulus() <= tol * scale)
        })
    }

    pub fn check_finite(&self) -> Result<()> {
        match self.data.iter().position(|a| !a.is_finite()) {
            None => Ok(()),
            Some(p) => Err(Error::NonFinite {
                row: p / self.cols.max(1),
                col: p % self.cols.max(1),
            }),
        }
    }

    /// Lifts a real matrix into the complex field or converts precision.
    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix whose field is only known at runtime (files, configs, the CLI).
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

impl AnyMatrix {
    pub fn field(&self) -> Field {
        match self {
            AnyMatrix::Real(_) => Field::Real,
            AnyMatrix::Complex(_) => Field::Complex,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            AnyMatrix::Real(a) => a.shape(),
            AnyMatrix::Complex(a) => a.shape(),
        }
    }

    /// The matrix over `C`, lifting real entries.
    pub fn to_complex(&self) -> Matrix<Complex64> {
        match self {
            AnyMatrix::Real(a) => a.map(|x| Complex64::new(x, 0.0)),
            AnyMatrix::Complex(a) => a.clone(),
        }
    }

    pub fn as_real(&self) -> Result<&Matrix<f64>> {
        match self {
            AnyMatrix::Real(a) => Ok(a),
            AnyMatrix::Complex(_) => Err(Error::FieldMismatch {
                expected: Field::Real,
                found: Field::Complex,
            }),
        }
    }

    pub fn as_complex(&self) -> Result<&Matrix<Complex64>> {
        match self {
            AnyMatrix::Complex(a) => Ok(a),
            AnyMatrix::Real(_) => Err(Error::FieldMismatch {
                expected: Field::Complex,
                found: Field::Real,
            }),
        }
    }
}

impl From<Matrix<f64>> for AnyMatrix {
    fn from(a: Matrix<f64>) -> Self {
        AnyMatrix::Real(a)
    }
}

impl From<Matrix<Complex64>> for AnyMatrix {
    fn from(a: Matrix<Complex64>) -> Self {
        AnyMatrix::Complex(a)
    }
}

/// Runs a generic computation on whichever concrete matrix is inside.
#[macro_export]
macro_rules! with_matrix {
    ($any:expr, $a:ident => $body:expr) => {
        match $any {
            $crate::spectral::AnyMatrix::Real($a) => $body,
            $crate::spectral::AnyMatrix::Complex($a) => $body,
        }
    };
}

/// Hermitian inner product `Σ conj(x_k) y_k`.
#[inline]
pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

/// Bilinear product `Σ x_k y_k`.
#[inline]
pub fn dot_unconj<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (&a, &b)| acc + a * b)
}

pub fn norm<S: Scalar>(x: &[S]) -> S::Real {
    x.iter().map(|a| a.abs_sqr()).sum::<S::Real>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_and_adjoint() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let b = a.matmul(&Matrix::identity(2)).unwrap();
        assert_eq!(a, b);
        let c = a.matmul(&a.transpose()).unwrap();
        assert_eq!(c.as_slice(), &[5.0, 11.0, 11.0, 25.0]);
        assert!(a.matmul(&Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn gram_matches_adjoint_product() {
        let a = Matrix::from_fn(3, 2, |i, j| Complex64::new(i as f64 + 1.0, j as f64 - 0.5));
        let g = a.gram();
        let h = a.adjoint().matmul(&a).unwrap();
        assert!(g.sub(&h).unwrap().frobenius_norm() < 1e-14);
        assert!(g.is_self_adjoint(1e-14));
    }

    #[test]
    fn finite_check_reports_position() {
        let mut a = Matrix::<f64>::zeros(2, 3);
        a[(1, 2)] = f64::NAN;
        match a.check_finite() {
            Err(Error::NonFinite { row: 1, col: 2 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
