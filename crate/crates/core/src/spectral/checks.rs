//! Derived spectral quantities and the classical perturbation inequalities
//! as executable checks.

use serde::Serialize;

use crate::error::{dims, invalid, Error, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::eigh::hermitian_eigenvalues;
use crate::spectral::matrix::Matrix;
use crate::spectral::svd::singular_values;

/// Relative slack granted to floating point when asserting an inequality.
const REL_SLACK: f64 = 1e-10;
const ABS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub frobenius: f64,
    pub operator: f64,
}

/// `‖A‖_F = tr(AA*)^{1/2}` and `‖A‖_op = σ₁(A)`.
pub fn norms<S: Scalar>(a: &Matrix<S>) -> Result<Norms> {
    let spec = singular_values(a)?;
    Ok(Norms {
        frobenius: a.frobenius_norm().to_f64_lossy(),
        operator: spec.max().to_f64_lossy(),
    })
}

/// `[[0, M], [M*, 0]]`, whose eigenvalues are `±σ_i(M)`.
pub fn hermitize<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    if !m.is_square() {
        return Err(dims(format!("hermitization needs a square matrix, got {:?}", m.shape())));
    }
    let n = m.rows();
    Ok(Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => m[(i, j - n)],
        (false, true) => m[(j, i - n)].conj(),
        _ => S::zero(),
    }))
}

/// `κ(A) = σ₁(A)/σ_n(A)`.
pub fn condition_number<S: Scalar>(a: &Matrix<S>) -> Result<f64> {
    if !a.is_square() {
        return Err(dims(format!("condition number needs a square matrix, got {:?}", a.shape())));
    }
    let spec = singular_values(a)?;
    let (top, bottom) = (spec.max().to_f64_lossy(), spec.min().to_f64_lossy());
    if bottom <= 0.0 || !(top / bottom).is_finite() {
        return Err(Error::Singular { rcond: 0.0 });
    }
    Ok(top / bottom)
}

/// `(n σ_n², n σ_{n−1}², …, n σ_{n−k+1}²)` for a square `n × n` matrix.
pub fn hard_edge_statistic<S: Scalar>(a: &Matrix<S>, k: usize) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(dims(format!("hard-edge statistic needs a square matrix, got {:?}", a.shape())));
    }
    let n = a.rows();
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let spec = singular_values(a)?;
    Ok(hard_edge_from_values(&spec.values, n, k))
}

/// Same as [`hard_edge_statistic`] from already computed nonincreasing values.
pub fn hard_edge_from_values<T: Real>(values: &[T], n: usize, k: usize) -> Vec<f64> {
    values
        .iter()
        .rev()
        .take(k)
        .map(|s| n as f64 * s.to_f64_lossy().powi(2))
        .collect()
}

/// Both sides of an inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs + REL_SLACK * rhs.abs() + ABS_SLACK,
        }
    }

    /// `rhs − lhs`; negative when violated.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

fn same_shape<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(dims(format!("shapes {:?} and {:?} differ", a.shape(), b.shape())));
    }
    Ok(())
}

/// Hoffman–Wielandt for self-adjoint `M, M'`:
/// `Σ_i (λ_i(M) − λ_i(M'))² ≤ ‖M − M'‖_F²` with both spectra sorted.
pub fn check_hoffman_wielandt<S: Scalar>(m: &Matrix<S>, m2: &Matrix<S>) -> Result<InequalityReport> {
    same_shape(m, m2)?;
    let a = hermitian_eigenvalues(m)?;
    let b = hermitian_eigenvalues(m2)?;
    let lhs: f64 = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x.to_f64_lossy() - y.to_f64_lossy()).powi(2))
        .sum();
    let rhs = m.sub(m2)?.frobenius_norm_sqr().to_f64_lossy();
    Ok(InequalityReport::new(lhs, rhs))
}

/// Singular-value form for arbitrary `A, B` of equal shape:
/// `Σ_i (σ_i(A) − σ_i(B))² ≤ ‖A − B‖_F²`, obtained by applying
/// Hoffman–Wielandt to the hermitizations.
pub fn check_hoffman_wielandt_singular<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<InequalityReport> {
    same_shape(a, b)?;
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    let lhs: f64 = sa
        .values
        .iter()
        .zip(&sb.values)
        .map(|(x, y)| (x.to_f64_lossy() - y.to_f64_lossy()).powi(2))
        .sum();
    let rhs = a.sub(b)?.frobenius_norm_sqr().to_f64_lossy();
    Ok(InequalityReport::new(lhs, rhs))
}

/// Weyl: `max_j |σ_j(A) − σ_j(B)| ≤ ‖A − B‖_op`.
pub fn check_weyl<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<InequalityReport> {
    same_shape(a, b)?;
    let sa = singular_values(a)?;
    let sb = singular_values(b)?;
    let lhs = sa
        .values
        .iter()
        .zip(&sb.values)
        .map(|(x, y)| (x.to_f64_lossy() - y.to_f64_lossy()).abs())
        .fold(0.0, f64::max);
    let rhs = singular_values(&a.sub(b)?)?.max().to_f64_lossy();
    Ok(InequalityReport::new(lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    pub rows_kept: usize,
    /// Largest violation of either side over all `j` (≤ 0 when the law holds).
    pub worst_violation: f64,
    pub holds: bool,
}

/// Cauchy interlacing for a row subset `A'` (`r` of `m` rows):
/// `σ_j(A) ≥ σ_j(A') ≥ σ_{j+m−r}(A)`, with `σ_j = 0` past `min(m, n)`.
pub fn check_interlacing<S: Scalar>(a: &Matrix<S>, rows: &[usize]) -> Result<InterlacingReport> {
    let (m, _) = a.shape();
    if let Some(&bad) = rows.iter().find(|&&i| i >= m) {
        return Err(invalid(format!("row {bad} out of range for {m} rows")));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != rows.len() {
        return Err(invalid("row subset has repeated indices"));
    }
    let sub = a.select_rows(rows);
    let full = singular_values(a)?;
    let part = singular_values(&sub)?;
    let r = rows.len();
    let scale = full.max().to_f64_lossy();
    let tol = REL_SLACK * scale + ABS_SLACK;
    let mut worst = f64::NEG_INFINITY;
    for j in 1..=part.len() {
        let mid = part.get(j).to_f64_lossy();
        let upper = full.get(j).to_f64_lossy();
        let lower = full.get(j + m - r).to_f64_lossy();
        worst = worst.max(mid - upper).max(lower - mid);
    }
    if part.is_empty() {
        worst = 0.0;
    }
    Ok(InterlacingReport {
        rows_kept: r,
        worst_violation: worst,
        holds: worst <= tol,
    })
}

/// Largest deviation between the eigenvalues of the hermitization and `±σ_i(M)`.
pub fn hermitization_defect<S: Scalar>(m: &Matrix<S>) -> Result<f64> {
    let w = hermitize(m)?;
    let ev = hermitian_eigenvalues(&w)?;
    let sv = singular_values(m)?;
    let mut expected: Vec<f64> = sv
        .values
        .iter()
        .flat_map(|&s| [s.to_f64_lossy(), -s.to_f64_lossy()])
        .collect();
    expected.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    Ok(ev
        .iter()
        .zip(&expected)
        .map(|(x, y)| (x.to_f64_lossy() - y).abs())
        .fold(0.0, f64::max))
}

/// Largest relative gap between `σ(A⁻¹)` and the reversed reciprocals of `σ(A)`.
pub fn inverse_duality_defect<S: Scalar>(a: &Matrix<S>, inv: &Matrix<S>) -> Result<f64> {
    let sa = singular_values(a)?;
    let si = singular_values(inv)?;
    Ok(sa
        .values
        .iter()
        .rev()
        .zip(&si.values)
        .map(|(&s, &t)| {
            let expect = s.to_f64_lossy().recip();
            (t.to_f64_lossy() - expect).abs() / expect
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn norms_examples() {
        let n = norms(&Matrix::<f64>::identity(3)).unwrap();
        assert!((n.frobenius - 3f64.sqrt()).abs() < 1e-15);
        assert!((n.operator - 1.0).abs() < 1e-15);
        let u = [1.0, 2.0, 2.0];
        let v = [0.0, 3.0, 4.0];
        let r1 = Matrix::from_fn(3, 3, |i, j| u[i] * v[j]);
        let n = norms(&r1).unwrap();
        assert!((n.frobenius - 15.0).abs() < 1e-12);
        assert!((n.operator - 15.0).abs() < 1e-12);
    }

    #[test]
    fn hermitize_examples() {
        let w = hermitize(&Matrix::from_rows(&[vec![1.0f64]]).unwrap()).unwrap();
        let ev = hermitian_eigenvalues(&w).unwrap();
        assert_eq!(ev, vec![-1.0, 1.0]);
        let w = hermitize(&Matrix::from_diagonal(&[2.0f64, 3.0])).unwrap();
        let ev = hermitian_eigenvalues(&w).unwrap();
        for (x, y) in ev.iter().zip([-3.0, -2.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-14);
        }
        let m = Matrix::from_fn(3, 3, |i, j| Complex64::new(i as f64 - j as f64, 1.0 + (i * j) as f64));
        assert!(hermitization_defect(&m).unwrap() < 1e-10);
    }

    #[test]
    fn condition_examples() {
        assert!((condition_number(&Matrix::<f64>::identity(4)).unwrap() - 1.0).abs() < 1e-15);
        assert!((condition_number(&Matrix::from_diagonal(&[10.0, 1.0])).unwrap() - 10.0).abs() < 1e-13);
        assert!(matches!(
            condition_number(&Matrix::from_diagonal(&[1.0, 0.0])),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn hard_edge_examples() {
        assert_eq!(hard_edge_statistic(&Matrix::<f64>::identity(2), 1).unwrap(), vec![2.0]);
        let d = Matrix::from_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(hard_edge_statistic(&d, 3).unwrap(), vec![3.0, 12.0, 27.0]);
        assert!(hard_edge_statistic(&d, 4).is_err());
        assert!(hard_edge_statistic(&Matrix::<f64>::zeros(2, 3), 1).is_err());
    }

    #[test]
    fn inequality_trivial_cases() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let r = check_hoffman_wielandt(&m, &m).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);
        // Sorted diagonal pairs are the equality case.
        let a = Matrix::from_diagonal(&[1.0, 4.0, 9.0]);
        let b = Matrix::from_diagonal(&[2.0, 3.0, 7.0]);
        let r = check_hoffman_wielandt(&a, &b).unwrap();
        assert!((r.lhs - r.rhs).abs() < 1e-12 && r.holds);
        let w = check_weyl(&a, &a).unwrap();
        assert_eq!((w.lhs, w.rhs), (0.0, 0.0));
        // Rank-one perturbation of the identity.
        let i = Matrix::<f64>::identity(3);
        let p = i.add(&Matrix::from_fn(3, 3, |r, c| if r == 0 && c == 0 { 0.7 } else { 0.0 })).unwrap();
        let w = check_weyl(&i, &p).unwrap();
        assert!((w.lhs - 0.7).abs() < 1e-12 && w.holds);
    }

    #[test]
    fn interlacing_trivial_cases() {
        let a = Matrix::from_fn(4, 3, |i, j| (i * 3 + j) as f64 + if i == j { 5.0 } else { 0.0 });
        let r = check_interlacing(&a, &[0, 1, 2, 3]).unwrap();
        assert!(r.holds && r.worst_violation.abs() < 1e-10);
        let mut z = a.clone();
        for j in 0..3 {
            z[(2, j)] = 0.0;
        }
        let full = singular_values(&z).unwrap();
        let part = singular_values(&z.select_rows(&[0, 1, 3])).unwrap();
        for (x, y) in full.values.iter().zip(&part.values) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(check_interlacing(&z, &[0, 1, 3]).unwrap().holds);
        assert!(check_interlacing(&a, &[0, 0]).is_err());
        assert!(check_interlacing(&a, &[7]).is_err());
    }
}
