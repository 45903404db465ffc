//! Squaring up an `(n − l) × n` matrix with orthonormal dummy rows.

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::{dot, norm, orthonormal_complement, singular_values, Matrix};

/// Tolerance on the dummy-row certificates.
pub const DUMMY_ROW_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct RectangularReduction<S> {
    /// `n × n`: the `l` dummy rows, then the rows of `A`.
    pub matrix: Matrix<S>,
    pub dummy_rows: usize,
    /// Largest of `|‖u‖ − 1|`, `|⟨u, u'⟩|` and `|⟨u, a⟩|/‖a‖` over dummy rows
    /// `u ≠ u'` and rows `a` of `A`.
    pub defect: f64,
}

/// Prepends an orthonormal basis of the complement of the row space of `a`.
/// Since the new rows are orthogonal to the old, the singular values of the
/// result are those of `a` together with `l` ones.
pub fn rectangular_reduce<S: Scalar>(a: &Matrix<S>) -> Result<RectangularReduction<S>> {
    let (m, n) = a.shape();
    if m > n {
        return Err(Error::Dimension(format!("need at most as many rows as columns, got {m}x{n}")));
    }
    // Columns of Aᵀ are the rows of A; a vector orthogonal to all of them in
    // the conjugated inner product is a row orthogonal to every row of A.
    let q = orthonormal_complement(&a.transpose())?;
    let l = n - m;
    let dummy = q.transpose();
    let matrix = if l == 0 { a.clone() } else { dummy.stack(a)? };

    let mut defect: f64 = 0.0;
    for i in 0..l {
        let u = dummy.row(i);
        defect = defect.max((norm(u).to_f64_lossy() - 1.0).abs());
        for k in i + 1..l {
            defect = defect.max(dot(u, dummy.row(k)).modulus().to_f64_lossy());
        }
        for r in 0..m {
            let row = a.row(r);
            let rn = norm(row).to_f64_lossy();
            if rn > 0.0 {
                defect = defect.max(dot(row, u).modulus().to_f64_lossy() / rn);
            }
        }
    }
    if defect > DUMMY_ROW_TOL {
        return Err(Error::RankDeficient(format!("dummy rows fail certification, defect {defect:e}")));
    }
    Ok(RectangularReduction {
        matrix,
        dummy_rows: l,
        defect,
    })
}

/// `√n·σ_{n−l}(A)` for an `(n − l) × n` matrix, `n` the column count.
pub fn rectangular_statistic<S: Scalar>(a: &Matrix<S>) -> Result<f64> {
    let spec = singular_values(a)?;
    Ok((a.cols() as f64).sqrt() * spec.min().to_f64_lossy())
}
