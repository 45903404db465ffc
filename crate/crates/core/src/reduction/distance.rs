//! Distances from columns to the hyperplanes of the others, their duality
//! with the rows of the inverse, and the correlation bound between them.

use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{sample_matrix_as, AtomDistribution, EnsembleSpec, RngStream};
use crate::error::{invalid, Result};
use crate::harness::ecdf::EmpiricalCdf;
use crate::limitlaws::LimitLaw;
use crate::scalar::{Field, Real, Scalar};
use crate::spectral::{
    dot, inverse_rows, norm, orthonormal_basis, orthonormal_complement, project_onto, project_out,
    InequalityReport, Matrix,
};

/// Tolerance of the duality `d_i·|R_i| = 1`.
pub const DUALITY_TOL: f64 = 1e-8;

/// `dist(x, span(columns of others))`.
pub fn distance_to_span<S: Scalar>(x: &[S], others: &Matrix<S>) -> Result<f64> {
    if others.cols() == 0 {
        return Ok(norm(x).to_f64_lossy());
    }
    let q = orthonormal_basis(others)?;
    Ok(norm(&project_out(&q, x)).to_f64_lossy())
}

/// `d_i = dist(X_i, span{X_j : j ≠ i})` by projecting out the other columns.
pub fn hyperplane_distance<S: Scalar>(a: &Matrix<S>, i: usize) -> Result<f64> {
    let n = a.cols();
    if i >= n {
        return Err(invalid(format!("column {i} out of range for {n} columns")));
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    distance_to_span(&a.column(i), &a.select_columns(&others))
}

/// `d_1` through the unit normal of the last `n − 1` columns: `|⟨ν, X_1⟩|`.
pub fn first_column_distance<S: Scalar>(a: &Matrix<S>) -> Result<f64> {
    let n = a.cols();
    if n == 0 || a.rows() != n {
        return Err(invalid(format!("need a nonempty square matrix, got {:?}", a.shape())));
    }
    let normal = orthonormal_complement(&a.select_columns(&(1..n).collect::<Vec<_>>()))?;
    Ok(dot(&normal.column(0), &a.column(0)).modulus().to_f64_lossy())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceReport {
    /// `d_i` from least-squares residuals.
    pub geometric: Vec<f64>,
    /// `1/|R_i|` from the rows of the inverse.
    pub algebraic: Vec<f64>,
    /// `max_i |d_i·|R_i| − 1|`.
    pub duality_defect: f64,
    pub holds: bool,
}

/// All `n` hyperplane distances, computed geometrically and algebraically.
pub fn distances_to_hyperplanes<S: Scalar>(a: &Matrix<S>) -> Result<DistanceReport> {
    if !a.is_square() {
        return Err(invalid(format!("need a square matrix, got {:?}", a.shape())));
    }
    let rows = inverse_rows(a)?;
    let row_norms: Vec<f64> = rows.iter().map(|r| norm(r).to_f64_lossy()).collect();
    let geometric = (0..a.cols())
        .map(|i| hyperplane_distance(a, i))
        .collect::<Result<Vec<_>>>()?;
    let duality_defect = geometric
        .iter()
        .zip(&row_norms)
        .map(|(d, r)| (d * r - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(DistanceReport {
        algebraic: row_norms.iter().map(|r| r.recip()).collect(),
        geometric,
        duality_defect,
        holds: duality_defect <= DUALITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub l: usize,
    pub j: usize,
    /// `|π_{L,j}(X_i)|` for `i = 1, …, L` and then `i = j`.
    pub projected_norms: Vec<f64>,
    /// `d_1, …, d_L`.
    pub leading_distances: Vec<f64>,
    /// `bound ≤ d_j`.
    pub inequality: InequalityReport,
}

/// Checks `d_j ≥ |π(X_j)| / (1 + Σ_{i≤L} |π(X_i)|/d_i)` where `π` projects
/// onto the complement of `X_{L+1}, …, X_{j−1}, X_{j+1}, …, X_n`. Indices are
/// one-based as in the statement: `1 ≤ L < j ≤ n`.
pub fn correlation_bound_check<S: Scalar>(a: &Matrix<S>, l: usize, j: usize) -> Result<CorrelationReport> {
    let n = a.cols();
    if !a.is_square() || l == 0 || l >= j || j > n {
        return Err(invalid(format!("need 1 <= L < j <= n, got L={l}, j={j}, n={n}")));
    }
    let rows = inverse_rows(a)?;
    let d: Vec<f64> = rows.iter().map(|r| norm(r).to_f64_lossy().recip()).collect();
    let excluded: Vec<usize> = (l..n).filter(|&c| c != j - 1).collect();
    let q = orthonormal_complement(&a.select_columns(&excluded))?;
    let proj = |c: usize| norm(&project_onto(&q, &a.column(c))).to_f64_lossy();
    let mut projected_norms: Vec<f64> = (0..l).map(proj).collect();
    let pj = proj(j - 1);
    let denom = 1.0 + projected_norms.iter().zip(&d).map(|(p, di)| p / di).sum::<f64>();
    projected_norms.push(pj);
    Ok(CorrelationReport {
        l,
        j,
        projected_norms,
        leading_distances: d[..l].to_vec(),
        inequality: InequalityReport::new(pj / denom, d[j - 1]),
    })
}

/// Law that `d_1` follows for a gaussian atom: `|g_F|`.
pub fn distance_reference_law(field: Field) -> LimitLaw {
    match field {
        Field::Real => LimitLaw::HalfNormal,
        Field::Complex => LimitLaw::ComplexModulus,
    }
}

fn distance_trial<S: Scalar>(spec: &EnsembleSpec, stream: &RngStream) -> Result<f64> {
    first_column_distance(&sample_matrix_as::<S>(spec, stream))
}

/// `d_1` over `trials` iid `n × n` matrices with entries from `atom`;
/// trial `t` uses `stream.trial(t)`.
pub fn distance_distribution_experiment(
    atom: &AtomDistribution,
    n: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<EmpiricalCdf> {
    let spec = EnsembleSpec::square(n, atom.clone())?;
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let st = stream.trial(t);
            match atom.field {
                Field::Real => distance_trial::<f64>(&spec, &st),
                Field::Complex => distance_trial::<num_complex::Complex64>(&spec, &st),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    EmpiricalCdf::new(samples)
}
