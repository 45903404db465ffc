//! Projecting a matrix onto the complement of its trailing columns.
//!
//! With `V` the orthogonal complement of `span(X_{s+1}, …, X_n)` and `π` the
//! projection onto `V ≅ F^s`, the `s × s` matrix `M = (π X_1 ⋯ π X_s)` and
//! the first `s` rows `B` of `A⁻¹` satisfy `BB* = M⁻¹(M⁻¹)*`.

use serde::Serialize;

use crate::ensembles::RngStream;
use crate::error::{invalid, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::{
    dot, invert, norm, orthonormal_complement, orthonormality_defect, random_unitary,
    singular_values, Matrix,
};

/// Tolerance for both projection identities.
pub const PROJECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionCertificate {
    /// `‖Q*Q − I‖_F` of the basis.
    pub basis_defect: f64,
    /// `max_{j>s} max_q |⟨q, X_j⟩| / |X_j|`.
    pub trailing_overlap: f64,
    /// `‖BB* − M⁻¹(M⁻¹)*‖_F / max(1, ‖BB*‖_F)`.
    pub gram_residual: f64,
    /// `max_j |σ_j(B)·σ_{s−j+1}(M) − 1|`.
    pub sigma_residual: f64,
}

impl ProjectionCertificate {
    pub fn holds(&self, s: usize) -> bool {
        self.basis_defect <= 1e-10
            && self.trailing_overlap <= PROJECTION_TOL
            && self.gram_residual <= PROJECTION_TOL * s as f64
            && self.sigma_residual <= PROJECTION_TOL
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionWitness<S> {
    pub s: usize,
    /// `n × s`, orthonormal columns spanning `V`.
    pub basis: Matrix<S>,
    /// `M`, whose columns are the coordinates of `π X_1, …, π X_s`.
    pub projected: Matrix<S>,
    /// `B`, the first `s` rows of `A⁻¹`.
    pub sampled: Matrix<S>,
    pub certificate: ProjectionCertificate,
}

/// Orthonormal basis of `span(X_{s+1}, …, X_n)^⊥`, as columns.
pub fn trailing_complement<S: Scalar>(a: &Matrix<S>, s: usize) -> Result<Matrix<S>> {
    let n = a.cols();
    if s == 0 || s > n || a.rows() != n {
        return Err(invalid(format!("need a square matrix and 1 <= s <= n, got s={s}, shape {:?}", a.shape())));
    }
    orthonormal_complement(&a.select_columns(&(s..n).collect::<Vec<_>>()))
}

/// Builds `M` and `B` with the deterministic complement basis.
pub fn build_projection<S: Scalar>(a: &Matrix<S>, s: usize) -> Result<ProjectionWitness<S>> {
    build_projection_with(a, s, None)
}

/// As [`build_projection`]; with `rotate`, the basis is turned by a Haar
/// unitary drawn from that stream.
pub fn build_projection_with<S: Scalar>(
    a: &Matrix<S>,
    s: usize,
    rotate: Option<&RngStream>,
) -> Result<ProjectionWitness<S>> {
    let n = a.cols();
    let mut basis = trailing_complement(a, s)?;
    if let Some(stream) = rotate {
        basis = basis.matmul(&random_unitary::<S>(s, stream))?;
    }
    let inv = invert(a)?;
    let leading: Vec<usize> = (0..s).collect();
    let projected = basis.adjoint().matmul(&a.select_columns(&leading))?;
    let sampled = inv.select_rows(&leading);

    let m_inv = invert(&projected)?;
    let bb = sampled.matmul(&sampled.adjoint())?;
    let mm = m_inv.matmul(&m_inv.adjoint())?;
    let bb_norm = bb.frobenius_norm().to_f64_lossy();
    let gram_residual = bb.sub(&mm)?.frobenius_norm().to_f64_lossy() / bb_norm.max(1.0);

    let sb = singular_values(&sampled)?;
    let sm = singular_values(&projected)?;
    let sigma_residual = (1..=s)
        .map(|j| (sb.get(j).to_f64_lossy() * sm.get(s - j + 1).to_f64_lossy() - 1.0).abs())
        .fold(0.0, f64::max);

    let columns = basis.column_vectors();
    let mut trailing_overlap: f64 = 0.0;
    for j in s..n {
        let x = a.column(j);
        let xn = norm(&x).to_f64_lossy();
        if xn == 0.0 {
            continue;
        }
        for q in &columns {
            trailing_overlap = trailing_overlap.max(dot(q, &x).modulus().to_f64_lossy() / xn);
        }
    }

    let certificate = ProjectionCertificate {
        basis_defect: orthonormality_defect(&basis).to_f64_lossy(),
        trailing_overlap,
        gram_residual,
        sigma_residual,
    };
    Ok(ProjectionWitness {
        s,
        basis,
        projected,
        sampled,
        certificate,
    })
}

/// Default delocalization exponent `c` in the threshold `n^{−c}`.
pub const DELOCALIZATION_EXPONENT: f64 = 1.0 / 20.0;

/// `max_i |P_V e_i|` for `V = span(X_{s+1}, …, X_n)^⊥`: the largest coordinate
/// any unit vector of `V` can have. For `s = 1` it is `‖v‖_∞` of the unit
/// normal to the hyperplane of the last `n − 1` columns.
pub fn normal_vector_max_coordinate<S: Scalar>(a: &Matrix<S>, s: usize) -> Result<f64> {
    let q = trailing_complement(a, s)?;
    Ok((0..q.rows())
        .map(|i| norm(q.row(i)).to_f64_lossy())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_matrix_as, AtomDistribution, EnsembleSpec};
    use num_complex::Complex64;

    fn gaussian<S: Scalar>(n: usize, seed: u64) -> Matrix<S> {
        let atom = match S::FIELD {
            crate::scalar::Field::Real => AtomDistribution::real_gaussian(),
            crate::scalar::Field::Complex => AtomDistribution::complex_gaussian(),
        };
        let spec = EnsembleSpec::square(n, atom).unwrap();
        sample_matrix_as(&spec, &RngStream::new(seed, 0))
    }

    #[test]
    fn full_projection_is_a_basis_change() {
        let a = gaussian::<f64>(6, 1);
        let w = build_projection(&a, 6).unwrap();
        assert!(w.certificate.holds(6));
        let sa = singular_values(&a).unwrap();
        let sm = singular_values(&w.projected).unwrap();
        for (x, y) in sa.values.iter().zip(&sm.values) {
            assert!((x - y).abs() < 1e-10 * sa.max());
        }
    }

    #[test]
    fn single_column_recovers_distance_identity() {
        let a = gaussian::<Complex64>(7, 2);
        let w = build_projection(&a, 1).unwrap();
        let r1 = norm(w.sampled.row(0));
        // M is 1×1: |M| = dist(X₁, span(X₂, …, X_n)).
        let d = w.projected[(0, 0)].norm();
        assert!((r1 * d - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rotated_basis_keeps_identities() {
        let a = gaussian::<Complex64>(9, 3);
        let w = build_projection_with(&a, 4, Some(&RngStream::new(7, 7))).unwrap();
        assert!(w.certificate.holds(4), "{:?}", w.certificate);
    }

    #[test]
    fn rank_deficient_trailing_columns() {
        let mut a = Matrix::<f64>::identity(4);
        a[(3, 3)] = 0.0;
        a[(2, 3)] = 1.0;
        assert!(build_projection(&a, 2).is_err());
        assert!(build_projection(&Matrix::<f64>::identity(3), 0).is_err());
    }

    #[test]
    fn identity_normal_is_localized() {
        let i = Matrix::<f64>::identity(5);
        assert!((normal_vector_max_coordinate(&i, 1).unwrap() - 1.0).abs() < 1e-14);
        let v = normal_vector_max_coordinate(&gaussian::<f64>(60, 4), 1).unwrap();
        assert!(v < 60f64.powf(-DELOCALIZATION_EXPONENT));
    }
}
