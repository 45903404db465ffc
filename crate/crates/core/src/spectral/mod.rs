//! Dense linear algebra: SVD, Hermitian eigenvalues, LU inversion,
//! Householder QR, and the classical spectral inequalities.

pub mod checks;
pub mod eigh;
pub mod io;
pub mod lu;
pub mod matrix;
pub mod qr;
pub mod svd;

pub use checks::{
    check_hoffman_wielandt, check_hoffman_wielandt_singular, check_interlacing, check_weyl,
    condition_number, hard_edge_from_values, hard_edge_statistic, hermitization_defect, hermitize,
    inverse_duality_defect, norms, InequalityReport, InterlacingReport, Norms,
};
pub use eigh::hermitian_eigenvalues;
pub use io::{format_matrix, parse_matrix, read_matrix, write_matrix};
pub use lu::{inverse_residual, inverse_rows, invert, Lu};
pub use matrix::{dot, norm, AnyMatrix, Matrix};
pub use qr::{
    householder_qr, orthonormal_basis, orthonormal_complement, orthonormality_defect, project_onto,
    project_out, random_unitary, Qr,
};
pub use svd::{reciprocal_condition, singular_values, SingularSpectrum};
