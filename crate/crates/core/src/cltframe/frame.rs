//! Normalized tight frames: `v_1, …, v_n ∈ F^N` with `Σ v_j v_j* = I_N`.

use serde::Serialize;

use crate::ensembles::{AtomDistribution, RngStream};
use crate::error::{dims, invalid, Error, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::{householder_qr, norm, Matrix};

/// Tolerance of both frame identities.
pub const FRAME_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct TightFrame<S> {
    dim: usize,
    vectors: Vec<Vec<S>>,
}

impl<S: Scalar> TightFrame<S> {
    /// Wraps the vectors without checking the frame identity; see
    /// [`check_tight_frame`].
    pub fn from_vectors(dim: usize, vectors: Vec<Vec<S>>) -> Result<Self> {
        if dim == 0 || vectors.is_empty() {
            return Err(invalid("a frame needs a positive dimension and at least one vector"));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(dims(format!("frame vector of length {} in dimension {dim}", v.len())));
        }
        Ok(Self { dim, vectors })
    }

    /// Columns of an `N × n` matrix.
    pub fn from_columns(m: &Matrix<S>) -> Result<Self> {
        Self::from_vectors(m.rows(), m.column_vectors())
    }

    pub fn standard_basis(dim: usize) -> Result<Self> {
        Self::from_columns(&Matrix::identity(dim))
    }

    /// `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<S>] {
        &self.vectors
    }

    /// `max_j |v_j|`.
    pub fn max_norm(&self) -> f64 {
        self.vectors
            .iter()
            .map(|v| norm(v).to_f64_lossy())
            .fold(0.0, f64::max)
    }

    /// `Σ_j v_j v_j*`.
    pub fn frame_operator(&self) -> Matrix<S> {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for v in &self.vectors {
            for i in 0..self.dim {
                for (o, &vk) in out.row_mut(i).iter_mut().zip(v) {
                    *o += v[i] * vk.conj();
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameReport {
    /// `‖Σ v_j v_j* − I_N‖_F`.
    pub residual: f64,
    /// `|Σ |v_j|² − N|`.
    pub trace_gap: f64,
    pub max_norm: f64,
    pub holds: bool,
}

pub fn check_tight_frame<S: Scalar>(frame: &TightFrame<S>) -> FrameReport {
    let residual = frame
        .frame_operator()
        .sub(&Matrix::identity(frame.dim()))
        .expect("frame operator is N x N")
        .frobenius_norm()
        .to_f64_lossy();
    let trace: f64 = frame
        .vectors()
        .iter()
        .map(|v| norm(v).to_f64_lossy().powi(2))
        .sum();
    let trace_gap = (trace - frame.dim() as f64).abs();
    FrameReport {
        residual,
        trace_gap,
        max_norm: frame.max_norm(),
        holds: residual <= FRAME_TOL && trace_gap <= FRAME_TOL,
    }
}

/// Columns of a random `N × n` partial isometry: the orthonormalized rows
/// of an `N × n` gaussian matrix.
pub fn random_tight_frame<S: Scalar>(n: usize, dim: usize, stream: &RngStream) -> Result<TightFrame<S>> {
    if dim == 0 || n < dim {
        return Err(invalid(format!("need n >= N >= 1, got n={n}, N={dim}")));
    }
    let atom = gaussian_atom::<S>();
    // n × N gaussian; the first N columns of its Q have orthonormal columns,
    // so their transpose has orthonormal rows.
    let g = Matrix::from_fn(n, dim, |i, j| {
        atom.sample_scalar::<S>(&mut stream.draw((i * dim + j) as u64))
    });
    let qr = householder_qr(&g);
    qr.check_full_column_rank()?;
    let q = qr.q.select_columns(&(0..dim).collect::<Vec<_>>());
    TightFrame::from_columns(&q.transpose())
}

pub(crate) fn gaussian_atom<S: Scalar>() -> AtomDistribution {
    match S::FIELD {
        crate::scalar::Field::Real => AtomDistribution::real_gaussian(),
        crate::scalar::Field::Complex => AtomDistribution::complex_gaussian(),
    }
}

pub(crate) fn check_atom_field<S: Scalar>(atom: &AtomDistribution) -> Result<()> {
    if atom.field != S::FIELD {
        return Err(Error::FieldMismatch {
            expected: S::FIELD,
            found: atom.field,
        });
    }
    Ok(())
}

/// One draw of `S = a_1 v_1 + ⋯ + a_n v_n`; coefficient `j` uses draw `j`.
pub fn frame_sample<S: Scalar>(
    frame: &TightFrame<S>,
    atom: &AtomDistribution,
    stream: &RngStream,
) -> Result<Vec<S>> {
    check_atom_field::<S>(atom)?;
    Ok(frame_sample_unchecked(frame, atom, stream))
}

pub(crate) fn frame_sample_unchecked<S: Scalar>(
    frame: &TightFrame<S>,
    atom: &AtomDistribution,
    stream: &RngStream,
) -> Vec<S> {
    let mut out = vec![S::zero(); frame.dim()];
    for (j, v) in frame.vectors().iter().enumerate() {
        let a: S = atom.sample_scalar(&mut stream.draw(j as u64));
        for (o, &vk) in out.iter_mut().zip(v) {
            *o += a * vk;
        }
    }
    out
}
