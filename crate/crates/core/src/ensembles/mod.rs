//! Normalized atoms, random streams, and matrix ensembles.

pub mod atom;
pub mod rng;
pub mod spec;

pub use atom::{
    check_normalization, empirical_moment, sample_atom, truncate_renormalize, AtomDistribution,
    AtomKind, Estimate, NormalizationReport, Truncation,
};
pub use rng::{DrawRng, RngStream, StreamCursor};
pub use spec::{sample_matrix, sample_matrix_as, AtomGrid, EnsembleSpec, EntryPlan, MatrixSample};
