//! Hard-edge spectral statistics of random matrices.
//!
//! The crate samples iid and non-iid ensembles, computes singular spectra
//! with its own dense SVD, evaluates the limiting hard-edge laws, and runs
//! Monte Carlo experiments comparing the two.

pub mod cltframe;
pub mod ensembles;
pub mod error;
pub mod harness;
pub mod limitlaws;
pub mod reduction;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{Field, Real, Scalar};

pub use num_complex::{Complex, Complex32, Complex64};

pub type RealMatrix = spectral::Matrix<f64>;
pub type ComplexMatrix = spectral::Matrix<Complex64>;
pub type RealMatrix32 = spectral::Matrix<f32>;
pub type ComplexMatrix32 = spectral::Matrix<Complex32>;
pub type Spectrum = spectral::SingularSpectrum<f64>;
