//! Counting singular values near the hard edge.

use std::f64::consts::PI;

use crate::error::{dims, invalid, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::{singular_values, Matrix};

/// `n^{1/2 − c}`, the cutoff below which a singular value counts as small.
pub fn small_value_cutoff(n: usize, c: f64) -> f64 {
    (n as f64).powf(0.5 - c)
}

/// `0.5·(2/π)·n^{1−c}`: half the count predicted by the small-`t` mass
/// `F_MP(t) ≈ (2/π)√t` at `t = n^{−2c}`.
pub fn small_count_target(n: usize, c: f64) -> f64 {
    0.5 * (2.0 / PI) * (n as f64).powf(1.0 - c)
}

/// `#{i : σ_i ≤ n^{1/2−c}}` from precomputed values.
pub fn count_below<T: Real>(values: &[T], n: usize, c: f64) -> usize {
    let cut = small_value_cutoff(n, c);
    values.iter().filter(|s| s.to_f64_lossy() <= cut).count()
}

/// `Y_c = #{i : σ_i(A) ≤ n^{1/2−c}}` for square `A`, `0 < c < 1/2`.
pub fn count_small_singular_values<S: Scalar>(a: &Matrix<S>, c: f64) -> Result<usize> {
    if !a.is_square() {
        return Err(dims(format!("need a square matrix, got {:?}", a.shape())));
    }
    if !(c > 0.0 && c < 0.5) {
        return Err(invalid(format!("need 0 < c < 1/2, got {c}")));
    }
    let spec = singular_values(a)?;
    Ok(count_below(&spec.values, a.rows(), c))
}
