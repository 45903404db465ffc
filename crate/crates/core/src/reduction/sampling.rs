//! Estimating the top singular value of a matrix from a few of its rows.

use serde::Serialize;

use crate::ensembles::{Estimate, RngStream};
use crate::error::{invalid, Result};
use crate::scalar::{Real, Scalar};
use crate::spectral::{invert, singular_values, Matrix};

/// How the `s` row indices are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SamplingMode {
    /// Independent uniform indices, repeats allowed.
    WithReplacement,
    /// Distinct indices; needs `s ≤ √n` unless every row is taken.
    WithoutReplacement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingEstimate {
    pub s: usize,
    pub indices: Vec<usize>,
    /// `√(n/s)·σ₁(B)`.
    pub estimate: f64,
    /// `σ₁` of the sampled matrix.
    pub truth: f64,
    /// `‖C*C − (n/s)B*B‖_F` for the sampled matrix `C`.
    pub frobenius_gap: f64,
    /// `Σ_k |R_k|⁴` over the rows of `C`.
    pub row_fourth_power_sum: f64,
}

impl SamplingEstimate {
    /// Chebyshev band: `|estimate² − truth²| ≤ k·√((n/s)·Σ|R_k|⁴)`.
    pub fn within_band(&self, n: usize, k: f64) -> bool {
        let radius = k * (n as f64 / self.s as f64 * self.row_fourth_power_sum).sqrt();
        (self.estimate.powi(2) - self.truth.powi(2)).abs() <= radius
    }
}

/// Draws `s` indices in `0..n`.
pub fn draw_indices(n: usize, s: usize, mode: SamplingMode, stream: &RngStream) -> Result<Vec<usize>> {
    if s == 0 || s > n {
        return Err(invalid(format!("need 1 <= s <= n, got s={s}, n={n}")));
    }
    let mut cursor = stream.cursor();
    match mode {
        SamplingMode::WithReplacement => Ok((0..s).map(|_| cursor.index(n)).collect()),
        SamplingMode::WithoutReplacement => {
            if s != n && s * s > n {
                return Err(invalid(format!(
                    "sampling without replacement needs s <= sqrt(n), got s={s}, n={n}"
                )));
            }
            // Partial Fisher–Yates.
            let mut pool: Vec<usize> = (0..n).collect();
            for i in 0..s {
                let j = i + cursor.index(n - i);
                pool.swap(i, j);
            }
            pool.truncate(s);
            Ok(pool)
        }
    }
}

/// `‖C*C − (n/s)B*B‖_F²` where `B` has rows `C_{k_1}, …, C_{k_s}`.
fn gap_sqr<S: Scalar>(gram: &Matrix<S>, c: &Matrix<S>, indices: &[usize]) -> f64 {
    let n = c.rows();
    let w = S::Real::of(n as f64 / indices.len() as f64);
    let mut diff = gram.clone();
    for &k in indices {
        let r = c.row(k);
        for i in 0..c.cols() {
            let ci = r[i].conj().scale(w);
            for (d, &rj) in diff.row_mut(i).iter_mut().zip(r) {
                *d -= ci * rj;
            }
        }
    }
    diff.frobenius_norm_sqr().to_f64_lossy()
}

fn row_fourth_powers<S: Scalar>(c: &Matrix<S>) -> f64 {
    (0..c.rows())
        .map(|k| {
            let r2: f64 = c.row(k).iter().map(|x| x.abs_sqr().to_f64_lossy()).sum();
            r2 * r2
        })
        .sum()
}

/// Samples rows of `c` directly.
pub fn sample_rows<S: Scalar>(
    c: &Matrix<S>,
    s: usize,
    mode: SamplingMode,
    stream: &RngStream,
) -> Result<SamplingEstimate> {
    let n = c.rows();
    let indices = draw_indices(n, s, mode, stream)?;
    let b = c.select_rows(&indices);
    let truth = singular_values(c)?.max().to_f64_lossy();
    let top = singular_values(&b)?.max().to_f64_lossy();
    Ok(SamplingEstimate {
        s,
        estimate: (n as f64 / s as f64).sqrt() * top,
        truth,
        frobenius_gap: gap_sqr(&c.gram(), c, &indices).sqrt(),
        row_fourth_power_sum: row_fourth_powers(c),
        indices,
    })
}

/// Estimates `σ₁(A⁻¹)` from `s` rows of `A⁻¹`.
pub fn sampling_estimator<S: Scalar>(
    a: &Matrix<S>,
    s: usize,
    mode: SamplingMode,
    stream: &RngStream,
) -> Result<SamplingEstimate> {
    sample_rows(&invert(a)?, s, mode, stream)
}

/// Both sides of `E‖C*C − (n/s)B*B‖_F² ≤ (n/s)Σ|R_k|⁴` for uniform
/// sampling with replacement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SecondMoment {
    /// The expectation, exact when `exhaustive`.
    pub lhs: f64,
    pub rhs: f64,
    /// `(n²/s) Σ_{ij} V_ij`, the variance formula for the same expectation.
    pub variance_formula: f64,
    /// Monte Carlo standard error of `lhs`; zero when exhaustive.
    pub std_error: f64,
    pub exhaustive: bool,
    pub tuples: u64,
}

impl SecondMoment {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-10) + 3.0 * self.std_error
    }
}

/// Largest number of index tuples enumerated exactly.
pub const MAX_EXHAUSTIVE_TUPLES: u64 = 1_000_000;
/// Monte Carlo repetitions when enumeration is out of reach.
pub const MONTE_CARLO_TUPLES: u64 = 4000;

/// Expectation over index tuples drawn with replacement. Exhaustive for
/// `n ≤ 8` and `nˢ ≤ 10⁶`, Monte Carlo over `stream` otherwise.
pub fn sampling_second_moment_oracle<S: Scalar>(
    c: &Matrix<S>,
    s: usize,
    stream: &RngStream,
) -> Result<SecondMoment> {
    let n = c.rows();
    if s == 0 || s > n {
        return Err(invalid(format!("need 1 <= s <= n, got s={s}, n={n}")));
    }
    let gram = c.gram();
    let rhs = n as f64 / s as f64 * row_fourth_powers(c);
    let tuples = (n as u64).checked_pow(s as u32).unwrap_or(u64::MAX);
    let exhaustive = n <= 8 && tuples <= MAX_EXHAUSTIVE_TUPLES;
    let (lhs, std_error, tuples) = if exhaustive {
        let mut idx = vec![0usize; s];
        let mut total = 0.0;
        for _ in 0..tuples {
            total += gap_sqr(&gram, c, &idx);
            for d in idx.iter_mut().rev() {
                *d += 1;
                if *d < n {
                    break;
                }
                *d = 0;
            }
        }
        (total / tuples as f64, 0.0, tuples)
    } else {
        let est = Estimate::from_samples((0..MONTE_CARLO_TUPLES).map(|t| {
            let idx = draw_indices(n, s, SamplingMode::WithReplacement, &stream.trial(t))
                .expect("s validated above");
            gap_sqr(&gram, c, &idx)
        }));
        (est.value, est.std_error, MONTE_CARLO_TUPLES)
    };
    Ok(SecondMoment {
        lhs,
        rhs,
        variance_formula: variance_formula(c, s),
        std_error,
        exhaustive,
        tuples,
    })
}

/// `(n²/s) Σ_{i,j} V_ij` with
/// `V_ij = (1/n)Σ_k |c_ki|²|c_kj|² − |(1/n)Σ_k conj(c_ki) c_kj|²`.
fn variance_formula<S: Scalar>(c: &Matrix<S>, s: usize) -> f64 {
    let n = c.rows() as f64;
    let p = c.cols();
    let mut total = 0.0;
    for i in 0..p {
        for j in 0..p {
            let mut quartic = 0.0;
            let mut mean = S::zero();
            for k in 0..c.rows() {
                let (a, b) = (c[(k, i)], c[(k, j)]);
                quartic += (a.abs_sqr() * b.abs_sqr()).to_f64_lossy();
                mean += a.conj() * b;
            }
            total += quartic / n - mean.abs_sqr().to_f64_lossy() / (n * n);
        }
    }
    n * n / s as f64 * total
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn mat(n: usize, seed: u64) -> Matrix<f64> {
        let stream = RngStream::new(seed, 0);
        Matrix::from_fn(n, n, |i, j| {
            use rand::Rng;
            stream.draw((i * n + j) as u64).random_range(-1.0..1.0)
        })
    }

    #[test]
    fn indices_in_range_and_distinct_without_replacement() {
        let st = RngStream::new(3, 1);
        let idx = draw_indices(100, 10, SamplingMode::WithoutReplacement, &st).unwrap();
        let mut d = idx.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), 10);
        assert!(idx.iter().all(|&i| i < 100));
        assert!(draw_indices(100, 11, SamplingMode::WithoutReplacement, &st).is_err());
        assert!(draw_indices(5, 0, SamplingMode::WithReplacement, &st).is_err());
        let all = draw_indices(7, 7, SamplingMode::WithoutReplacement, &st).unwrap();
        assert_eq!(all.len(), 7);
    }

    #[test]
    fn full_sampling_of_orthogonal_matrix_is_exact() {
        let q = crate::spectral::random_unitary::<f64>(6, &RngStream::new(1, 2));
        let est = sampling_estimator(&q, 6, SamplingMode::WithoutReplacement, &RngStream::new(4, 0))
            .unwrap();
        assert!((est.estimate - est.truth).abs() < 1e-12);
        assert!((est.truth - 1.0).abs() < 1e-12);
        assert!(est.frobenius_gap < 1e-12);
    }

    #[test]
    fn exhaustive_three_by_three_single_row() {
        let c = mat(3, 9);
        let st = RngStream::new(0, 0);
        let m = sampling_second_moment_oracle(&c, 1, &st).unwrap();
        assert!(m.exhaustive);
        assert_eq!(m.tuples, 3);
        // Average of the three gaps, spelled out.
        let manual: f64 = (0..3).map(|k| gap_sqr(&c.gram(), &c, &[k])).sum::<f64>() / 3.0;
        assert!((m.lhs - manual).abs() < 1e-12);
        assert!((m.lhs - m.variance_formula).abs() < 1e-10 * m.lhs.max(1.0));
        let quartic: f64 = (0..3)
            .map(|k| c.row(k).iter().map(|x| x * x).sum::<f64>().powi(2))
            .sum();
        assert!(m.lhs <= 3.0 * quartic);
        assert!(m.holds());
    }

    #[test]
    fn orthogonal_rows_bound() {
        let q = crate::spectral::random_unitary::<Complex64>(4, &RngStream::new(5, 0));
        let m = sampling_second_moment_oracle(&q, 2, &RngStream::new(0, 0)).unwrap();
        assert!((m.rhs - 8.0).abs() < 1e-10);
        assert!(m.lhs <= 8.0 && m.holds());
    }

    #[test]
    fn monte_carlo_fallback_matches_formula() {
        let c = mat(12, 2);
        let m = sampling_second_moment_oracle(&c, 3, &RngStream::new(8, 8)).unwrap();
        assert!(!m.exhaustive);
        assert!((m.lhs - m.variance_formula).abs() <= 5.0 * m.std_error);
        assert!(m.holds());
    }
}
