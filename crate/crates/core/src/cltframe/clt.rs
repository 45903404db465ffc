//! Empirical central limit theorem for frame sums.
//!
//! `S = Σ a_j v_j` is compared with `G`, a vector of `N` iid copies of `g_F`,
//! through every real coordinate marginal and every pair of coordinates.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cltframe::frame::{check_atom_field, frame_sample_unchecked, gaussian_atom, random_tight_frame, TightFrame};
use crate::ensembles::{AtomDistribution, Estimate, RngStream};
use crate::error::{invalid, Result};
use crate::harness::ecdf::{ks_critical_two_sample, EmpiricalCdf};
use crate::scalar::{Field, Real, Scalar};

/// Fewest trials a distance estimate accepts.
pub const MIN_TRIALS: usize = 100;
/// Points per axis of the pairwise grid.
pub const PAIR_GRID: usize = 20;
/// Half-width of the pairwise grid in coordinate standard deviations.
pub const PAIR_GRID_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameCltReport {
    pub trials: usize,
    /// Two-sample KS per real coordinate (`Re`, then `Im` for complex frames).
    pub per_coordinate_ks: Vec<f64>,
    /// Largest joint-CDF gap over all coordinate pairs on the grid.
    pub pairwise_sup: f64,
    /// `max(per_coordinate_ks ∪ {pairwise_sup})`.
    pub statistic: f64,
    /// Two-sample 1% KS band, Bonferroni-corrected over all compared marginals.
    pub noise_band: f64,
    pub max_norm: f64,
}

impl FrameCltReport {
    pub fn within_noise_band(&self) -> bool {
        self.statistic <= self.noise_band
    }
}

fn real_coordinates<S: Scalar>(v: &[S]) -> Vec<f64> {
    match S::FIELD {
        Field::Real => v.iter().map(|x| x.re().to_f64_lossy()).collect(),
        Field::Complex => v
            .iter()
            .map(|x| x.re().to_f64_lossy())
            .chain(v.iter().map(|x| x.im().to_f64_lossy()))
            .collect(),
    }
}

/// `sup` over the grid of `|F(x, y) − G(x, y)|` for the joint CDFs of two
/// coordinate pairs.
fn pair_gap(a: &[(f64, f64)], b: &[(f64, f64)], grid: &[f64]) -> f64 {
    let cdf = |pts: &[(f64, f64)], x: f64, y: f64| {
        pts.iter().filter(|p| p.0 <= x && p.1 <= y).count() as f64 / pts.len() as f64
    };
    let mut worst: f64 = 0.0;
    for &x in grid {
        for &y in grid {
            worst = worst.max((cdf(a, x, y) - cdf(b, x, y)).abs());
        }
    }
    worst
}

fn distance_generic<S: Scalar>(
    frame: &TightFrame<S>,
    atom: &AtomDistribution,
    trials: usize,
    stream: &RngStream,
) -> Result<FrameCltReport> {
    check_atom_field::<S>(atom)?;
    if trials < MIN_TRIALS {
        return Err(invalid(format!("frame CLT needs at least {MIN_TRIALS} trials, got {trials}")));
    }
    let gauss = gaussian_atom::<S>();
    let s_stream = stream.substream(1);
    let g_stream = stream.substream(2);
    let draws: Vec<(Vec<f64>, Vec<f64>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = frame_sample_unchecked(frame, atom, &s_stream.trial(t));
            let gt = g_stream.trial(t);
            let g: Vec<S> = (0..frame.dim())
                .map(|k| gauss.sample_scalar(&mut gt.draw(k as u64)))
                .collect();
            (real_coordinates(&s), real_coordinates(&g))
        })
        .collect();

    let coords = draws[0].0.len();
    let column = |which: usize, c: usize| -> Vec<f64> {
        draws
            .iter()
            .map(|d| if which == 0 { d.0[c] } else { d.1[c] })
            .collect()
    };
    let per_coordinate_ks = (0..coords)
        .map(|c| {
            let f = EmpiricalCdf::new(column(0, c))?;
            let g = EmpiricalCdf::new(column(1, c))?;
            Ok(f.ks_two_sample(&g))
        })
        .collect::<Result<Vec<f64>>>()?;

    let sigma = match S::FIELD {
        Field::Real => 1.0,
        Field::Complex => 0.5f64.sqrt(),
    };
    let half = PAIR_GRID_SIGMAS * sigma;
    let grid: Vec<f64> = (0..PAIR_GRID)
        .map(|i| -half + 2.0 * half * i as f64 / (PAIR_GRID - 1) as f64)
        .collect();
    let mut pairwise_sup: f64 = 0.0;
    let mut pairs = 0usize;
    for c1 in 0..coords {
        for c2 in c1 + 1..coords {
            let a: Vec<(f64, f64)> = draws.iter().map(|d| (d.0[c1], d.0[c2])).collect();
            let b: Vec<(f64, f64)> = draws.iter().map(|d| (d.1[c1], d.1[c2])).collect();
            pairwise_sup = pairwise_sup.max(pair_gap(&a, &b, &grid));
            pairs += 1;
        }
    }

    let statistic = per_coordinate_ks.iter().copied().fold(pairwise_sup, f64::max);
    let comparisons = coords + pairs;
    let noise_band = ks_critical_two_sample(0.01 / comparisons as f64, trials, trials)?;
    Ok(FrameCltReport {
        trials,
        per_coordinate_ks,
        pairwise_sup,
        statistic,
        noise_band,
        max_norm: frame.max_norm(),
    })
}

/// Distributional distance between the frame sum and the gaussian vector;
/// samples of `S` and `G` come from separate substreams of `stream`.
pub fn be_frame_distance<S: Scalar>(
    frame: &TightFrame<S>,
    atom: &AtomDistribution,
    trials: usize,
    stream: &RngStream,
) -> Result<FrameCltReport> {
    distance_generic(frame, atom, trials, stream)
}

/// Entrywise check that `E[S S*] = I_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub trials: usize,
    /// Largest `|estimate − target| / SE` over the real and imaginary parts
    /// of every entry.
    pub max_z: f64,
}

pub fn frame_covariance<S: Scalar>(
    frame: &TightFrame<S>,
    atom: &AtomDistribution,
    trials: usize,
    stream: &RngStream,
) -> Result<CovarianceReport> {
    check_atom_field::<S>(atom)?;
    if trials < 2 {
        return Err(invalid("covariance needs at least two trials"));
    }
    let n = frame.dim();
    let samples: Vec<Vec<S>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| frame_sample_unchecked(frame, atom, &stream.trial(t)))
        .collect();
    let mut max_z: f64 = 0.0;
    for i in 0..n {
        for k in 0..n {
            let prods: Vec<Complex64> = samples
                .iter()
                .map(|s| {
                    let p = s[i] * s[k].conj();
                    Complex64::new(p.re().to_f64_lossy(), p.im().to_f64_lossy())
                })
                .collect();
            let target = if i == k { 1.0 } else { 0.0 };
            let re = Estimate::from_samples(prods.iter().map(|p| p.re));
            max_z = max_z.max(z_score(&re, target));
            if S::FIELD == Field::Complex {
                let im = Estimate::from_samples(prods.iter().map(|p| p.im));
                max_z = max_z.max(z_score(&im, 0.0));
            }
        }
    }
    Ok(CovarianceReport { trials, max_z })
}

fn z_score(e: &Estimate, target: f64) -> f64 {
    let d = (e.value - target).abs();
    if e.std_error > 0.0 {
        d / e.std_error
    } else if d == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Spearman rank correlation, with tied values sharing their mean rank.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(invalid("Spearman correlation needs two equal-length series of length >= 2"));
    }
    let rx = ranks(x);
    let ry = ranks(y);
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderReport {
    pub frame_sizes: Vec<usize>,
    pub max_norms: Vec<f64>,
    pub statistics: Vec<f64>,
    /// Spearman correlation between `max_norms` and `statistics`.
    pub spearman: f64,
}

/// Frame-CLT statistic over random real frames in dimension `dim` of the
/// given sizes; the statistic should shrink along with `max_j |v_j|`.
pub fn monotonicity_ladder(
    dim: usize,
    sizes: &[usize],
    atom: &AtomDistribution,
    trials: usize,
    stream: &RngStream,
) -> Result<LadderReport> {
    let mut max_norms = Vec::with_capacity(sizes.len());
    let mut statistics = Vec::with_capacity(sizes.len());
    for (i, &n) in sizes.iter().enumerate() {
        let st = stream.trial(i as u64);
        let frame = random_tight_frame::<f64>(n, dim, &st.substream(0))?;
        let r = be_frame_distance(&frame, atom, trials, &st.substream(1))?;
        max_norms.push(r.max_norm);
        statistics.push(r.statistic);
    }
    Ok(LadderReport {
        frame_sizes: sizes.to_vec(),
        spearman: spearman(&max_norms, &statistics)?,
        max_norms,
        statistics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spearman_examples() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(ranks(&[5.0, 1.0, 5.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        assert!(spearman(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn gaussian_atom_on_standard_basis_is_noise() {
        let f = TightFrame::<f64>::standard_basis(2).unwrap();
        let r = be_frame_distance(&f, &AtomDistribution::real_gaussian(), 2000, &RngStream::new(1, 0))
            .unwrap();
        assert!(r.within_noise_band(), "{r:?}");
    }

    #[test]
    fn bernoulli_on_identity_frame_is_far() {
        let f = TightFrame::<f64>::standard_basis(2).unwrap();
        let r = be_frame_distance(&f, &AtomDistribution::bernoulli(), 1000, &RngStream::new(2, 0))
            .unwrap();
        assert!(r.statistic > 0.25, "{r:?}");
    }

    #[test]
    fn too_few_trials() {
        let f = TightFrame::<f64>::standard_basis(2).unwrap();
        assert!(be_frame_distance(&f, &AtomDistribution::bernoulli(), 99, &RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn covariance_is_identity() {
        let f = random_tight_frame::<Complex64>(20, 3, &RngStream::new(3, 0)).unwrap();
        let r = frame_covariance(&f, &AtomDistribution::complex_gaussian(), 10_000, &RngStream::new(4, 0))
            .unwrap();
        assert!(r.max_z <= 5.0, "{r:?}");
    }
}
