//! Concentration of `|π_V(X)|` around `√d` for a bounded random vector `X`
//! and a fixed `d`-dimensional subspace `V`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{AtomDistribution, Estimate, RngStream};
use crate::error::{invalid, Result};
use crate::scalar::{Field, Real, Scalar};
use crate::spectral::{norm, random_unitary, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    /// Fraction of trials with `||π_V(X)| − √d| ≥ √d/2`.
    pub tail_frequency: f64,
    /// Mean of `|π_V(X)|²`, whose expectation is `d`.
    pub mean_sq: Estimate,
    /// `mean_sq` within `3·SE` of `d`.
    pub mean_sq_holds: bool,
    /// [`median_mean_gap`] of the distances.
    pub median_mean_gap: f64,
}

/// `|mean − median|` of the samples; zero for an empty slice.
pub fn median_mean_gap(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len();
    let median = if m % 2 == 1 {
        s[m / 2]
    } else {
        0.5 * (s[m / 2 - 1] + s[m / 2])
    };
    let mean = s.iter().sum::<f64>() / m as f64;
    (mean - median).abs()
}

fn norms_generic<S: Scalar>(atom: &AtomDistribution, n: usize, d: usize, trials: usize, stream: &RngStream) -> Vec<f64> {
    // V is drawn once per experiment; X_t from the trial streams.
    let u: Matrix<S> = random_unitary(n, &stream.substream(0));
    let v_adj = u.select_columns(&(0..d).collect::<Vec<_>>()).adjoint();
    let xs = stream.substream(1);
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let st = xs.trial(t);
            let x: Vec<S> = (0..n).map(|i| atom.sample_scalar(&mut st.draw(i as u64))).collect();
            let p = v_adj.mul_vec(&x).expect("V* is d x n");
            norm(&p).to_f64_lossy()
        })
        .collect()
}

/// Projects `trials` vectors of iid `atom` entries onto one random
/// `d`-dimensional subspace of `F^n`. The atom must carry a sup bound.
pub fn projection_concentration(
    atom: &AtomDistribution,
    n: usize,
    d: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<ConcentrationReport> {
    if d == 0 || d > n || trials < 2 {
        return Err(invalid(format!("need 1 <= d <= n and trials >= 2, got d={d}, n={n}, trials={trials}")));
    }
    if atom.sup_bound.is_none() {
        return Err(invalid(format!("atom {} has no sup bound; truncate it first", atom.name())));
    }
    let dists = match atom.field {
        Field::Real => norms_generic::<f64>(atom, n, d, trials, stream),
        Field::Complex => norms_generic::<Complex64>(atom, n, d, trials, stream),
    };
    let root = (d as f64).sqrt();
    let tail = dists.iter().filter(|&&x| (x - root).abs() >= root / 2.0).count();
    let mean_sq = Estimate::from_samples(dists.iter().map(|x| x * x));
    Ok(ConcentrationReport {
        n,
        d,
        trials,
        tail_frequency: tail as f64 / trials as f64,
        mean_sq_holds: mean_sq.within(d as f64, 3.0),
        mean_sq,
        median_mean_gap: median_mean_gap(&dists),
    })
}
