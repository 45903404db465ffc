//! Named experiments built on the runner.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{sample_matrix_as, AtomDistribution, EnsembleSpec, RngStream};
use crate::error::{invalid, Error, Result};
use crate::harness::ecdf::EmpiricalCdf;
use crate::harness::runner::{default_workers, run_experiment, with_workers, ExperimentConfig, GoFReport, Statistic, SINGULAR_RATIO};
use crate::limitlaws::LimitLaw;
use crate::scalar::{Field, Real, Scalar};
use crate::spectral::singular_values;

/// Width of the band in standard errors of the empirical CDF.
pub const ST_BAND_SE: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpielmanTengReport {
    pub n: usize,
    pub trials: usize,
    pub excluded: usize,
    pub grid: Vec<f64>,
    /// `P(√n σ_n ≤ t)` on the grid.
    pub ecdf: Vec<f64>,
    /// `t + 3·√(t(1−t)/trials)`.
    pub upper: Vec<f64>,
    /// Grid points where the ECDF exceeds the band.
    pub violations: Vec<f64>,
    /// `max |ECDF(t) − (t − t³/3)|` over grid points `t ≤ 1/2`.
    pub taylor_gap: f64,
}

/// `√n·σ_n` of `trials` iid `n × n` matrices scanned against `y = t`.
pub fn spielman_teng_scan(
    atom: &AtomDistribution,
    n: usize,
    trials: usize,
    grid: &[f64],
    seed: u64,
) -> Result<SpielmanTengReport> {
    if trials == 0 {
        return Err(invalid("Spielman-Teng scan needs at least one trial"));
    }
    if grid.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(invalid("scan grid must lie in (0, 1]"));
    }
    let ens = EnsembleSpec::square(n, atom.clone())?.with_seed(seed);
    let r = run_experiment(&ExperimentConfig::new(ens, Statistic::SqrtSigmaMin, trials))?;
    // Singular draws have σ_n = 0 and count toward every P(√n σ_n ≤ t).
    let ex = r.excluded.len() as f64;
    let kept = r.ecdf.len() as f64;
    let ecdf: Vec<f64> = grid
        .iter()
        .map(|&t| (r.ecdf.eval(t) * kept + ex) / trials as f64)
        .collect();
    let upper: Vec<f64> = grid
        .iter()
        .map(|&t| t + ST_BAND_SE * (t * (1.0 - t) / trials as f64).sqrt())
        .collect();
    let violations = grid
        .iter()
        .zip(ecdf.iter().zip(&upper))
        .filter(|(_, (e, u))| e > u)
        .map(|(&t, _)| t)
        .collect();
    let taylor_gap = grid
        .iter()
        .zip(&ecdf)
        .filter(|(&t, _)| t <= 0.5)
        .map(|(&t, &e)| (e - (t - t.powi(3) / 3.0)).abs())
        .fold(0.0, f64::max);
    Ok(SpielmanTengReport {
        n,
        trials,
        excluded: r.excluded.len(),
        grid: grid.to_vec(),
        ecdf,
        upper,
        violations,
        taylor_gap,
    })
}

/// Below this size the ESD comparison is reported but flagged.
pub const MIN_ESD_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EsdReport {
    pub n: usize,
    pub gof: GoFReport,
    pub below_min_n: bool,
}

/// One draw; the ECDF of `σ_i²/n` against the Marchenko–Pastur law.
pub fn esd_vs_mp(atom: &AtomDistribution, n: usize, stream: &RngStream) -> Result<EsdReport> {
    let ens = EnsembleSpec::square(n, atom.clone())?;
    let values: Vec<f64> = match atom.field {
        Field::Real => squares(&sample_matrix_as::<f64>(&ens, stream))?,
        Field::Complex => squares(&sample_matrix_as::<Complex64>(&ens, stream))?,
    };
    let ecdf = EmpiricalCdf::new(values)?;
    Ok(EsdReport {
        n,
        gof: GoFReport::new(&ecdf, LimitLaw::MarchenkoPastur, 0),
        below_min_n: n < MIN_ESD_N,
    })
}

fn squares<S: Scalar>(a: &crate::spectral::Matrix<S>) -> Result<Vec<f64>> {
    let n = a.cols() as f64;
    Ok(singular_values(a)?
        .values
        .iter()
        .map(|s| s.to_f64_lossy().powi(2) / n)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub n: usize,
    pub trials: usize,
    pub excluded: usize,
    /// `τ = (2n/κ)²` per kept trial.
    #[serde(skip)]
    pub tau: EmpiricalCdf,
    /// KS of `τ` against `1 − e^{−t}`.
    pub ks: f64,
    /// Fraction of kept trials with `σ₁/√n ∈ [1.8, 2.2]`.
    pub top_in_band: f64,
}

/// Range `σ₁/√n` is expected to fall in.
pub const TOP_BAND: (f64, f64) = (1.8, 2.2);

/// `τ` and `σ₁/√n` from one SVD per trial; trial `t` uses
/// `RngStream::new(seed, 0).trial(t)`.
pub fn condition_number_experiment(
    atom: &AtomDistribution,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ConditionReport> {
    if trials == 0 {
        return Err(invalid("condition experiment needs at least one trial"));
    }
    let ens = EnsembleSpec::square(n, atom.clone())?;
    let root = RngStream::new(seed, 0);
    let rows = with_workers(default_workers(), || {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let st = root.trial(t as u64);
                match atom.field {
                    Field::Real => condition_trial::<f64>(&ens, &st),
                    Field::Complex => condition_trial::<Complex64>(&ens, &st),
                }
                .map_err(|e| Error::Trial {
                    trial: t,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let kept: Vec<(f64, f64)> = rows.into_iter().flatten().collect();
    if kept.is_empty() {
        return Err(invalid("every trial was singular"));
    }
    let tau = EmpiricalCdf::new(kept.iter().map(|r| r.0).collect())?;
    let inside = kept
        .iter()
        .filter(|r| r.1 >= TOP_BAND.0 && r.1 <= TOP_BAND.1)
        .count();
    Ok(ConditionReport {
        n,
        trials,
        excluded: trials - kept.len(),
        ks: tau.ks_to(|t| LimitLaw::EdelmanComplex.cdf(t)),
        top_in_band: inside as f64 / kept.len() as f64,
        tau,
    })
}

fn condition_trial<S: Scalar>(ens: &EnsembleSpec, stream: &RngStream) -> Result<Option<(f64, f64)>> {
    let sv = singular_values(&sample_matrix_as::<S>(ens, stream))?;
    let (top, bottom) = (sv.max().to_f64_lossy(), sv.min().to_f64_lossy());
    if !(bottom > SINGULAR_RATIO * top) {
        return Ok(None);
    }
    let n = ens.n as f64;
    Ok(Some(((2.0 * n * bottom / top).powi(2), top / n.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ecdf::linspace;

    #[test]
    fn scan_rejects_bad_input() {
        let g = AtomDistribution::real_gaussian();
        assert!(spielman_teng_scan(&g, 10, 0, &[0.5], 1).is_err());
        assert!(spielman_teng_scan(&g, 10, 10, &[0.0], 1).is_err());
        assert!(spielman_teng_scan(&g, 10, 10, &[1.5], 1).is_err());
    }

    #[test]
    fn small_gaussian_scan() {
        let grid: Vec<f64> = linspace(0.0, 1.0, 20).into_iter().skip(1).collect();
        let r = spielman_teng_scan(&AtomDistribution::real_gaussian(), 20, 2000, &grid, 5).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.ecdf.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn esd_flags_tiny_n() {
        let r = esd_vs_mp(&AtomDistribution::bernoulli(), 1, &RngStream::new(1, 0)).unwrap();
        assert!(r.below_min_n);
        assert!(r.gof.ks <= 1.0);
        let r = esd_vs_mp(&AtomDistribution::real_gaussian(), 60, &RngStream::new(1, 0)).unwrap();
        assert!(!r.below_min_n);
        assert!(r.gof.ks < 0.2, "{}", r.gof.ks);
    }

    #[test]
    fn condition_small() {
        let r = condition_number_experiment(&AtomDistribution::complex_gaussian(), 20, 200, 3).unwrap();
        assert_eq!(r.excluded, 0);
        assert_eq!(r.tau.len(), 200);
        assert!(r.top_in_band > 0.5);
    }
}
