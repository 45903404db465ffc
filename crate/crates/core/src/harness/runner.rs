//! Seeded Monte Carlo experiments over an ensemble.

use std::path::PathBuf;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{sample_matrix_as, EnsembleSpec, RngStream};
use crate::error::{invalid, Error, Result};
use crate::harness::ecdf::EmpiricalCdf;
use crate::limitlaws::LimitLaw;
use crate::reduction::{build_projection, count_below, distance_reference_law, first_column_distance};
use crate::scalar::{Field, Real, Scalar};
use crate::spectral::singular_values;

/// Trials with `σ_min/σ_1` at or below this are counted as singular and
/// excluded.
pub const SINGULAR_RATIO: f64 = 1e-12;
/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "HARDEDGE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `(nσ_n², …, nσ_{n−k+1}²)`, `n` the column count.
    HardEdgeK(usize),
    /// `√n·σ_min`.
    SqrtSigmaMin,
    /// `(2n/κ)²`.
    ConditionTau,
    /// Distance from the first column to the span of the others.
    DistanceD1,
    /// Number of singular values at most `n^{1/2−c}`.
    SmallCount(f64),
    /// `s·σ_s(M)²` of the projected `s × s` matrix.
    PipelineSigmaS(usize),
}

impl Statistic {
    /// Values each trial produces.
    pub fn arity(&self) -> usize {
        match *self {
            Statistic::HardEdgeK(k) => k,
            _ => 1,
        }
    }

    /// The law the first coordinate approaches for gaussian-like atoms.
    pub fn default_law(&self, field: Field) -> Option<LimitLaw> {
        let complex = field == Field::Complex;
        match self {
            Statistic::HardEdgeK(_) | Statistic::PipelineSigmaS(_) => Some(if complex {
                LimitLaw::EdelmanComplex
            } else {
                LimitLaw::EdelmanReal
            }),
            Statistic::SqrtSigmaMin => Some(if complex {
                LimitLaw::SqrtEdelmanComplex
            } else {
                LimitLaw::SqrtEdelmanReal
            }),
            Statistic::ConditionTau => Some(LimitLaw::EdelmanComplex),
            Statistic::DistanceD1 => Some(distance_reference_law(field)),
            Statistic::SmallCount(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    /// CSV `t,value` of the empirical CDF of the first coordinate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// JSON report.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
}

/// One experiment. The master seed is `ensemble.seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleSpec,
    pub statistic: Statistic,
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_law: Option<LimitLaw>,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn new(ensemble: EnsembleSpec, statistic: Statistic, trials: usize) -> Self {
        Self {
            ensemble,
            statistic,
            trials,
            reference_law: None,
            output: OutputPaths::default(),
        }
    }

    pub fn with_law(mut self, law: LimitLaw) -> Self {
        self.reference_law = Some(law);
        self
    }

    pub fn seed(&self) -> u64 {
        self.ensemble.seed
    }

    pub fn validate(&self) -> Result<()> {
        self.ensemble.validate()?;
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        let (m, n) = (self.ensemble.m, self.ensemble.n);
        let square = m == n;
        match self.statistic {
            Statistic::HardEdgeK(k) if k == 0 || k > m => {
                Err(invalid(format!("HardEdgeK needs 1 <= k <= {m}, got {k}")))
            }
            Statistic::ConditionTau | Statistic::DistanceD1 if !square => {
                Err(invalid(format!("{:?} needs a square ensemble, got {m}x{n}", self.statistic)))
            }
            Statistic::SmallCount(c) if !square || !(c > 0.0 && c < 0.5) => {
                Err(invalid(format!("SmallCount needs a square ensemble and 0 < c < 1/2, got c={c}")))
            }
            Statistic::PipelineSigmaS(s) if !square || s == 0 || s > n => {
                Err(invalid(format!("PipelineSigmaS needs a square ensemble and 1 <= s <= n, got s={s}")))
            }
            _ => Ok(()),
        }
    }
}

/// Goodness of fit of the first coordinate against a reference law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoFReport {
    pub law: LimitLaw,
    pub ks: f64,
    pub levy: f64,
    pub excluded_singular_trials: usize,
    /// `(t, F_n(t) − F(t))` on an evenly spaced grid over the sample range.
    pub residuals: Vec<(f64, f64)>,
}

impl GoFReport {
    pub fn new(ecdf: &EmpiricalCdf, law: LimitLaw, excluded: usize) -> Self {
        let cdf = |t: f64| law.cdf(t);
        let (lo, hi) = (ecdf.samples()[0], ecdf.samples()[ecdf.len() - 1]);
        let residuals = (0..=RESIDUAL_STEPS)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / RESIDUAL_STEPS as f64;
                (t, ecdf.eval(t) - cdf(t))
            })
            .collect();
        Self {
            law,
            ks: ecdf.ks_to(cdf),
            levy: ecdf.levy_to(cdf),
            excluded_singular_trials: excluded,
            residuals,
        }
    }
}

const RESIDUAL_STEPS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// Per kept trial, in trial order.
    pub samples: Vec<Vec<f64>>,
    /// Indices of trials excluded as singular.
    pub excluded: Vec<usize>,
    #[serde(skip)]
    pub ecdf: EmpiricalCdf,
    pub gof: Option<GoFReport>,
}

impl ExperimentResult {
    /// Coordinate `c` of every kept trial.
    pub fn coordinate(&self, c: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[c]).collect()
    }

    pub fn marginal(&self, c: usize) -> Result<EmpiricalCdf> {
        EmpiricalCdf::new(self.coordinate(c))
    }

    /// `t,value` lines of the first-coordinate ECDF at its jumps.
    pub fn csv(&self) -> String {
        ecdf_csv(&self.ecdf)
    }

    pub fn report_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Report<'a> {
            config: &'a ExperimentConfig,
            trials: usize,
            kept: usize,
            excluded_singular_trials: usize,
            excluded: &'a [usize],
            gof: &'a Option<GoFReport>,
        }
        Ok(serde_json::to_string_pretty(&Report {
            config: &self.config,
            trials: self.config.trials,
            kept: self.samples.len(),
            excluded_singular_trials: self.excluded.len(),
            excluded: &self.excluded,
            gof: &self.gof,
        })?)
    }

    /// Writes whichever outputs the config names.
    pub fn write_outputs(&self) -> Result<()> {
        if let Some(p) = &self.config.output.csv {
            std::fs::write(p, self.csv())?;
        }
        if let Some(p) = &self.config.output.json {
            std::fs::write(p, self.report_json()?)?;
        }
        Ok(())
    }
}

/// `t,value` lines of an ECDF at its distinct jump points.
pub fn ecdf_csv(ecdf: &EmpiricalCdf) -> String {
    let mut out = String::from("t,value\n");
    let s = ecdf.samples();
    for (i, &x) in s.iter().enumerate() {
        if i + 1 < s.len() && s[i + 1] == x {
            continue;
        }
        out.push_str(&format!("{x:e},{:e}\n", (i + 1) as f64 / s.len() as f64));
    }
    out
}

/// Worker count from `HARDEDGE_THREADS`, else rayon's default.
pub fn default_workers() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` on a pool of `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with(config, default_workers())
}

/// Trial `t` draws from `RngStream::new(seed, 0).trial(t)`, so results do
/// not depend on `workers`.
pub fn run_experiment_with(config: &ExperimentConfig, workers: usize) -> Result<ExperimentResult> {
    config.validate()?;
    let root = RngStream::new(config.seed(), 0);
    let field = config.ensemble.field();
    let outcomes = with_workers(workers, || {
        (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let st = root.trial(t as u64);
                match field {
                    Field::Real => run_trial::<f64>(config, &st),
                    Field::Complex => run_trial::<Complex64>(config, &st),
                }
                .map_err(|e| Error::Trial {
                    trial: t,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut samples = Vec::with_capacity(outcomes.len());
    let mut excluded = Vec::new();
    for (t, o) in outcomes.into_iter().enumerate() {
        match o {
            Some(v) => samples.push(v),
            None => excluded.push(t),
        }
    }
    if samples.is_empty() {
        return Err(invalid(format!("all {} trials were singular", config.trials)));
    }
    let ecdf = EmpiricalCdf::new(samples.iter().map(|s| s[0]).collect())?;
    let law = config.reference_law;
    let gof = law.map(|l| GoFReport::new(&ecdf, l, excluded.len()));
    Ok(ExperimentResult {
        config: config.clone(),
        samples,
        excluded,
        ecdf,
        gof,
    })
}

/// `None` for a singular draw.
fn run_trial<S: Scalar>(config: &ExperimentConfig, stream: &RngStream) -> Result<Option<Vec<f64>>> {
    let a = sample_matrix_as::<S>(&config.ensemble, stream);
    let sv = singular_values(&a)?;
    let top = sv.max().to_f64_lossy();
    let bottom = sv.min().to_f64_lossy();
    if !(bottom > SINGULAR_RATIO * top) {
        return Ok(None);
    }
    let n = a.cols();
    let nf = n as f64;
    let out = match config.statistic {
        Statistic::HardEdgeK(k) => sv
            .values
            .iter()
            .rev()
            .take(k)
            .map(|s| nf * s.to_f64_lossy().powi(2))
            .collect(),
        Statistic::SqrtSigmaMin => vec![nf.sqrt() * bottom],
        Statistic::ConditionTau => vec![(2.0 * nf * bottom / top).powi(2)],
        Statistic::DistanceD1 => vec![first_column_distance(&a)?],
        Statistic::SmallCount(c) => vec![count_below(&sv.values, n, c) as f64],
        Statistic::PipelineSigmaS(s) => {
            let w = match build_projection(&a, s) {
                Ok(w) => w,
                Err(Error::Singular { .. }) | Err(Error::RankDeficient(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let sm = singular_values(&w.projected)?;
            vec![s as f64 * sm.min().to_f64_lossy().powi(2)]
        }
    };
    Ok(Some(out))
}
