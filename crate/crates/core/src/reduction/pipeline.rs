//! End-to-end coherence of the reduction: the projected `s × s` matrix of a
//! gaussian `n × n` matrix carries the same hard-edge law as the original.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::ensembles::{sample_matrix_as, AtomDistribution, EnsembleSpec, RngStream};
use crate::error::{invalid, Error, Result};
use crate::harness::ecdf::EmpiricalCdf;
use crate::reduction::projection::build_projection;
use crate::scalar::{Field, Real, Scalar};
use crate::spectral::singular_values;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub s: usize,
    pub trials: usize,
    pub excluded: usize,
    /// Two-sample KS between `s·σ_s(M)²` and `n·σ_n(A)²`.
    pub ks: f64,
    /// Trials whose projection certificate failed.
    pub certificate_failures: usize,
}

struct PipelineTrial {
    full: f64,
    projected: f64,
    certified: bool,
}

fn pipeline_trial<S: Scalar>(spec: &EnsembleSpec, s: usize, stream: &RngStream) -> Result<Option<PipelineTrial>> {
    let a = sample_matrix_as::<S>(spec, stream);
    let n = spec.n;
    let sv = singular_values(&a)?;
    let w = match build_projection(&a, s) {
        Ok(w) => w,
        Err(Error::Singular { .. }) | Err(Error::RankDeficient(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let sm = singular_values(&w.projected)?;
    Ok(Some(PipelineTrial {
        full: n as f64 * sv.min().to_f64_lossy().powi(2),
        projected: s as f64 * sm.min().to_f64_lossy().powi(2),
        certified: w.certificate.holds(s),
    }))
}

/// Runs `trials` gaussian `n × n` draws of the given field and compares the
/// two hard-edge statistics.
pub fn pipeline_coherence(
    field: Field,
    n: usize,
    s: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<PipelineReport> {
    if s == 0 || s > n || trials == 0 {
        return Err(invalid(format!("need 1 <= s <= n and trials >= 1, got s={s}, n={n}, trials={trials}")));
    }
    let atom = match field {
        Field::Real => AtomDistribution::real_gaussian(),
        Field::Complex => AtomDistribution::complex_gaussian(),
    };
    let spec = EnsembleSpec::square(n, atom)?;
    let results = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let st = stream.trial(t);
            match field {
                Field::Real => pipeline_trial::<f64>(&spec, s, &st),
                Field::Complex => pipeline_trial::<Complex64>(&spec, s, &st),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let kept: Vec<PipelineTrial> = results.into_iter().flatten().collect();
    let excluded = trials - kept.len();
    let full = EmpiricalCdf::new(kept.iter().map(|t| t.full).collect())?;
    let projected = EmpiricalCdf::new(kept.iter().map(|t| t.projected).collect())?;
    Ok(PipelineReport {
        n,
        s,
        trials,
        excluded,
        ks: full.ks_two_sample(&projected),
        certificate_failures: kept.iter().filter(|t| !t.certified).count(),
    })
}
