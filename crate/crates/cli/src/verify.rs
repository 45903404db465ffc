//! The `verify` suites. Each returns a JSON report whose `pass` field is the
//! conjunction of its checks.

use std::path::Path;

use hardedge_core::cltframe::{be_frame_distance, check_tight_frame, frame_covariance, random_tight_frame};
use hardedge_core::ensembles::{sample_matrix_as, AtomDistribution, EnsembleSpec, EntryPlan, RngStream};
use hardedge_core::harness::{ks_critical_two_sample, linspace, Check};
use hardedge_core::limitlaws::{st_taylor_check, LimitLaw};
use hardedge_core::reduction::{
    build_projection, correlation_bound_check, distances_to_hyperplanes, pipeline_coherence,
    sampling_second_moment_oracle,
};
use hardedge_core::spectral::{
    check_hoffman_wielandt, check_hoffman_wielandt_singular, check_interlacing, check_weyl,
    hermitization_defect, hermitize, inverse_duality_defect, invert, read_matrix, singular_values, AnyMatrix,
    Matrix,
};
use hardedge_core::{Complex64, Error, Field, Real, Result, Scalar};
use serde_json::{json, Value};

pub fn report(suite: &str, checks: Vec<Check>, details: Value) -> Value {
    let pass = checks.iter().all(|c| c.pass);
    json!({ "suite": suite, "pass": pass, "checks": checks, "details": details })
}

fn gaussian<S: Scalar>(m: usize, n: usize, stream: &RngStream) -> Result<Matrix<S>> {
    let atom = match S::FIELD {
        Field::Real => AtomDistribution::real_gaussian(),
        Field::Complex => AtomDistribution::complex_gaussian(),
    };
    if m > n {
        return Ok(sample_matrix_as::<S>(&EnsembleSpec::new(n, m, EntryPlan::Iid(atom))?, stream).transpose());
    }
    Ok(sample_matrix_as::<S>(&EnsembleSpec::new(m, n, EntryPlan::Iid(atom))?, stream))
}

/// Even trials are real, odd ones complex.
fn field_of(t: usize) -> Field {
    if t.is_multiple_of(2) {
        Field::Real
    } else {
        Field::Complex
    }
}

macro_rules! by_field {
    ($field:expr, $f:ident ( $($arg:expr),* )) => {
        match $field {
            Field::Real => $f::<f64>($($arg),*),
            Field::Complex => $f::<Complex64>($($arg),*),
        }
    };
}

struct Worst {
    failures: usize,
    values: Vec<f64>,
}

impl Worst {
    fn new(k: usize) -> Self {
        Self {
            failures: 0,
            values: vec![f64::NEG_INFINITY; k],
        }
    }

    fn update(&mut self, vals: &[f64], failed: bool) {
        for (w, v) in self.values.iter_mut().zip(vals) {
            *w = w.max(*v);
        }
        self.failures += usize::from(failed);
    }
}

pub const REDUCTION_SUITES: [&str; 5] = ["projection", "distance", "correlation", "sampling", "pipeline"];

pub fn reduction(suite: &str, trials: usize, seed: u64, n: usize) -> Result<Value> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let root = RngStream::new(seed, 0);
    let name = format!("reduction/{suite}");
    match suite {
        "projection" => {
            let mut w = Worst::new(4);
            for t in 0..trials {
                let st = root.trial(t as u64);
                let mut cur = st.cursor();
                let n = 2 + cur.index(29);
                let s = 1 + cur.index(n.min(8));
                let cert = match field_of(t) {
                    Field::Real => build_projection(&gaussian::<f64>(n, n, &st.substream(1))?, s)?.certificate,
                    Field::Complex => build_projection(&gaussian::<Complex64>(n, n, &st.substream(1))?, s)?.certificate,
                };
                w.update(
                    &[cert.basis_defect, cert.trailing_overlap, cert.gram_residual / s as f64, cert.sigma_residual],
                    !cert.holds(s),
                );
            }
            let checks = vec![
                Check::at_most("certificate failures", w.failures as f64, 0.0),
                Check::at_most("worst basis defect", w.values[0], 1e-10),
                Check::at_most("worst trailing overlap", w.values[1], 1e-8),
                Check::at_most("worst gram residual per s", w.values[2], 1e-8),
                Check::at_most("worst sigma residual", w.values[3], 1e-8),
            ];
            Ok(report(&name, checks, json!({ "trials": trials, "seed": seed })))
        }
        "distance" => {
            let mut w = Worst::new(1);
            for t in 0..trials {
                let st = root.trial(t as u64);
                let n = 1 + st.cursor().index(30);
                let r = by_field!(field_of(t), distance_trial(n, &st.substream(1)))?;
                w.update(&[r.0], !r.1);
            }
            let checks = vec![
                Check::at_most("duality failures", w.failures as f64, 0.0),
                Check::at_most("worst |d_i |R_i| - 1|", w.values[0], 1e-8),
            ];
            Ok(report(&name, checks, json!({ "trials": trials, "seed": seed })))
        }
        "correlation" => {
            let mut w = Worst::new(1);
            for t in 0..trials {
                let st = root.trial(t as u64);
                let mut cur = st.cursor();
                let n = 2 + cur.index(19);
                let l = 1 + cur.index(n - 1);
                let j = l + 1 + cur.index(n - l);
                let r = by_field!(field_of(t), correlation_trial(n, l, j, &st.substream(1)))?;
                w.update(&[-r.margin()], !r.holds);
            }
            let checks = vec![
                Check::at_most("violations", w.failures as f64, 0.0),
                Check::at_most("worst lhs - rhs", w.values[0], 0.0),
            ];
            Ok(report(&name, checks, json!({ "trials": trials, "seed": seed })))
        }
        "sampling" => {
            let mut w = Worst::new(1);
            for t in 0..trials {
                let st = root.trial(t as u64);
                let mut cur = st.cursor();
                let n = 1 + cur.index(8);
                let k = 1 + cur.index(4);
                let s = 1 + cur.index(n.min(4));
                let m = by_field!(field_of(t), sampling_trial(n, k, s, &st.substream(1)))?;
                let ratio = if m.rhs > 0.0 { m.lhs / m.rhs } else { 0.0 };
                w.update(&[ratio], !m.holds());
            }
            let checks = vec![
                Check::at_most("violations", w.failures as f64, 0.0),
                Check::at_most("worst lhs / rhs", w.values[0], 1.0 + 1e-10),
            ];
            Ok(report(&name, checks, json!({ "trials": trials, "seed": seed })))
        }
        "pipeline" => {
            let s = 10.min(n);
            let r = pipeline_coherence(Field::Real, n, s, trials, &root)?;
            let kept = r.trials - r.excluded;
            let band = ks_critical_two_sample(0.01, kept, kept)?;
            let checks = vec![
                Check::at_most("two-sample KS of s sigma_s(M)^2 vs n sigma_n(A)^2", r.ks, band.max(0.08)),
                Check::at_most("certificate failures", r.certificate_failures as f64, 0.0),
            ];
            Ok(report(&name, checks, serde_json::to_value(&r)?))
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown reduction suite '{other}' (known: {})",
            REDUCTION_SUITES.join(", ")
        ))),
    }
}

fn distance_trial<S: Scalar>(n: usize, st: &RngStream) -> Result<(f64, bool)> {
    let r = distances_to_hyperplanes(&gaussian::<S>(n, n, st)?)?;
    Ok((r.duality_defect, r.holds))
}

fn correlation_trial<S: Scalar>(
    n: usize,
    l: usize,
    j: usize,
    st: &RngStream,
) -> Result<hardedge_core::spectral::InequalityReport> {
    Ok(correlation_bound_check(&gaussian::<S>(n, n, st)?, l, j)?.inequality)
}

fn sampling_trial<S: Scalar>(
    n: usize,
    k: usize,
    s: usize,
    st: &RngStream,
) -> Result<hardedge_core::reduction::SecondMoment> {
    sampling_second_moment_oracle(&gaussian::<S>(n, k, &st.substream(0))?, s, &st.substream(1))
}

/// `frame` is `(n, N)`: `n` vectors in dimension `N`.
pub fn clt(frame: (usize, usize), atom: &AtomDistribution, trials: usize, seed: u64) -> Result<Value> {
    let root = RngStream::new(seed, 0);
    by_field!(atom.field, clt_generic(frame, atom, trials, &root))
}

fn clt_generic<S: Scalar>(
    (n, dim): (usize, usize),
    atom: &AtomDistribution,
    trials: usize,
    root: &RngStream,
) -> Result<Value> {
    let frame = random_tight_frame::<S>(n, dim, &root.substream(0))?;
    let tight = check_tight_frame(&frame);
    let dist = be_frame_distance(&frame, atom, trials, &root.substream(1))?;
    let cov = frame_covariance(&frame, atom, trials, &root.substream(2))?;
    let gaussian_atom = *atom == AtomDistribution::real_gaussian() || *atom == AtomDistribution::complex_gaussian();
    let mut checks = vec![
        Check::at_most("frame residual", tight.residual, 1e-8),
        Check::at_most("frame trace defect", tight.trace_gap, 1e-8),
        Check::at_most("covariance max |z|", cov.max_z, 5.0),
    ];
    checks.push(if gaussian_atom {
        Check::at_most("statistic (gaussian atom, 1% noise band)", dist.statistic, dist.noise_band)
    } else {
        Check::at_most("statistic", dist.statistic, 0.05)
    });
    Ok(report(
        "clt",
        checks,
        json!({ "n": n, "N": dim, "atom": atom, "frame": tight, "distance": dist, "covariance": cov }),
    ))
}

pub fn spectral(trials: usize, seed: u64) -> Result<Value> {
    let root = RngStream::new(seed, 0);
    let mut w = Worst::new(6);
    for t in 0..trials {
        let st = root.trial(t as u64);
        let v = by_field!(field_of(t), spectral_trial(&st))?;
        w.update(&v.0, !v.1);
    }
    let checks = vec![
        Check::at_most("failures", w.failures as f64, 0.0),
        Check::at_most("Weyl worst lhs - rhs", w.values[0], 0.0),
        Check::at_most("Hoffman-Wielandt (singular) worst lhs - rhs", w.values[1], 0.0),
        Check::at_most("Hoffman-Wielandt (hermitized) worst lhs - rhs", w.values[2], 0.0),
        Check::at_most("interlacing worst violation", w.values[3], 1e-9),
        Check::at_most("hermitization defect", w.values[4], 1e-9),
        Check::at_most("inverse duality defect", w.values[5], 1e-8),
    ];
    Ok(report("spectral", checks, json!({ "trials": trials, "seed": seed })))
}

fn spectral_trial<S: Scalar>(st: &RngStream) -> Result<(Vec<f64>, bool)> {
    let mut cur = st.cursor();
    let (m, n) = (1 + cur.index(12), 1 + cur.index(12));
    let a = gaussian::<S>(m, n, &st.substream(1))?;
    let b = gaussian::<S>(m, n, &st.substream(2))?;
    let weyl = check_weyl(&a, &b)?;
    let hws = check_hoffman_wielandt_singular(&a, &b)?;
    let rows: Vec<usize> = (0..m).filter(|_| cur.index(2) == 1).collect();
    let (inter, inter_ok) = if rows.is_empty() {
        (f64::NEG_INFINITY, true)
    } else {
        let r = check_interlacing(&a, &rows)?;
        (r.worst_violation, r.holds)
    };
    let sq = gaussian::<S>(n, n, &st.substream(3))?;
    let sq2 = gaussian::<S>(n, n, &st.substream(4))?;
    let hw = check_hoffman_wielandt(&hermitize(&sq)?, &hermitize(&sq2)?)?;
    let scale = singular_values(&sq)?.max().to_f64_lossy().max(1.0);
    let herm = hermitization_defect(&sq)? / scale;
    let dual = inverse_duality_defect(&sq, &invert(&sq)?)?;
    let ok = weyl.holds && hws.holds && hw.holds && inter_ok && herm <= 1e-9 && dual <= 1e-8;
    Ok((vec![-weyl.margin(), -hws.margin(), -hw.margin(), inter, herm, dual], ok))
}

pub fn laws() -> Result<Value> {
    let grid = linspace(0.0, 6.0, 61);
    let mut checks = Vec::new();
    let mut gaps = serde_json::Map::new();
    for law in LimitLaw::ALL {
        let mut gap: f64 = 0.0;
        let mut last = 0.0;
        let mut monotone = true;
        for &t in &grid {
            let c = law.cdf(t);
            gap = gap.max((c - law.cdf_by_quadrature(t)?).abs());
            monotone &= c >= last - 1e-15 && (0.0..=1.0).contains(&c);
            last = c;
        }
        gaps.insert(law.name().into(), json!(gap));
        checks.push(Check::at_most(format!("{law}: closed form vs quadrature"), gap, 1e-7));
        checks.push(Check::at_least(format!("{law}: monotone in [0, 1]"), f64::from(u8::from(monotone)), 1.0));
        checks.push(Check::at_least(format!("{law}: cdf(50)"), law.cdf(50.0), 1.0 - 1e-12));
    }
    let mut taylor_ok = 0;
    let points = linspace(0.0, 0.5, 51);
    for &x in &points {
        let c = st_taylor_check(x)?;
        taylor_ok += usize::from(c.below_diagonal && c.within_quartic);
    }
    checks.push(Check::at_least("Taylor check points passing", taylor_ok as f64, points.len() as f64));
    Ok(report("laws", checks, json!({ "max_gap": gaps })))
}

pub fn matrix(path: &Path) -> Result<Value> {
    match read_matrix(path)? {
        AnyMatrix::Real(a) => matrix_generic(&a),
        AnyMatrix::Complex(a) => matrix_generic(&a),
    }
}

fn matrix_generic<S: Scalar>(a: &Matrix<S>) -> Result<Value> {
    let sv = singular_values(a)?;
    let values: Vec<f64> = sv.values.iter().map(|v| v.to_f64_lossy()).collect();
    let fro = a.frobenius_norm_sqr().to_f64_lossy();
    let trace_gap = (values.iter().map(|v| v * v).sum::<f64>() - fro).abs() / fro.max(1.0);
    let mut checks = vec![Check::at_most("|sum sigma_i^2 - |A|_F^2| (relative)", trace_gap, 1e-10)];
    let mut details = json!({
        "shape": a.shape(),
        "field": S::FIELD,
        "singular_values": values,
    });
    if a.is_square() {
        let scale = values.first().copied().unwrap_or(0.0).max(1.0);
        let herm = hermitization_defect(a)? / scale;
        checks.push(Check::at_most("hermitization defect (relative)", herm, 1e-9));
        match invert(a) {
            Ok(inv) => {
                let dual = inverse_duality_defect(a, &inv)?;
                let dist = distances_to_hyperplanes(a)?;
                checks.push(Check::at_most("inverse duality defect", dual, 1e-8));
                checks.push(Check::at_most("distance duality defect", dist.duality_defect, 1e-8));
                details["distances"] = json!(dist.geometric);
            }
            Err(Error::Singular { .. }) => details["singular"] = json!(true),
            Err(e) => return Err(e),
        }
    }
    Ok(report("matrix", checks, details))
}
