//! Normalized scalar atoms: mean zero, variance one, and for complex atoms
//! real and imaginary parts uncorrelated with variance 1/2 each.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use statrs::function::gamma::gamma;

use crate::ensembles::rng::{DrawRng, RngStream, StreamCursor};
use crate::error::{invalid, Error, Result};
use crate::limitlaws::quadrature::integrate_f64;
use crate::scalar::{Field, Real, Scalar};

/// Conditioned-and-renormalized version of a base atom.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub base: AtomDistribution,
    /// Bound on `|a|` applied to base draws.
    pub bound: f64,
    /// `P(|a| ≤ bound)` under the base law.
    pub mass: f64,
    /// Conditioned mean, subtracted before rescaling.
    pub shift: Complex64,
    /// Multiplier taking the recentered conditioned law to unit variance.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AtomKind {
    RealGaussian,
    ComplexGaussian,
    Bernoulli,
    /// `0` with probability `1 − p`, `±p^{-1/2}` with probability `p/2` each.
    SparseSigned { p: f64 },
    TruncatedRenormalized(Box<Truncation>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomDistribution {
    pub field: Field,
    pub kind: AtomKind,
    /// `E|a|³`.
    pub third_moment: f64,
    /// Almost-sure bound on `|a|`, when one exists.
    pub sup_bound: Option<f64>,
}

impl AtomDistribution {
    pub fn real_gaussian() -> Self {
        Self {
            field: Field::Real,
            kind: AtomKind::RealGaussian,
            third_moment: 2.0 * (2.0 / PI).sqrt(),
            sup_bound: None,
        }
    }

    pub fn complex_gaussian() -> Self {
        Self {
            field: Field::Complex,
            kind: AtomKind::ComplexGaussian,
            third_moment: gamma(2.5),
            sup_bound: None,
        }
    }

    pub fn bernoulli() -> Self {
        Self {
            field: Field::Real,
            kind: AtomKind::Bernoulli,
            third_moment: 1.0,
            sup_bound: Some(1.0),
        }
    }

    pub fn sparse_signed(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(invalid(format!("sparse atom needs 0 < p <= 1, got {p}")));
        }
        Ok(Self {
            field: Field::Real,
            kind: AtomKind::SparseSigned { p },
            third_moment: p.powf(-0.5),
            sup_bound: Some(p.powf(-0.5)),
        })
    }

    /// Closed-form `E|a|^k` for the untruncated families.
    pub fn abs_moment_exact(&self, k: u32) -> Option<f64> {
        let k = f64::from(k);
        match &self.kind {
            AtomKind::RealGaussian => Some(2f64.powf(k / 2.0) * gamma((k + 1.0) / 2.0) / PI.sqrt()),
            AtomKind::ComplexGaussian => Some(gamma(1.0 + k / 2.0)),
            AtomKind::Bernoulli => Some(1.0),
            AtomKind::SparseSigned { p } => Some(p.powf(1.0 - k / 2.0)),
            AtomKind::TruncatedRenormalized(_) => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        match &self.kind {
            AtomKind::Bernoulli | AtomKind::SparseSigned { .. } => true,
            AtomKind::RealGaussian | AtomKind::ComplexGaussian => false,
            AtomKind::TruncatedRenormalized(t) => t.base.is_discrete(),
        }
    }

    /// Short name, also the serialized form.
    pub fn name(&self) -> String {
        match &self.kind {
            AtomKind::RealGaussian => "rgauss".into(),
            AtomKind::ComplexGaussian => "cgauss".into(),
            AtomKind::Bernoulli => "bernoulli".into(),
            AtomKind::SparseSigned { p } => format!("sparse:{p}"),
            AtomKind::TruncatedRenormalized(t) => format!("trunc:{}:{}", t.bound, t.base.name()),
        }
    }

    /// One draw from a dedicated generator. Real atoms return a zero imaginary part.
    pub fn sample(&self, rng: &mut DrawRng) -> Complex64 {
        match &self.kind {
            AtomKind::RealGaussian => Complex64::new(rng.sample(StandardNormal), 0.0),
            AtomKind::ComplexGaussian => {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
            AtomKind::Bernoulli => Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
            AtomKind::SparseSigned { p } => {
                let u: f64 = rng.random();
                let v = if u >= *p {
                    0.0
                } else if u < p / 2.0 {
                    p.powf(-0.5)
                } else {
                    -p.powf(-0.5)
                };
                Complex64::new(v, 0.0)
            }
            AtomKind::TruncatedRenormalized(t) => loop {
                let x = t.base.sample(rng);
                if x.norm() <= t.bound {
                    break (x - t.shift) * t.scale;
                }
            },
        }
    }

    /// Draw converted to the scalar type `S`.
    #[inline]
    pub fn sample_scalar<S: Scalar>(&self, rng: &mut DrawRng) -> S {
        let z = self.sample(rng);
        S::from_parts(S::Real::of(z.re), S::Real::of(z.im))
    }

    /// Conditions on `|a| ≤ bound`, recenters, and rescales to unit variance.
    pub fn truncate_renormalize(&self, bound: f64) -> Result<Self> {
        truncate_renormalize(self, bound)
    }
}

/// One draw, advancing the cursor.
pub fn sample_atom(dist: &AtomDistribution, cursor: &mut StreamCursor) -> Complex64 {
    dist.sample(&mut cursor.next_draw())
}

/// Conditioned moments of a base law restricted to `|a| ≤ bound`.
struct Conditioned {
    mass: f64,
    mean: Complex64,
    variance: f64,
    third: f64,
}

fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

// Mass beyond this radius is below 1e-300 for both gaussian laws.
const GAUSS_CUTOFF: f64 = 40.0;

fn conditioned_real_gaussian(bound: f64) -> Result<Conditioned> {
    let b = bound.min(GAUSS_CUTOFF);
    let half = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        Ok(integrate_f64(|x| g(x) * normal_pdf(x), -b, 0.0)?
            + integrate_f64(|x| g(x) * normal_pdf(x), 0.0, b)?)
    };
    let mass = half(&|_| 1.0)?;
    if mass <= 0.0 {
        return Ok(Conditioned {
            mass,
            mean: Complex64::new(0.0, 0.0),
            variance: 0.0,
            third: 0.0,
        });
    }
    let mean = half(&|x| x)? / mass;
    let variance = half(&|x| (x - mean).powi(2))? / mass;
    let third = half(&|x| (x - mean).abs().powi(3))? / mass;
    Ok(Conditioned {
        mass,
        mean: Complex64::new(mean, 0.0),
        variance,
        third,
    })
}

fn conditioned_complex_gaussian(bound: f64) -> Result<Conditioned> {
    // |z| has density 2r·e^{-r²}; the law is rotation invariant, so the
    // conditioned mean and the Re/Im covariance vanish.
    let b = bound.min(GAUSS_CUTOFF);
    let radial = |k: i32| integrate_f64(move |r| r.powi(k) * 2.0 * r * (-r * r).exp(), 0.0, b);
    let mass = radial(0)?;
    if mass <= 0.0 {
        return Ok(Conditioned {
            mass,
            mean: Complex64::new(0.0, 0.0),
            variance: 0.0,
            third: 0.0,
        });
    }
    Ok(Conditioned {
        mass,
        mean: Complex64::new(0.0, 0.0),
        variance: radial(2)? / mass,
        third: radial(3)? / mass,
    })
}

/// Discrete law given as `(value, probability)` atoms.
fn conditioned_discrete(points: &[(f64, f64)], bound: f64) -> Conditioned {
    let kept: Vec<_> = points.iter().filter(|(v, _)| v.abs() <= bound).collect();
    let mass: f64 = kept.iter().map(|(_, p)| p).sum();
    if mass <= 0.0 {
        return Conditioned {
            mass,
            mean: Complex64::new(0.0, 0.0),
            variance: 0.0,
            third: 0.0,
        };
    }
    let mean = kept.iter().map(|(v, p)| v * p).sum::<f64>() / mass;
    let variance = kept.iter().map(|(v, p)| (v - mean).powi(2) * p).sum::<f64>() / mass;
    let third = kept.iter().map(|(v, p)| (v - mean).abs().powi(3) * p).sum::<f64>() / mass;
    Conditioned {
        mass,
        mean: Complex64::new(mean, 0.0),
        variance,
        third,
    }
}

/// Minimum retained mass for a truncation to be accepted.
pub const MIN_TRUNCATION_MASS: f64 = 0.9;

pub fn truncate_renormalize(dist: &AtomDistribution, bound: f64) -> Result<AtomDistribution> {
    if bound.is_nan() || bound < 0.0 {
        return Err(invalid(format!("truncation bound must be nonnegative, got {bound}")));
    }
    if dist.sup_bound.is_some_and(|k| k <= bound) {
        return Ok(dist.clone());
    }
    let cond = match &dist.kind {
        AtomKind::RealGaussian => conditioned_real_gaussian(bound)?,
        AtomKind::ComplexGaussian => conditioned_complex_gaussian(bound)?,
        AtomKind::Bernoulli => conditioned_discrete(&[(1.0, 0.5), (-1.0, 0.5)], bound),
        AtomKind::SparseSigned { p } => {
            let v = p.powf(-0.5);
            conditioned_discrete(&[(0.0, 1.0 - p), (v, p / 2.0), (-v, p / 2.0)], bound)
        }
        AtomKind::TruncatedRenormalized(_) => {
            return Err(invalid(format!(
                "cannot re-truncate {} below its existing bound",
                dist.name()
            )))
        }
    };
    if cond.mass <= 0.0 || cond.variance <= 1e-14 {
        return Err(Error::Degenerate(format!(
            "{} conditioned on |a| <= {bound} has zero variance",
            dist.name()
        )));
    }
    if cond.mass <= MIN_TRUNCATION_MASS {
        return Err(invalid(format!(
            "{} keeps only mass {:.4} inside |a| <= {bound} (need > {MIN_TRUNCATION_MASS})",
            dist.name(),
            cond.mass
        )));
    }
    let scale = cond.variance.sqrt().recip();
    Ok(AtomDistribution {
        field: dist.field,
        third_moment: cond.third * scale.powi(3),
        sup_bound: Some((bound + cond.mean.norm()) * scale),
        kind: AtomKind::TruncatedRenormalized(Box::new(Truncation {
            base: dist.clone(),
            bound,
            mass: cond.mass,
            shift: cond.mean,
            scale,
        })),
    })
}

impl fmt::Display for AtomDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for AtomDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rgauss" | "gaussian" => return Ok(Self::real_gaussian()),
            "cgauss" => return Ok(Self::complex_gaussian()),
            "bernoulli" => return Ok(Self::bernoulli()),
            _ => {}
        }
        if let Some(p) = s.strip_prefix("sparse:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad sparsity in atom '{s}'")))?;
            return Self::sparse_signed(p);
        }
        if let Some(rest) = s.strip_prefix("trunc:") {
            let (bound, base) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("atom '{s}' should read trunc:<bound>:<base>")))?;
            let bound: f64 = bound
                .parse()
                .map_err(|_| Error::Parse(format!("bad bound in atom '{s}'")))?;
            return base.parse::<Self>()?.truncate_renormalize(bound);
        }
        Err(Error::Parse(format!("unknown atom '{s}'")))
    }
}

impl Serialize for AtomDistribution {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for AtomDistribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_samples(xs: impl IntoIterator<Item = f64>) -> Self {
        let (mut n, mut mean, mut m2) = (0.0f64, 0.0f64, 0.0f64);
        for x in xs {
            n += 1.0;
            let d = x - mean;
            mean += d / n;
            m2 += d * (x - mean);
        }
        let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
        Self {
            value: mean,
            std_error: (var / n.max(1.0)).sqrt(),
        }
    }

    /// `|value − target| ≤ k·SE`, allowing exact agreement when SE vanishes.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error + 1e-12 * target.abs().max(1.0)
    }
}

/// Monte Carlo estimate of `E|a|^k` from `n_samples` draws of `stream`.
pub fn empirical_moment(
    dist: &AtomDistribution,
    k: u32,
    n_samples: usize,
    stream: &RngStream,
) -> Result<Estimate> {
    if k == 0 || k > 8 {
        return Err(invalid(format!("moment order must be in 1..=8, got {k}")));
    }
    if n_samples == 0 {
        return Err(invalid("empirical moment needs at least one sample"));
    }
    let mut cursor = stream.cursor();
    Ok(Estimate::from_samples(
        (0..n_samples).map(|_| sample_atom(dist, &mut cursor).norm().powi(k as i32)),
    ))
}

/// Normalization diagnostics for an atom.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizationReport {
    pub atom: String,
    pub samples: usize,
    pub mean_re: Estimate,
    pub mean_im: Estimate,
    pub second_moment: Estimate,
    pub var_re: Estimate,
    pub var_im: Estimate,
    pub cov_re_im: Estimate,
    pub max_modulus: f64,
    pub pass: bool,
}

/// Checks mean zero, unit variance, the complex componentwise normalization,
/// and the almost-sure bound, each at five standard errors.
pub fn check_normalization(
    dist: &AtomDistribution,
    n_samples: usize,
    stream: &RngStream,
) -> NormalizationReport {
    let mut cursor = stream.cursor();
    let draws: Vec<Complex64> = (0..n_samples).map(|_| sample_atom(dist, &mut cursor)).collect();
    let est = |f: &dyn Fn(&Complex64) -> f64| Estimate::from_samples(draws.iter().map(f));
    let mean_re = est(&|z| z.re);
    let mean_im = est(&|z| z.im);
    let second_moment = est(&|z| z.norm_sqr());
    let var_re = est(&|z| z.re * z.re);
    let var_im = est(&|z| z.im * z.im);
    let cov_re_im = est(&|z| z.re * z.im);
    let max_modulus = draws.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut pass = mean_re.within(0.0, 5.0) && mean_im.within(0.0, 5.0) && second_moment.within(1.0, 5.0);
    if dist.field == Field::Complex {
        pass &= var_re.within(0.5, 5.0) && var_im.within(0.5, 5.0) && cov_re_im.within(0.0, 5.0);
    } else {
        pass &= draws.iter().all(|z| z.im == 0.0);
    }
    if let Some(k) = dist.sup_bound {
        pass &= max_modulus <= k * (1.0 + 1e-12);
    }
    NormalizationReport {
        atom: dist.name(),
        samples: n_samples,
        mean_re,
        mean_im,
        second_moment,
        var_re,
        var_im,
        cov_re_im,
        max_modulus,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream() -> RngStream {
        RngStream::new(42, 0)
    }

    #[test]
    fn bernoulli_values() {
        let b = AtomDistribution::bernoulli();
        let mut c = stream().cursor();
        for _ in 0..100 {
            let v = sample_atom(&b, &mut c);
            assert!(v.re == 1.0 || v.re == -1.0);
            assert_eq!(v.im, 0.0);
        }
        let m = empirical_moment(&b, 2, 1000, &stream()).unwrap();
        assert_eq!(m.value, 1.0);
        assert_eq!(m.std_error, 0.0);
    }

    #[test]
    fn gaussian_fourth_moment() {
        let g = AtomDistribution::real_gaussian();
        let m = empirical_moment(&g, 4, 1_000_000, &stream()).unwrap();
        assert!(m.within(3.0, 5.0), "{m:?}");
        let c = AtomDistribution::complex_gaussian();
        let m = empirical_moment(&c, 2, 1_000_000, &stream()).unwrap();
        assert!(m.within(1.0, 5.0), "{m:?}");
    }

    #[test]
    fn exact_moments_match_third_moment_field() {
        for a in [
            AtomDistribution::real_gaussian(),
            AtomDistribution::complex_gaussian(),
            AtomDistribution::bernoulli(),
            AtomDistribution::sparse_signed(0.25).unwrap(),
        ] {
            assert!((a.abs_moment_exact(3).unwrap() - a.third_moment).abs() < 1e-12);
            assert!((a.abs_moment_exact(2).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!((AtomDistribution::real_gaussian().abs_moment_exact(4).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn moment_order_is_bounded() {
        assert!(empirical_moment(&AtomDistribution::bernoulli(), 9, 10, &stream()).is_err());
        assert!(empirical_moment(&AtomDistribution::bernoulli(), 0, 10, &stream()).is_err());
    }

    #[test]
    fn built_in_atoms_are_normalized() {
        for name in ["rgauss", "cgauss", "bernoulli", "sparse:0.25", "trunc:3:rgauss", "trunc:2:cgauss"] {
            let a: AtomDistribution = name.parse().unwrap();
            let r = check_normalization(&a, 100_000, &stream());
            assert!(r.pass, "{name}: {r:?}");
        }
    }

    #[test]
    fn truncation_of_bounded_support_is_identity() {
        let b = AtomDistribution::bernoulli();
        assert_eq!(b.truncate_renormalize(2.0).unwrap(), b);
        let s = AtomDistribution::sparse_signed(0.25).unwrap();
        assert_eq!(s.truncate_renormalize(2.0).unwrap(), s);
        let t = AtomDistribution::real_gaussian().truncate_renormalize(3.0).unwrap();
        assert_eq!(t.truncate_renormalize(10.0).unwrap(), t);
    }

    #[test]
    fn truncation_errors() {
        let g = AtomDistribution::real_gaussian();
        assert!(matches!(g.truncate_renormalize(0.0), Err(Error::Degenerate(_))));
        assert!(matches!(g.truncate_renormalize(-1.0), Err(Error::InvalidArgument(_))));
        // P(|g| <= 1) ≈ 0.68 is below the required mass.
        assert!(matches!(g.truncate_renormalize(1.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(
            AtomDistribution::bernoulli().truncate_renormalize(0.5),
            Err(Error::Degenerate(_))
        ));
        // Sparse atom cut below its nonzero values is a point mass at zero.
        assert!(matches!(
            AtomDistribution::sparse_signed(0.05).unwrap().truncate_renormalize(1.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn truncated_gaussian_matches_closed_form() {
        // Var(g | |g| <= b) = 1 − 2bφ(b)/(2Φ(b) − 1), with 2Φ(b) − 1 = erf(b/√2).
        let b = 3.0;
        let t = AtomDistribution::real_gaussian().truncate_renormalize(b).unwrap();
        let AtomKind::TruncatedRenormalized(tr) = &t.kind else {
            panic!("expected truncated kind")
        };
        let mass = statrs::function::erf::erf(b / 2f64.sqrt());
        let var = 1.0 - 2.0 * b * normal_pdf(b) / mass;
        assert!((tr.mass - mass).abs() < 1e-12);
        assert!((tr.scale - var.sqrt().recip()).abs() < 1e-10);
        assert!((t.sup_bound.unwrap() - b / var.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn truncated_complex_gaussian_matches_closed_form() {
        // |z|² ~ Exp(1): E[|z|² | |z| <= b] = (1 − (1 + b²)e^{−b²}) / (1 − e^{−b²}).
        let b: f64 = 2.0;
        let t = AtomDistribution::complex_gaussian().truncate_renormalize(b).unwrap();
        let AtomKind::TruncatedRenormalized(tr) = &t.kind else {
            panic!("expected truncated kind")
        };
        let e = (-b * b).exp();
        let second = (1.0 - (1.0 + b * b) * e) / (1.0 - e);
        assert!((tr.mass - (1.0 - e)).abs() < 1e-12);
        assert!((tr.scale - second.sqrt().recip()).abs() < 1e-10);
        assert_eq!(t.field, Field::Complex);
    }

    #[test]
    fn conditioned_moments_match_simulation() {
        // Independent route: estimate the conditioned law by rejection from plain draws.
        let b = 3.0;
        let g = AtomDistribution::real_gaussian();
        let mut c = RngStream::new(5, 1).cursor();
        let kept: Vec<f64> = (0..1_000_000)
            .map(|_| sample_atom(&g, &mut c).re)
            .filter(|x| x.abs() <= b)
            .collect();
        let var = Estimate::from_samples(kept.iter().map(|x| x * x));
        let t = g.truncate_renormalize(b).unwrap();
        let AtomKind::TruncatedRenormalized(tr) = &t.kind else {
            panic!()
        };
        assert!(var.within(tr.scale.powi(-2), 5.0), "{var:?} vs {}", tr.scale.powi(-2));
    }

    #[test]
    fn huge_bound_is_plain_gaussian() {
        let g = AtomDistribution::real_gaussian();
        let t = g.truncate_renormalize(1e100).unwrap();
        let s = stream();
        for i in 0..1000 {
            let a = g.sample(&mut s.draw(i)).re;
            let b = t.sample(&mut s.draw(i)).re;
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn truncated_samples_respect_bound() {
        let t: AtomDistribution = "trunc:4:rgauss".parse().unwrap();
        let k = t.sup_bound.unwrap();
        let mut c = stream().cursor();
        assert!((0..50_000).all(|_| sample_atom(&t, &mut c).norm() <= k));
    }

    #[test]
    fn names_round_trip() {
        for name in ["rgauss", "cgauss", "bernoulli", "sparse:0.5", "trunc:4:rgauss", "trunc:2.5:cgauss"] {
            let a: AtomDistribution = name.parse().unwrap();
            assert_eq!(a.name(), name);
            let json = serde_json::to_string(&a).unwrap();
            let back: AtomDistribution = serde_json::from_str(&json).unwrap();
            assert_eq!(back, a);
        }
        assert!("cauchy".parse::<AtomDistribution>().is_err());
        assert!("sparse:2".parse::<AtomDistribution>().is_err());
    }
}
