//! Empirical distribution functions and the distances between them.

use serde::Serialize;

use crate::error::{invalid, Result};

/// Right-continuous step function of a finite sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

/// Asymptotic Kolmogorov quantiles `c(α)` with `P(√n D_n > c(α)) → α`.
///
/// The usual table values at 1% and 5%; elsewhere the leading term of the
/// tail, `√(−ln(α/2)/2)`, which is accurate for small `α`.
pub fn kolmogorov_quantile(alpha: f64) -> Result<f64> {
    match alpha {
        0.01 => Ok(1.628),
        0.05 => Ok(1.358),
        a if a > 0.0 && a < 0.2 => Ok((-(a / 2.0).ln() / 2.0).sqrt()),
        _ => Err(invalid(format!("KS level must lie in (0, 0.2), got {alpha}"))),
    }
}

/// One-sample KS critical value `c(α)/√n`.
pub fn ks_critical(alpha: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("KS critical value needs at least one sample"));
    }
    Ok(kolmogorov_quantile(alpha)? / (n as f64).sqrt())
}

/// Two-sample KS critical value `c(α)·√((n+m)/(nm))`.
pub fn ks_critical_two_sample(alpha: f64, n: usize, m: usize) -> Result<f64> {
    if n == 0 || m == 0 {
        return Err(invalid("KS critical value needs nonempty samples"));
    }
    let (n, m) = (n as f64, m as f64);
    Ok(kolmogorov_quantile(alpha)? * ((n + m) / (n * m)).sqrt())
}

impl EmpiricalCdf {
    /// Sorts the samples; rejects empty input and NaN.
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(invalid("empirical CDF of an empty sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(invalid("empirical CDF sample contains NaN"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// `#{x_i ≤ t} / n`.
    pub fn eval(&self, t: f64) -> f64 {
        self.samples.partition_point(|&x| x <= t) as f64 / self.len() as f64
    }

    /// `#{x_i < t} / n`, the left limit at `t`.
    pub fn eval_left(&self, t: f64) -> f64 {
        self.samples.partition_point(|&x| x < t) as f64 / self.len() as f64
    }

    /// Smallest sample `x` with `F(x) ≥ p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let k = ((p * n as f64).ceil() as usize).clamp(1, n);
        self.samples[k - 1]
    }

    /// Distinct sample values with the CDF just below and at each.
    fn steps(&self) -> Vec<(f64, f64, f64)> {
        let n = self.len() as f64;
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.samples.len() {
            let x = self.samples[i];
            let mut j = i;
            while j < self.samples.len() && self.samples[j] == x {
                j += 1;
            }
            out.push((x, i as f64 / n, j as f64 / n));
            i = j;
        }
        out
    }

    /// `sup_t |F_n(t) − F(t)|` for a continuous CDF `F`, checking both sides
    /// of every jump (ties collapse into a single jump).
    pub fn ks_to(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        self.steps()
            .into_iter()
            .map(|(x, below, at)| {
                let f = cdf(x);
                (f - below).abs().max((at - f).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `sup_t |F_n(t) − G_m(t)|`.
    pub fn ks_two_sample(&self, other: &EmpiricalCdf) -> f64 {
        self.samples
            .iter()
            .chain(&other.samples)
            .map(|&t| (self.eval(t) - other.eval(t)).abs())
            .fold(0.0, f64::max)
    }

    /// Lévy distance: the least `h` with `F(x−h) − h ≤ G(x) ≤ F(x+h) + h`
    /// for all `x`, located by bisection to `1e-4`.
    pub fn levy_distance(&self, other: &EmpiricalCdf) -> f64 {
        let (mut lo, mut hi) = (0.0, 1.0);
        if self.levy_holds(other, 0.0) {
            return 0.0;
        }
        while hi - lo > 1e-4 {
            let mid = 0.5 * (lo + hi);
            if self.levy_holds(other, mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Lévy distance to a continuous CDF `G`: the least `h` with
    /// `G(x−h) − h ≤ F_n(x) ≤ G(x+h) + h` for all `x`, by bisection to `1e-4`.
    pub fn levy_to(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let steps = self.steps();
        // F_n is constant between jumps, so the right side binds just at a
        // jump and the left side just below one.
        let holds = |h: f64| {
            steps.iter().all(|&(x, below, at)| {
                at <= cdf(x + h) + h + 1e-12 && cdf(x - h) - h <= below + 1e-12
            })
        };
        if holds(0.0) {
            return 0.0;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > 1e-4 {
            let mid = 0.5 * (lo + hi);
            if holds(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// Both step functions are piecewise constant, so each side of the
    /// sandwich is worst at a jump of the function on the larger side.
    fn levy_holds(&self, other: &EmpiricalCdf, h: f64) -> bool {
        let tol = 1e-12;
        let upper = other
            .samples
            .iter()
            .all(|&x| other.eval(x) <= self.eval(x + h) + h + tol);
        let lower = self
            .samples
            .iter()
            .all(|&x| self.eval(x) - h <= other.eval(x + h) + tol);
        upper && lower
    }
}

/// Empirical joint CDF `P(s_0 ≤ a_0, …, s_{k−1} ≤ a_{k−1})` of `k`-vectors on
/// the product grid `axes[0] × ⋯ × axes[k−1]`, flattened with the last axis
/// fastest.
pub fn joint_ecdf(samples: &[Vec<f64>], axes: &[Vec<f64>]) -> Result<Vec<f64>> {
    if samples.is_empty() {
        return Err(invalid("joint CDF of an empty sample"));
    }
    let k = axes.len();
    if k == 0 {
        return Err(invalid("joint CDF needs at least one axis"));
    }
    if let Some(s) = samples.iter().find(|s| s.len() < k) {
        return Err(invalid(format!("sample of length {} on a {k}-axis grid", s.len())));
    }
    let total: usize = axes.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; k];
    for _ in 0..total {
        let count = samples
            .iter()
            .filter(|s| (0..k).all(|c| s[c] <= axes[c][idx[c]]))
            .count();
        out.push(count as f64 / samples.len() as f64);
        for c in (0..k).rev() {
            idx[c] += 1;
            if idx[c] < axes[c].len() {
                break;
            }
            idx[c] = 0;
        }
    }
    Ok(out)
}

/// Evenly spaced grid `a, …, b` with `steps` intervals.
pub fn linspace(a: f64, b: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![a];
    }
    (0..=steps)
        .map(|i| a + (b - a) * i as f64 / steps as f64)
        .collect()
}
