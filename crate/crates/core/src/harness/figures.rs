//! Data, plots and checks for the seven figure reproductions.
//!
//! 1. `√n σ_n`, Bernoulli against gaussian.
//! 2. The same against `y = t` and `y = t − t³/3` (Spielman–Teng).
//! 3. Joint CDF of `(√n σ_n, √n σ_{n−1})`.
//! 4. `√n σ_{n−k}` for `k = 0, 1, 2`.
//! 5. Rectangular `(n − l) × n`, `l = 0, 1, 2`.
//! 6. Condition number, `τ = (2n/κ)²` against `1 − e^{−t}`.
//! 7. Non-iid sparse grids against `1 − e^{−x − x²/2}`.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::ensembles::{AtomDistribution, AtomGrid, EnsembleSpec, EntryPlan};
use crate::error::{invalid, Result};
use crate::harness::ecdf::{joint_ecdf, ks_critical_two_sample, linspace, EmpiricalCdf};
use crate::harness::experiments::{condition_number_experiment, spielman_teng_scan, TOP_BAND};
use crate::harness::runner::{run_experiment, ExperimentConfig, ExperimentResult, Statistic};
use crate::harness::svg;
use crate::limitlaws::LimitLaw;

/// Points on each plotted ECDF curve.
const CURVE_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Surface {
    pub label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major over `xs`, `ys` fastest.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// `"<="` or `">="`.
    pub relation: &'static str,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: "<=",
            bound,
            pass: value <= bound,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: ">=",
            bound,
            pass: value >= bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure {
    pub number: u8,
    pub title: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub curves: Vec<Curve>,
    pub surfaces: Vec<Surface>,
    pub checks: Vec<Check>,
}

impl Figure {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Writes `figN.json`, `figN.svg` (one per surface when there are
    /// surfaces) and one CSV per curve or surface; returns the paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = format!("fig{}", self.number);
        let mut written = Vec::new();
        let mut put = |name: String, body: String| -> Result<()> {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            written.push(p);
            Ok(())
        };
        for c in &self.curves {
            let mut body = String::from("t,value\n");
            for (t, v) in &c.points {
                body.push_str(&format!("{t:e},{v:e}\n"));
            }
            put(format!("{stem}_{}.csv", slug(&c.label)), body)?;
        }
        for s in &self.surfaces {
            let mut body = String::from("x,y,value\n");
            for (i, x) in s.xs.iter().enumerate() {
                for (j, y) in s.ys.iter().enumerate() {
                    body.push_str(&format!("{x:e},{y:e},{:e}\n", s.values[i * s.ys.len() + j]));
                }
            }
            put(format!("{stem}_{}.csv", slug(&s.label)), body)?;
            put(
                format!("{stem}_{}.svg", slug(&s.label)),
                svg::heat_map(&format!("{} ({})", self.title, s.label), &s.xs, &s.ys, &s.values),
            )?;
        }
        if !self.curves.is_empty() {
            let series: Vec<(String, Vec<(f64, f64)>)> =
                self.curves.iter().map(|c| (c.label.clone(), c.points.clone())).collect();
            put(format!("{stem}.svg"), svg::line_plot(&self.title, &series))?;
        }
        put(format!("{stem}.json"), serde_json::to_string_pretty(self)?)?;
        Ok(written)
    }
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub n: usize,
    /// Overrides the figure's default trial count.
    pub trials: Option<usize>,
    pub seed: u64,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            n: 100,
            trials: None,
            seed: 2009,
        }
    }
}

/// Trial counts of the original plots, except figure 2 which uses 20000
/// rather than 150000.
pub fn default_trials(number: u8) -> Option<usize> {
    match number {
        1 | 3 | 4 | 5 | 7 => Some(1000),
        2 => Some(20_000),
        6 => Some(2000),
        _ => None,
    }
}

/// Independent master seed for the `i`-th ensemble of an experiment.
pub fn derived_seed(seed: u64, i: u64) -> u64 {
    seed ^ (i + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn figure(number: u8, opts: &FigureOptions) -> Result<Figure> {
    let trials = opts
        .trials
        .or(default_trials(number))
        .ok_or_else(|| invalid(format!("figures are numbered 1 to 7, got {number}")))?;
    let (n, seed) = (opts.n, opts.seed);
    let mut fig = Figure {
        number,
        title: String::new(),
        n,
        trials,
        seed,
        curves: Vec::new(),
        surfaces: Vec::new(),
        checks: Vec::new(),
    };
    let ber = AtomDistribution::bernoulli();
    let gau = AtomDistribution::real_gaussian();
    match number {
        1 => {
            fig.title = format!("P(sqrt(n) sigma_n <= x), n={n}");
            let u = universality(&ber, &gau, n, trials, seed)?;
            let limit = limit_curve(LimitLaw::SqrtEdelmanReal, &[&u.a, &u.b]);
            fig.curves = curves(&[("bernoulli", &u.a), ("gaussian", &u.b)]);
            fig.curves.push(limit);
            fig.checks.push(Check::at_most("two-sample KS", u.ks, u.band));
            fig.checks.push(Check::at_most("Levy distance", u.levy, 0.05));
        }
        2 => {
            fig.title = format!("P(sqrt(n) sigma_n <= x) against y=x, n={n}");
            let grid = st_grid();
            for (i, (name, atom)) in [("bernoulli", &ber), ("gaussian", &gau)].into_iter().enumerate() {
                let r = spielman_teng_scan(atom, n, trials, &grid, derived_seed(seed, i as u64))?;
                fig.curves.push(Curve {
                    label: name.into(),
                    points: grid.iter().copied().zip(r.ecdf.iter().copied()).collect(),
                });
                fig.checks.push(Check::at_most(
                    format!("{name}: grid points above t + 3 SE"),
                    r.violations.len() as f64,
                    0.0,
                ));
                fig.checks.push(Check::at_most(format!("{name}: gap to t - t^3/3 on t <= 1/2"), r.taylor_gap, 0.02));
            }
            let fine = linspace(0.0, 1.0, 100);
            fig.curves.push(Curve {
                label: "y=x".into(),
                points: fine.iter().map(|&t| (t, t)).collect(),
            });
            fig.curves.push(Curve {
                label: "y=x-x^3/3".into(),
                points: fine.iter().map(|&t| (t, t - t.powi(3) / 3.0)).collect(),
            });
        }
        3 => {
            fig.title = format!("P(sqrt(n) sigma_n <= x, sqrt(n) sigma_(n-1) <= y), n={n}");
            let j = joint_bottom_two(&ber, &gau, n, trials, seed)?;
            fig.checks.push(Check::at_most("joint CDF sup gap", j.sup_gap, 0.1));
            fig.surfaces = vec![
                Surface {
                    label: "bernoulli".into(),
                    xs: j.xs.clone(),
                    ys: j.ys.clone(),
                    values: j.a,
                },
                Surface {
                    label: "gaussian".into(),
                    xs: j.xs,
                    ys: j.ys,
                    values: j.b,
                },
            ];
        }
        4 => {
            fig.title = format!("P(sqrt(n) sigma_(n-k) <= x), k=0,1,2, n={n}");
            let mut by_atom = Vec::new();
            for (i, (name, atom)) in [("bernoulli", &ber), ("gaussian", &gau)].into_iter().enumerate() {
                let r = run(square(atom, n, derived_seed(seed, i as u64))?, Statistic::HardEdgeK(3), trials)?;
                let marg: Vec<EmpiricalCdf> = (0..3)
                    .map(|k| EmpiricalCdf::new(r.coordinate(k).iter().map(|x| x.sqrt()).collect()))
                    .collect::<Result<_>>()?;
                by_atom.push((name, marg));
            }
            let all: Vec<&EmpiricalCdf> = by_atom.iter().flat_map(|(_, m)| m.iter()).collect();
            let grid = curve_grid(&all);
            for (name, marg) in &by_atom {
                for (k, m) in marg.iter().enumerate() {
                    fig.curves.push(curve_on(format!("{name} k={k}"), m, &grid));
                }
            }
            for k in 0..3 {
                let (a, b) = (&by_atom[0].1[k], &by_atom[1].1[k]);
                fig.checks.push(Check::at_most(
                    format!("k={k}: bernoulli vs gaussian KS"),
                    a.ks_two_sample(b),
                    ks_critical_two_sample(0.01, a.len(), b.len())?,
                ));
            }
        }
        5 => {
            fig.title = format!("P(sqrt(n) sigma_(n-l) <= x) for (n-l) x n, l=0,1,2, n={n}");
            let mut by_atom = Vec::new();
            for (i, (name, atom)) in [("bernoulli", &ber), ("gaussian", &gau)].into_iter().enumerate() {
                by_atom.push((name, rectangular_ladder(atom, n, &[0, 1, 2], trials, derived_seed(seed, i as u64))?));
            }
            let all: Vec<&EmpiricalCdf> = by_atom.iter().flat_map(|(_, m)| m.iter()).collect();
            let grid = curve_grid(&all);
            for (name, ladder) in &by_atom {
                for (l, m) in ladder.iter().enumerate() {
                    fig.curves.push(curve_on(format!("{name} l={l}"), m, &grid));
                }
                let o = stochastic_order(ladder, &grid, 2.0);
                fig.checks.push(Check::at_most(
                    format!("{name}: ordering excess over 2 SE"),
                    o.max_excess,
                    0.0,
                ));
            }
        }
        6 => {
            fig.title = format!("P((2n/kappa)^2 <= t), complex gaussian, n={n}");
            let r = condition_number_experiment(&AtomDistribution::complex_gaussian(), n, trials, seed)?;
            let grid = curve_grid(&[&r.tau]);
            fig.curves.push(curve_on("tau".into(), &r.tau, &grid));
            fig.curves.push(Curve {
                label: "1-exp(-t)".into(),
                points: grid.iter().map(|&t| (t, LimitLaw::EdelmanComplex.cdf(t))).collect(),
            });
            fig.checks.push(Check::at_most("KS of tau vs 1-exp(-t)", r.ks, 0.08));
            fig.checks.push(Check::at_least(
                format!("fraction with sigma_1/sqrt(n) in [{}, {}]", TOP_BAND.0, TOP_BAND.1),
                r.top_in_band,
                0.99,
            ));
        }
        7 => {
            fig.title = format!("P(sqrt(n) sigma_n <= x), non-iid sparse entries, n={n}");
            let mut marg = Vec::new();
            for (i, modulus) in [3usize, 4].into_iter().enumerate() {
                let plan = EntryPlan::Grid(AtomGrid::sparse_mod(modulus)?);
                let ens = EnsembleSpec::new(n, n, plan)?.with_seed(derived_seed(seed, i as u64));
                let r = run(ens, Statistic::SqrtSigmaMin, trials)?;
                let ks = r.ecdf.ks_to(|x| LimitLaw::SqrtEdelmanReal.cdf(x));
                fig.checks.push(Check::at_most(format!("grid{modulus}: KS vs 1-exp(-x-x^2/2)"), ks, 0.08));
                marg.push((format!("grid{modulus}"), r.ecdf));
            }
            let refs: Vec<&EmpiricalCdf> = marg.iter().map(|m| &m.1).collect();
            let limit = limit_curve(LimitLaw::SqrtEdelmanReal, &refs);
            let grid: Vec<f64> = limit.points.iter().map(|p| p.0).collect();
            for (name, m) in &marg {
                fig.curves.push(curve_on(name.clone(), m, &grid));
            }
            fig.curves.push(limit);
        }
        _ => return Err(invalid(format!("figures are numbered 1 to 7, got {number}"))),
    }
    Ok(fig)
}

/// `t ∈ {0.05, 0.10, …, 1.00}`.
pub fn st_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 * 0.05).collect()
}

fn square(atom: &AtomDistribution, n: usize, seed: u64) -> Result<EnsembleSpec> {
    Ok(EnsembleSpec::square(n, atom.clone())?.with_seed(seed))
}

fn run(ens: EnsembleSpec, stat: Statistic, trials: usize) -> Result<ExperimentResult> {
    run_experiment(&ExperimentConfig::new(ens, stat, trials))
}

/// `[0, x_max]` with `x_max` the largest 99.5% quantile among `cdfs`.
fn curve_grid(cdfs: &[&EmpiricalCdf]) -> Vec<f64> {
    let top = cdfs.iter().map(|c| c.quantile(0.995)).fold(0.0, f64::max);
    linspace(0.0, top, CURVE_POINTS)
}

fn curve_on(label: String, cdf: &EmpiricalCdf, grid: &[f64]) -> Curve {
    Curve {
        label,
        points: grid.iter().map(|&t| (t, cdf.eval(t))).collect(),
    }
}

fn curves(named: &[(&str, &EmpiricalCdf)]) -> Vec<Curve> {
    let refs: Vec<&EmpiricalCdf> = named.iter().map(|p| p.1).collect();
    let grid = curve_grid(&refs);
    named.iter().map(|(l, c)| curve_on((*l).into(), c, &grid)).collect()
}

fn limit_curve(law: LimitLaw, cdfs: &[&EmpiricalCdf]) -> Curve {
    let grid = curve_grid(cdfs);
    Curve {
        label: law.name().into(),
        points: grid.iter().map(|&t| (t, law.cdf(t))).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalityReport {
    #[serde(skip)]
    pub a: EmpiricalCdf,
    #[serde(skip)]
    pub b: EmpiricalCdf,
    pub ks: f64,
    pub levy: f64,
    /// Two-sample 1% KS critical value.
    pub band: f64,
    pub excluded: (usize, usize),
}

/// `√n σ_n` under two atoms, each with `trials` draws.
pub fn universality(
    atom_a: &AtomDistribution,
    atom_b: &AtomDistribution,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<UniversalityReport> {
    let ra = run(square(atom_a, n, derived_seed(seed, 0))?, Statistic::SqrtSigmaMin, trials)?;
    let rb = run(square(atom_b, n, derived_seed(seed, 1))?, Statistic::SqrtSigmaMin, trials)?;
    Ok(UniversalityReport {
        ks: ra.ecdf.ks_two_sample(&rb.ecdf),
        levy: ra.ecdf.levy_distance(&rb.ecdf),
        band: ks_critical_two_sample(0.01, ra.ecdf.len(), rb.ecdf.len())?,
        excluded: (ra.excluded.len(), rb.excluded.len()),
        a: ra.ecdf,
        b: rb.ecdf,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointReport {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub sup_gap: f64,
}

/// Grid of the joint bottom-two CDF: 20 points on `(0, 2.5]` for
/// `√n σ_n` and on `(0, 5]` for `√n σ_{n−1}`.
pub fn joint_grid() -> (Vec<f64>, Vec<f64>) {
    let xs = (1..=20).map(|i| 2.5 * i as f64 / 20.0).collect();
    let ys = (1..=20).map(|i| 5.0 * i as f64 / 20.0).collect();
    (xs, ys)
}

pub fn joint_bottom_two(
    atom_a: &AtomDistribution,
    atom_b: &AtomDistribution,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<JointReport> {
    let (xs, ys) = joint_grid();
    let axes = vec![xs.clone(), ys.clone()];
    let joint = |atom: &AtomDistribution, i: u64| -> Result<Vec<f64>> {
        let r = run(square(atom, n, derived_seed(seed, i))?, Statistic::HardEdgeK(2), trials)?;
        let pts: Vec<Vec<f64>> = r.samples.iter().map(|s| s.iter().map(|x| x.sqrt()).collect()).collect();
        joint_ecdf(&pts, &axes)
    };
    let a = joint(atom_a, 0)?;
    let b = joint(atom_b, 1)?;
    let sup_gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(JointReport { xs, ys, a, b, sup_gap })
}

/// `√n σ_min` of `(n − l) × n` matrices, one ECDF per `l`.
pub fn rectangular_ladder(
    atom: &AtomDistribution,
    n: usize,
    ls: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<EmpiricalCdf>> {
    ls.iter()
        .enumerate()
        .map(|(i, &l)| {
            let ens = EnsembleSpec::rectangular(n, l, EntryPlan::Iid(atom.clone()))?
                .with_seed(derived_seed(seed, i as u64));
            Ok(run(ens, Statistic::SqrtSigmaMin, trials)?.ecdf)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderReport {
    /// `max_x max_i [F_i(x) − F_{i−1}(x) − k·SE_i(x)]`; nonpositive when
    /// every consecutive pair is ordered within the band.
    pub max_excess: f64,
    pub holds: bool,
}

/// Checks `F_0 ≥ F_1 ≥ ⋯` pointwise on `grid` up to `k` standard errors of
/// the difference of two independent ECDFs.
pub fn stochastic_order(cdfs: &[EmpiricalCdf], grid: &[f64], k: f64) -> OrderReport {
    let mut max_excess = f64::NEG_INFINITY;
    for w in cdfs.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        for &x in grid {
            let (p, q) = (prev.eval(x), next.eval(x));
            let se = (p * (1.0 - p) / prev.len() as f64 + q * (1.0 - q) / next.len() as f64).sqrt();
            max_excess = max_excess.max(q - p - k * se);
        }
    }
    if !max_excess.is_finite() {
        max_excess = 0.0;
    }
    OrderReport {
        max_excess,
        holds: max_excess <= 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        let a = EmpiricalCdf::new(vec![0.0, 1.0, 2.0]).unwrap();
        let b = EmpiricalCdf::new(vec![1.0, 2.0, 3.0]).unwrap();
        let grid = linspace(0.0, 3.0, 30);
        assert!(stochastic_order(&[a.clone(), b.clone()], &grid, 0.0).holds);
        assert!(!stochastic_order(&[b, a], &grid, 0.0).holds);
    }

    #[test]
    fn unknown_figure() {
        assert!(figure(0, &FigureOptions::default()).is_err());
        assert!(figure(8, &FigureOptions::default()).is_err());
        assert_eq!(default_trials(2), Some(20_000));
    }

    #[test]
    fn small_figure_writes_files() {
        let opts = FigureOptions {
            n: 12,
            trials: Some(60),
            seed: 1,
        };
        let fig = figure(5, &opts).unwrap();
        assert_eq!(fig.curves.len(), 6);
        let dir = tempfile::tempdir().unwrap();
        let paths = fig.write(dir.path()).unwrap();
        assert!(paths.iter().any(|p| p.ends_with("fig5.json")));
        assert!(paths.iter().any(|p| p.ends_with("fig5.svg")));
        let csv = std::fs::read_to_string(dir.path().join("fig5_bernoulli_l_0.csv")).unwrap();
        assert!(csv.starts_with("t,value\n"));
        let fig3 = figure(3, &opts).unwrap();
        assert_eq!(fig3.surfaces[0].values.len(), 400);
    }
}
