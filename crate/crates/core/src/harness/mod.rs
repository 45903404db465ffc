//! Monte Carlo experiments, goodness-of-fit statistics and figure data.

pub mod ecdf;
pub mod experiments;
pub mod figures;
pub mod runner;
pub mod svg;

pub use ecdf::{joint_ecdf, ks_critical, ks_critical_two_sample, kolmogorov_quantile, linspace, EmpiricalCdf};
pub use experiments::{
    condition_number_experiment, esd_vs_mp, spielman_teng_scan, ConditionReport, EsdReport, SpielmanTengReport,
};
pub use figures::{
    derived_seed, figure, joint_bottom_two, rectangular_ladder, stochastic_order, universality, Figure,
    Check, FigureOptions,
};
pub use runner::{
    default_workers, run_experiment, run_experiment_with, with_workers, ExperimentConfig, ExperimentResult,
    GoFReport, OutputPaths, Statistic, THREADS_ENV,
};
