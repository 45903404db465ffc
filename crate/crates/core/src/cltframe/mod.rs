//! Tight frames, the frame central limit theorem and concentration of
//! projected random vectors, all as empirical tests.

pub mod clt;
pub mod concentration;
pub mod frame;

pub use clt::{
    be_frame_distance, frame_covariance, monotonicity_ladder, spearman, CovarianceReport, FrameCltReport,
    LadderReport,
};
pub use concentration::{median_mean_gap, projection_concentration, ConcentrationReport};
pub use frame::{check_tight_frame, frame_sample, random_tight_frame, FrameReport, TightFrame, FRAME_TOL};
