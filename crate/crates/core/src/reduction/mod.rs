//! The reduction from the smallest singular value of a large matrix to that
//! of a small projected one, as executable algorithms with certificates.

pub mod distance;
pub mod pipeline;
pub mod projection;
pub mod rectangular;
pub mod sampling;
pub mod small;

pub use distance::{
    correlation_bound_check, distance_distribution_experiment, distance_reference_law,
    distance_to_span, distances_to_hyperplanes, first_column_distance, hyperplane_distance,
    CorrelationReport, DistanceReport,
};
pub use pipeline::{pipeline_coherence, PipelineReport};
pub use projection::{
    build_projection, build_projection_with, normal_vector_max_coordinate, trailing_complement,
    ProjectionCertificate, ProjectionWitness, DELOCALIZATION_EXPONENT,
};
pub use rectangular::{rectangular_reduce, rectangular_statistic, RectangularReduction};
pub use sampling::{
    draw_indices, sample_rows, sampling_estimator, sampling_second_moment_oracle, SamplingEstimate,
    SamplingMode, SecondMoment,
};
pub use small::{count_below, count_small_singular_values, small_count_target, small_value_cutoff};
