//! Seeded random streams, dense linear algebra, and samplers.

pub mod linalg;
pub mod matrix;
pub mod rng;
pub mod stable;

pub use matrix::DenseMatrix;
pub use rng::{RngStream, StreamPosition};
pub use stable::{
    calibrate_stable_scale, calibrate_stable_scale_empirical, empirical_abs_median,
    sample_gaussian_matrix, sample_stable, sample_stable_matrix, StableParams,
    MEDIAN_SCALE_CONSTANT,
};
