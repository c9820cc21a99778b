//! Grid IFS specifications and everything computable from the cell and
//! weight tables alone: statistics, rectangle measures, sampling, rasters.

mod raster;
mod rect;
mod sample;
mod spec;
mod stats;

pub use raster::{render_raster, Raster};
pub use rect::{rectangle_measure, AdicRectangle};
pub use sample::{sample_points, seeded_rng, DEFAULT_DEPTH};
pub use spec::{Axis, GridSpec};
pub use stats::{attractor_dimension, grid_stats, mcmullen_dimension, xi_profile, GridStats};
