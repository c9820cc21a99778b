//! One-dimensional pieces of a grid measure: marginals, slices, Frostman and
//! Kakutani diagnostics, and finite discretizations.

mod discrete;
mod frostman;
mod kakutani;
mod marginal;
mod slice;

pub use discrete::{discretize_grid, discretize_marginal, discretize_slice, DiscreteMeasure, DiscreteMeasure2};
pub use frostman::{frostman_bound, verify_frostman, FrostmanBound, FrostmanReport};
pub use kakutani::{kakutani_affinity, kakutani_product_curve};
pub use marginal::{classify_marginal, project_marginal, ClassReason, ClassTag, MarginalIfs, MeasureClass};
pub(crate) use slice::normalized_rows;
pub use slice::{slice_measure, slice_measure_or_lebesgue, DigitStream, SliceMeasure};
