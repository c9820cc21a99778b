//! Fourier analysis of grid IFS measures on the unit square.
//!
//! A grid IFS keeps some cells of an `m x n` grid and weights them; its
//! invariant measure is usually singular. This crate classifies which kind of
//! double Fourier series the measure's `L^2` space admits, computes the
//! measure's Fourier-Stieltjes transforms with certified truncation error, and
//! builds the non-orthogonal (Kaczmarz) expansions themselves.
//!
//! Exact quantities (weights, cylinder masses, every threshold a criterion
//! compares) are rationals; transforms and expansions are floating point.
//! Both are generic, see [`scalar`]. The aliases below fix the common choice
//! of `BigRational` and `f64`.
//!
//! Transform convention: `mu_hat(xi) = int exp(-2 pi i xi x) dmu(x)`.

pub mod budget;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod grid_ifs;
pub mod kaczmarz;
pub mod measures;
pub mod moments;
pub mod scalar;

pub use budget::Budget;
pub use classify::{classify_grid, AdmissibilityReport, CriterionResult, SeriesType, SliceDirection, Verdict};
pub use error::{Error, Result};
pub use grid_ifs::{AdicRectangle, Axis, GridSpec, GridStats, Raster};
pub use kaczmarz::{
    CoefficientRule, EffectiveSequence, Expand2dOptions, Expansion1D, Expansion2D, FrameReport, Orientation, SeriesChoice,
};
pub use measures::{
    DigitStream, DiscreteMeasure, DiscreteMeasure2, FrostmanBound, MarginalIfs, MeasureClass, SliceMeasure,
};
pub use moments::{MomentTable, MomentValue};
pub use scalar::{Exact, Real};

/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Complex double.
pub type Complex = num_complex::Complex<f64>;

pub type Grid = GridSpec<Rational>;
pub type Stats = GridStats<Rational>;
pub type Marginal = MarginalIfs<Rational>;
pub type Slice = SliceMeasure<Rational>;
pub type Discrete = DiscreteMeasure<Rational>;
pub type Discrete2 = DiscreteMeasure2<Rational>;
pub type Moment = MomentValue<f64>;
pub type Moments = MomentTable<f64>;
pub type Sequence = EffectiveSequence<f64>;
pub type Series1 = Expansion1D<f64>;
pub type Series2 = Expansion2D<f64>;
