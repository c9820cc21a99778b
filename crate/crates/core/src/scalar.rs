//! Scalar abstractions.
//!
//! Two families of numbers appear in this crate. Weights, cylinder masses and
//! every quantity a criterion compares are exact rationals ([`Exact`]). Phases,
//! transforms, dimensions and the Kaczmarz machinery run in floating point
//! ([`Real`]).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Floating point scalar used for transforms and expansions.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; exact for every value this crate feeds it.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable")
    }

    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact rational scalar used for weights and measures of cylinders.
pub trait Exact:
    Clone + Ord + Hash + Debug + Display + Num + Signed + FromStr + ToPrimitive + Send + Sync + 'static
{
    fn from_usize(value: usize) -> Self;

    /// `numer / denom`; panics on a zero denominator.
    fn from_fraction(numer: i64, denom: i64) -> Self;

    /// Smallest integer `t` with `self * 2^bits <= t`, clamped to `[0, 2^bits]`.
    fn dyadic_ceil(&self, bits: u32) -> u64;

    /// Nearest integer (halves away from zero), or `None` if it does not fit.
    fn round_to_u64(&self) -> Option<u64>;

    fn to_real<F: Real>(&self) -> F {
        F::of(self.to_f64().unwrap_or(f64::NAN))
    }

    fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T> Exact for Ratio<T>
where
    T: Clone + Integer + Signed + Hash + Debug + Display + FromPrimitive + ToPrimitive + FromStr + Send + Sync + 'static,
    Ratio<T>: ToPrimitive,
{
    fn from_usize(value: usize) -> Self {
        Ratio::from_integer(T::from_usize(value).expect("integer type too narrow"))
    }

    fn from_fraction(numer: i64, denom: i64) -> Self {
        Ratio::new(
            T::from_i64(numer).expect("integer type too narrow"),
            T::from_i64(denom).expect("integer type too narrow"),
        )
    }

    fn dyadic_ceil(&self, bits: u32) -> u64 {
        let scale = T::from_u64(1u64 << bits).expect("integer type too narrow");
        let scaled = self.clone() * Ratio::from_integer(scale);
        let limit = 1u64 << bits;
        if scaled <= Ratio::from_integer(T::zero()) {
            return 0;
        }
        scaled.ceil().to_integer().to_u64().map_or(limit, |t| t.min(limit))
    }

    fn round_to_u64(&self) -> Option<u64> {
        self.round().to_integer().to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};

    #[test]
    fn dyadic_ceil_is_exact() {
        let half = BigRational::from_fraction(1, 2);
        assert_eq!(half.dyadic_ceil(53), 1u64 << 52);
        let third = BigRational::from_fraction(1, 3);
        // 2^53 / 3 = 3002399751580330.67
        assert_eq!(third.dyadic_ceil(53), 3_002_399_751_580_331);
        assert_eq!(<BigRational as Exact>::from_usize(1).dyadic_ceil(53), 1u64 << 53);
        assert_eq!(Rational64::from_fraction(0, 1).dyadic_ceil(53), 0);
    }

    #[test]
    fn round_halves_away() {
        assert_eq!(Rational64::from_fraction(5, 2).round_to_u64(), Some(3));
        assert_eq!(Rational64::from_fraction(7, 3).round_to_u64(), Some(2));
    }

    #[test]
    fn parses_rational_strings() {
        let q: BigRational = "91/900".parse().unwrap();
        assert_eq!(q, BigRational::from_fraction(91, 900));
        let one: BigRational = "1".parse().unwrap();
        assert_eq!(one, <BigRational as Exact>::from_usize(1));
    }
}
