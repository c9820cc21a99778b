//! Fourier-Stieltjes transforms `mu_hat(xi) = int exp(-2 pi i xi x) dmu`.
//!
//! For a digit measure, invariance gives `mu_hat(k) = prod_{t >= 1} W(k / b^t)`
//! with `W(u) = sum_i w_i exp(-2 pi i u i)`. Since `|1 - W(k / b^t)| <=
//! 2 pi |k| (b - 1) / b^t`, cutting the product after `T` factors moves it by
//! at most `2 pi |k| b^-T`; that bound is the reported `error_bound`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid_ifs::GridSpec;
use crate::measures::{DiscreteMeasure, DiscreteMeasure2, MarginalIfs, SliceMeasure};
use crate::scalar::{Exact, Real};

/// A transform value with its certified truncation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentValue<F> {
    pub value: Complex<F>,
    pub error_bound: F,
    /// Number of product factors used; 0 at the origin, where the value is exact.
    pub truncation_depth: usize,
}

impl<F: Real> MomentValue<F> {
    fn exact_one() -> Self {
        Self { value: Complex::new(F::one(), F::zero()), error_bound: F::zero(), truncation_depth: 0 }
    }
}

const MAX_FACTORS: usize = 4096;

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Invalid(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

fn check_base(base: usize) -> Result<()> {
    if base < 2 {
        return Err(Error::Unsupported(format!("base {base} digit measure has no product formula")));
    }
    Ok(())
}

/// `2 pi (|k| n^-T + |l| m^-T)` for `T` factors.
fn tail_bound(terms: &[(i64, usize)], depth: usize) -> f64 {
    terms
        .iter()
        .map(|&(k, base)| 2.0 * std::f64::consts::PI * (k.unsigned_abs() as f64) / (base as f64).powi(depth as i32))
        .sum()
}

/// Smallest `T >= 1` whose tail bound is at most `eps`.
fn depth_for(terms: &[(i64, usize)], eps: f64) -> Result<usize> {
    (1..=MAX_FACTORS)
        .find(|&t| tail_bound(terms, t) <= eps)
        .ok_or_else(|| Error::Budget(format!("more than {MAX_FACTORS} factors needed for eps = {eps}")))
}

/// Truncation depth used for frequency `k` in base `base` at tolerance `eps`.
pub fn truncation_depth(base: usize, k: i64, eps: f64) -> Result<usize> {
    check_eps(eps)?;
    check_base(base)?;
    depth_for(&[(k, base)], eps)
}

/// `k * d / b^t` modulo 1, centered in `(-1/2, 1/2]` so that `-k` gives the exact negative.
/// Reduced exactly when `b^t` fits in 128 bits.
fn phase_fraction(k: i64, d: u64, base: usize, t: usize) -> f64 {
    match (0..t).try_fold(1i128, |acc, _| acc.checked_mul(base as i128)) {
        Some(p) => {
            let r = (i128::from(k).rem_euclid(p) * i128::from(d)).rem_euclid(p);
            let r = if 2 * r > p { r - p } else { r };
            r as f64 / p as f64
        }
        None => {
            let x = (k as f64) * (d as f64) / (base as f64).powi(t as i32);
            x - x.round()
        }
    }
}

/// `exp(-2 pi i k d / b^t)`.
pub(crate) fn phase<F: Real>(k: i64, d: u64, base: usize, t: usize) -> Complex<F> {
    let angle = -2.0 * std::f64::consts::PI * phase_fraction(k, d, base, t);
    Complex::new(F::of(angle.cos()), F::of(angle.sin()))
}

/// `W(k / b^t) = sum_i w_i exp(-2 pi i k i / b^t)`.
fn digit_factor<F: Real>(weights: &[F], k: i64, t: usize) -> Complex<F> {
    let base = weights.len();
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .fold(Complex::new(F::zero(), F::zero()), |acc, (i, &w)| acc + phase::<F>(k, i as u64, base, t) * w)
}

fn real_weights<F: Real, Q: Exact>(weights: &[Q]) -> Vec<F> {
    weights.iter().map(|w| w.to_real()).collect()
}

/// `prod_{t=1}^{depth} W(k / b^t)`.
pub fn marginal_transform_truncated<F: Real, Q: Exact>(marg: &MarginalIfs<Q>, k: i64, depth: usize) -> Result<Complex<F>> {
    check_base(marg.base())?;
    let w: Vec<F> = real_weights(marg.weights());
    Ok((1..=depth).fold(Complex::new(F::one(), F::zero()), |acc, t| acc * digit_factor(&w, k, t)))
}

/// Transform of a digit measure at integer frequency `k`, with error at most `eps`.
pub fn marginal_transform<F: Real, Q: Exact>(marg: &MarginalIfs<Q>, k: i64, eps: f64) -> Result<MomentValue<F>> {
    check_eps(eps)?;
    check_base(marg.base())?;
    if k == 0 {
        return Ok(MomentValue::exact_one());
    }
    let depth = depth_for(&[(k, marg.base())], eps)?;
    Ok(MomentValue {
        value: marginal_transform_truncated(marg, k, depth)?,
        error_bound: F::of(tail_bound(&[(k, marg.base())], depth)),
        truncation_depth: depth,
    })
}

/// `prod_{t=1}^{depth} sum_i v_{t-1, i} exp(-2 pi i k i / n^t)` for the slice's digit vectors.
pub fn slice_transform_truncated<F: Real, Q: Exact>(slice: &SliceMeasure<Q>, k: i64, depth: usize) -> Result<Complex<F>> {
    check_base(slice.base())?;
    Ok((1..=depth).fold(Complex::new(F::one(), F::zero()), |acc, t| {
        let w: Vec<F> = real_weights(slice.weights_at(t - 1));
        acc * digit_factor(&w, k, t)
    }))
}

pub fn slice_transform<F: Real, Q: Exact>(slice: &SliceMeasure<Q>, k: i64, eps: f64) -> Result<MomentValue<F>> {
    check_eps(eps)?;
    check_base(slice.base())?;
    if k == 0 {
        return Ok(MomentValue::exact_one());
    }
    let depth = depth_for(&[(k, slice.base())], eps)?;
    Ok(MomentValue {
        value: slice_transform_truncated(slice, k, depth)?,
        error_bound: F::of(tail_bound(&[(k, slice.base())], depth)),
        truncation_depth: depth,
    })
}

/// `prod_{t=1}^{depth} sum_ij p_ij exp(-2 pi i (k i / n^t + l j / m^t))`.
pub fn transform_2d_truncated<F: Real, Q: Exact>(spec: &GridSpec<Q>, k: i64, l: i64, depth: usize) -> Result<Complex<F>> {
    check_base(spec.cols())?;
    check_base(spec.rows())?;
    let cells: Vec<(u64, u64, F)> = spec.kept_cells().map(|(i, j, p)| (i as u64, j as u64, p.to_real())).collect();
    Ok((1..=depth).fold(Complex::new(F::one(), F::zero()), |acc, t| {
        let factor = cells.iter().fold(Complex::new(F::zero(), F::zero()), |s, &(i, j, p)| {
            s + phase::<F>(k, i, spec.cols(), t) * phase::<F>(l, j, spec.rows(), t) * p
        });
        acc * factor
    }))
}

pub fn transform_2d<F: Real, Q: Exact>(spec: &GridSpec<Q>, k: i64, l: i64, eps: f64) -> Result<MomentValue<F>> {
    check_eps(eps)?;
    check_base(spec.cols())?;
    check_base(spec.rows())?;
    if k == 0 && l == 0 {
        return Ok(MomentValue::exact_one());
    }
    let terms = [(k, spec.cols()), (l, spec.rows())];
    let depth = depth_for(&terms, eps)?;
    Ok(MomentValue {
        value: transform_2d_truncated(spec, k, l, depth)?,
        error_bound: F::of(tail_bound(&terms, depth)),
        truncation_depth: depth,
    })
}

/// `sum_atoms w exp(-2 pi i k x)`, summed in atom order.
pub fn discrete_transform<F: Real, Q: Exact>(dm: &DiscreteMeasure<Q>, k: i64) -> Complex<F> {
    dm.atoms.iter().fold(Complex::new(F::zero(), F::zero()), |acc, (x, w)| {
        acc + phase::<F>(k, *x, dm.base, dm.depth) * w.to_real::<F>()
    })
}

pub fn discrete_transform_2d<F: Real, Q: Exact>(dm: &DiscreteMeasure2<Q>, k: i64, l: i64) -> Complex<F> {
    dm.atoms.iter().fold(Complex::new(F::zero(), F::zero()), |acc, (x, y, w)| {
        acc + phase::<F>(k, *x, dm.cols, dm.depth) * phase::<F>(l, *y, dm.rows, dm.depth) * w.to_real::<F>()
    })
}

/// Transform values indexed by `(k, l)`; one-dimensional tables use `l = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable<F> {
    pub descriptor: String,
    pub two_dimensional: bool,
    pub entries: BTreeMap<(i64, i64), MomentValue<F>>,
}

impl<F: Real> MomentTable<F> {
    /// `mu_hat(k)` for every `k` in `ks`.
    pub fn marginal<Q: Exact>(marg: &MarginalIfs<Q>, ks: std::ops::RangeInclusive<i64>, eps: f64) -> Result<Self> {
        let values: Vec<(i64, MomentValue<F>)> =
            ks.into_par_iter().map(|k| marginal_transform(marg, k, eps).map(|v| (k, v))).collect::<Result<_>>()?;
        Ok(Self {
            descriptor: format!("digit measure base {} weights {}", marg.base(), join(marg.weights())),
            two_dimensional: false,
            entries: values.into_iter().map(|(k, v)| ((k, 0), v)).collect(),
        })
    }

    pub fn slice<Q: Exact>(slice: &SliceMeasure<Q>, ks: std::ops::RangeInclusive<i64>, eps: f64) -> Result<Self> {
        let values: Vec<(i64, MomentValue<F>)> =
            ks.into_par_iter().map(|k| slice_transform(slice, k, eps).map(|v| (k, v))).collect::<Result<_>>()?;
        Ok(Self {
            descriptor: format!("slice at y-digits {}", slice.stream()),
            two_dimensional: false,
            entries: values.into_iter().map(|(k, v)| ((k, 0), v)).collect(),
        })
    }

    /// `mu_hat(k, l)` over a rectangle of frequencies.
    pub fn grid<Q: Exact>(
        spec: &GridSpec<Q>,
        ks: std::ops::RangeInclusive<i64>,
        ls: std::ops::RangeInclusive<i64>,
        eps: f64,
    ) -> Result<Self> {
        let pairs: Vec<(i64, i64)> = ks.flat_map(|k| ls.clone().map(move |l| (k, l))).collect();
        let values: Vec<((i64, i64), MomentValue<F>)> = pairs
            .into_par_iter()
            .map(|(k, l)| transform_2d(spec, k, l, eps).map(|v| ((k, l), v)))
            .collect::<Result<_>>()?;
        Ok(Self {
            descriptor: format!("{}x{} grid measure", spec.rows(), spec.cols()),
            two_dimensional: true,
            entries: values.into_iter().collect(),
        })
    }

    pub fn get(&self, k: i64) -> Option<Complex<F>> {
        self.entries.get(&(k, 0)).map(|v| v.value)
    }

    pub fn get2(&self, k: i64, l: i64) -> Option<Complex<F>> {
        self.entries.get(&(k, l)).map(|v| v.value)
    }

    /// Largest error bound in the table.
    pub fn error_bound(&self) -> F {
        self.entries.values().map(|v| v.error_bound).fold(F::zero(), F::max)
    }

    /// CSV with columns `k[,l],re,im,errorBound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(if self.two_dimensional { "k,l,re,im,errorBound\n" } else { "k,re,im,errorBound\n" });
        for (&(k, l), v) in &self.entries {
            if self.two_dimensional {
                let _ = write!(out, "{k},{l},");
            } else {
                let _ = write!(out, "{k},");
            }
            let _ = writeln!(out, "{},{},{}", v.value.re, v.value.im, v.error_bound);
        }
        out
    }
}

fn join<Q: Exact>(ws: &[Q]) -> String {
    ws.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
