use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;

use super::one_d::residual_csv;
use super::slices::{slice_effective_cache, SliceGram};
use super::{cis_turns, czero, EffectiveSequence, Phases};
use crate::budget::Budget;
use crate::classify::{AdmissibilityReport, SeriesType};
use crate::error::{Error, Result};
use crate::grid_ifs::{Axis, GridSpec};
use crate::measures::{classify_marginal, discretize_grid, project_marginal, DiscreteMeasure2};
use crate::scalar::{Exact, Real};

/// Which series to build; `Auto` follows the report's verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeriesChoice {
    #[default]
    Auto,
    SingMarg,
    LebMarg,
}

/// How the outer coefficients are formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoefficientRule {
    /// `d_nm = <G_n f, g_m>` with `[G_n f](y) = <f(., y), g_n^(y)>` from the
    /// slice effective sequences.
    #[default]
    Auxiliary,
    /// The n-th block expands `<r(., y), e_n>` of the current residual `r`.
    /// Agrees with `Auxiliary` whenever the inner expansion is exact, and keeps
    /// the residual curve nonincreasing for every `M`.
    ResidualCorrected,
}

/// `Direct`: outer frequency on x, slices are the conditional x-measures
/// over the y-marginal. `Transposed`: the roles of x and y are swapped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Direct,
    Transposed,
}

#[derive(Clone, Debug, Default)]
pub struct Expand2dOptions {
    pub series: SeriesChoice,
    pub rule: CoefficientRule,
    pub budget: Budget,
}

/// `f ~ sum_n sum_m d_nm e_n(u) e_m(v)` with `(u, v) = (x, y)` or `(y, x)`
/// depending on the orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion2D<F> {
    pub series: SeriesType,
    pub orientation: Orientation,
    pub rule: CoefficientRule,
    pub depth: usize,
    /// Outer frequencies are `0..outer`.
    pub outer: usize,
    /// Inner frequencies in summation order.
    pub inner: Vec<i64>,
    /// `coefficients[n][j]` multiplies `e_n(u) e_{inner[j]}(v)`.
    pub coefficients: Vec<Vec<Complex<F>>>,
    /// Residual after each complete inner block, starting at `||f||`.
    pub residual_curve: Vec<F>,
    pub norm_f: F,
    pub frame_bounds: (F, F),
}

/// `0..M` for type (2); `0, 1, -1, 2, -2, ...` up to `|m| = M` for type (3),
/// cut at `cells` distinct frequencies.
pub fn inner_frequencies(series: SeriesType, m: usize, cells: u64) -> Vec<i64> {
    match series {
        SeriesType::SingMarg => (0..m as i64).collect(),
        SeriesType::LebMarg => {
            let count = (2 * m as u64 + 1).min(cells) as usize;
            (0..count as i64).map(|j| if j % 2 == 1 { (j + 1) / 2 } else { -j / 2 }).collect()
        }
    }
}

/// Samples `f` at the atoms of a 2D discretization, in atom order.
pub fn sample_2d<F: Real, Q: Exact>(dm: &DiscreteMeasure2<Q>, f: impl Fn(F, F) -> Complex<F>) -> Vec<Complex<F>> {
    dm.locations::<F>().into_iter().map(|(x, y)| f(x, y)).collect()
}

fn digits(mut index: u64, base: usize, depth: usize) -> Vec<usize> {
    let mut word = vec![0; depth];
    for slot in word.iter_mut().rev() {
        *slot = (index % base as u64) as usize;
        index /= base as u64;
    }
    word
}

fn marginal_fits<Q: Exact>(spec: &GridSpec<Q>, axis: Axis, series: SeriesType) -> bool {
    let class = classify_marginal(&project_marginal(spec, axis));
    match series {
        SeriesType::SingMarg => class.is_singular(),
        SeriesType::LebMarg => class.is_lebesgue(),
    }
}

/// Builds the expansion the report admits.
///
/// `f` is sampled on the atoms of `discretize_grid(spec, depth)`.
pub fn expand_2d<F: Real, Q: Exact>(
    spec: &GridSpec<Q>,
    report: &AdmissibilityReport,
    f: &[Complex<F>],
    n: usize,
    m: usize,
    depth: usize,
    options: &Expand2dOptions,
) -> Result<Expansion2D<F>> {
    let series = match options.series {
        SeriesChoice::Auto => report
            .verdict
            .series()
            .ok_or_else(|| Error::NotAdmissible("the verdict is Inconclusive".into()))?,
        SeriesChoice::SingMarg => SeriesType::SingMarg,
        SeriesChoice::LebMarg => SeriesType::LebMarg,
    };
    if report.witnesses(series).next().is_none() {
        return Err(Error::NotAdmissible(format!("no satisfied criterion implies {}", series.label())));
    }
    let direction = report.directions(series);
    let orientation = if direction.includes(Axis::Y) && marginal_fits(spec, Axis::Y, series) {
        Orientation::Direct
    } else if direction.includes(Axis::X) && marginal_fits(spec, Axis::X, series) {
        Orientation::Transposed
    } else {
        return Err(Error::NotAdmissible(format!(
            "{} criteria give {} but no marginal in that direction has the required class",
            series.label(),
            direction.label()
        )));
    };
    let mut expansion = match orientation {
        Orientation::Direct => expand_2d_oriented(spec, series, f, n, m, depth, options.rule, &options.budget)?,
        Orientation::Transposed => {
            let dm = discretize_grid(spec, depth, &options.budget)?;
            if f.len() != dm.len() {
                return Err(Error::SampleMismatch(format!("{} samples for {} atoms", f.len(), dm.len())));
            }
            let mut order: Vec<usize> = (0..dm.len()).collect();
            order.sort_by_key(|&a| (dm.atoms[a].0, dm.atoms[a].1));
            let swapped: Vec<Complex<F>> = order.iter().map(|&a| f[a]).collect();
            expand_2d_oriented(&spec.transpose(), series, &swapped, n, m, depth, options.rule, &options.budget)?
        }
    };
    expansion.orientation = orientation;
    Ok(expansion)
}

/// The engine behind [`expand_2d`], with no admissibility check: slices are
/// the conditional x-measures of `spec` and the inner series runs over its
/// y-marginal. Type (3) still requires that marginal to be Lebesgue.
#[allow(clippy::too_many_arguments)]
pub fn expand_2d_oriented<F: Real, Q: Exact>(
    spec: &GridSpec<Q>,
    series: SeriesType,
    f: &[Complex<F>],
    n: usize,
    m: usize,
    depth: usize,
    rule: CoefficientRule,
    budget: &Budget,
) -> Result<Expansion2D<F>> {
    if n == 0 || m == 0 {
        return Err(Error::Invalid("N and M must be at least 1".into()));
    }
    if series == SeriesType::LebMarg && !marginal_fits(spec, Axis::Y, series) {
        return Err(Error::NotAdmissible("a type (3) series needs a Lebesgue inner marginal".into()));
    }
    let dm = discretize_grid(spec, depth, budget)?;
    if f.len() != dm.len() {
        return Err(Error::SampleMismatch(format!("{} samples for {} atoms", f.len(), dm.len())));
    }
    let inner = inner_frequencies(series, m, dm.y_cells());
    let blocks = dm.y_blocks();
    let mut ops = n as u128 * inner.len() as u128 * dm.len() as u128;
    if rule == CoefficientRule::Auxiliary {
        ops += (n as u128).pow(3) * blocks.len() as u128;
    }
    if ops > budget.max_expansion_ops {
        return Err(Error::Budget(format!("{ops} expansion operations exceed {}", budget.max_expansion_ops)));
    }

    let px = Phases::<F>::new(dm.cols, depth);
    let py = Phases::<F>::new(dm.rows, depth);
    let ys: Vec<u64> = blocks.iter().map(|(y, _)| *y).collect();
    let mut mu2: Vec<F> = Vec::with_capacity(blocks.len());
    let mut cond = vec![F::zero(); dm.len()];
    let mut block_of = vec![0usize; dm.len()];
    for (b, (_, range)) in blocks.iter().enumerate() {
        let total = dm.atoms[range.clone()].iter().fold(Q::zero(), |acc, a| acc + a.2.clone());
        for a in range.clone() {
            cond[a] = (dm.atoms[a].2.clone() / total.clone()).to_real();
            block_of[a] = b;
        }
        mu2.push(total.to_real());
    }
    let weights: Vec<F> = dm.real_weights();

    let inner_seq = match series {
        SeriesType::SingMarg => {
            let mu_hat: Vec<Complex<F>> = (0..m as i64)
                .map(|d| ys.iter().zip(&mu2).fold(czero(), |acc, (&y, &w)| acc + py.neg(d, y) * w))
                .collect();
            Some(EffectiveSequence::from_transform(&mu_hat, m, format!("y-marginal of {}", dm.provenance))?)
        }
        SeriesType::LebMarg => None,
    };
    let expand_inner = |h: &[Complex<F>]| -> Vec<Complex<F>> {
        let p: Vec<Complex<F>> = inner
            .iter()
            .map(|&k| ys.iter().zip(&mu2).zip(h).fold(czero(), |acc, ((&y, &w), v)| acc + *v * py.neg(k, y) * w))
            .collect();
        match &inner_seq {
            Some(seq) => seq.coefficients(&p),
            None => p,
        }
    };
    // <r(., y), e_k> on every slice
    let slice_inner = |r: &[Complex<F>], k: i64| -> Vec<Complex<F>> {
        blocks
            .iter()
            .map(|(_, range)| range.clone().fold(czero(), |acc, a| acc + r[a] * px.neg(k, dm.atoms[a].0) * cond[a]))
            .collect()
    };

    let auxiliary: Option<Vec<Vec<Complex<F>>>> = match rule {
        CoefficientRule::Auxiliary => {
            let words: Vec<Vec<usize>> = ys.iter().map(|&y| digits(y, dm.rows, depth)).collect();
            let cache = slice_effective_cache::<F, Q>(spec, &words, n, SliceGram::Discretized, budget)?;
            let seqs: Vec<&EffectiveSequence<F>> =
                words.iter().map(|w| cache.get(w).expect("every block word is cached")).collect();
            // g[b][k] = <f(., y_b), e_k>, then [G_n f](y_b) = <f(., y_b), g_n^(y_b)>
            let per_block: Vec<Vec<Complex<F>>> = blocks
                .par_iter()
                .zip(&seqs)
                .map(|((_, range), seq)| {
                    let p: Vec<Complex<F>> = (0..n as i64)
                        .map(|k| {
                            range.clone().fold(czero(), |acc, a| acc + f[a] * px.neg(k, dm.atoms[a].0) * cond[a])
                        })
                        .collect();
                    seq.coefficients(&p)
                })
                .collect();
            Some((0..n).map(|k| per_block.iter().map(|g| g[k]).collect()).collect())
        }
        CoefficientRule::ResidualCorrected => None,
    };

    let norm = |r: &[Complex<F>]| r.iter().zip(&weights).map(|(v, &w)| v.norm_sqr() * w).sum::<F>().sqrt();
    let mut residual = f.to_vec();
    let norm_f = norm(&residual);
    let mut residual_curve = vec![norm_f];
    let mut coefficients = Vec::with_capacity(n);
    for k in 0..n {
        let h = match &auxiliary {
            Some(g) => g[k].clone(),
            None => slice_inner(&residual, k as i64),
        };
        let d = expand_inner(&h);
        let partial: Vec<Complex<F>> = ys
            .iter()
            .map(|&y| inner.iter().zip(&d).fold(czero(), |acc, (&j, c)| acc + *c * py.pos(j, y)))
            .collect();
        for (a, r) in residual.iter_mut().enumerate() {
            *r = *r - px.pos(k as i64, dm.atoms[a].0) * partial[block_of[a]];
        }
        residual_curve.push(norm(&residual));
        coefficients.push(d);
    }
    Ok(Expansion2D {
        series,
        orientation: Orientation::Direct,
        rule,
        depth,
        outer: n,
        inner,
        coefficients,
        residual_curve,
        norm_f,
        frame_bounds: (F::one(), F::one()),
    })
}

impl<F: Real> Expansion2D<F> {
    pub fn final_residual(&self) -> F {
        *self.residual_curve.last().expect("curve starts at ||f||")
    }

    /// `d_nm` for outer `n` and inner frequency `m`, if present.
    pub fn coefficient(&self, n: usize, m: i64) -> Option<Complex<F>> {
        let j = self.inner.iter().position(|&k| k == m)?;
        self.coefficients.get(n).map(|row| row[j])
    }

    /// `sum |d_nm|^2`.
    pub fn energy(&self) -> F {
        self.coefficients.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// Partial sum at points `(x, y)`, in canonical order.
    pub fn synthesize(&self, points: &[(F, F)]) -> Vec<Complex<F>> {
        points
            .iter()
            .map(|&(x, y)| {
                let (u, v) = match self.orientation {
                    Orientation::Direct => (x, y),
                    Orientation::Transposed => (y, x),
                };
                self.coefficients.iter().enumerate().fold(czero(), |acc, (n, row)| {
                    let block = self
                        .inner
                        .iter()
                        .zip(row)
                        .fold(czero(), |s, (&j, c)| s + *c * cis_turns(F::of(j as f64) * v));
                    acc + cis_turns(F::of_usize(n) * u) * block
                })
            })
            .collect()
    }

    /// Canonical order and frame bounds, for echoing next to exports.
    pub fn describe(&self) -> String {
        let inner = match self.series {
            SeriesType::SingMarg => format!("m = 0..{} ascending", self.inner.len().saturating_sub(1)),
            SeriesType::LebMarg => format!("m = 0, 1, -1, 2, -2, ... ({} terms)", self.inner.len()),
        };
        let (outer_axis, inner_axis) = match self.orientation {
            Orientation::Direct => ("x", "y"),
            Orientation::Transposed => ("y", "x"),
        };
        format!(
            "series: {}; order: outer n = 0..{} ascending on {outer_axis}, inner {inner} on {inner_axis}, complete per n; \
             frame bounds A = {}, B = {}; rule: {:?}",
            self.series.label(),
            self.outer.saturating_sub(1),
            self.frame_bounds.0,
            self.frame_bounds.1,
            self.rule
        )
    }

    /// CSV with columns `n,m,re,im`, in summation order.
    pub fn coefficients_csv(&self) -> String {
        let mut out = String::from("n,m,re,im\n");
        for (n, row) in self.coefficients.iter().enumerate() {
            for (&m, c) in self.inner.iter().zip(row) {
                let _ = writeln!(out, "{n},{m},{},{}", c.re, c.im);
            }
        }
        out
    }

    /// CSV with columns `step,residual`.
    pub fn residual_csv(&self) -> String {
        residual_csv(&self.residual_curve)
    }
}
