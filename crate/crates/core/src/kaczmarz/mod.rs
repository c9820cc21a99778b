//! Effective-sequence (Kaczmarz) Fourier expansions.
//!
//! For a probability measure `mu` on `[0, 1)` the exponentials
//! `e_n(x) = exp(2 pi i n x)`, `n >= 0`, are unit vectors of `L^2(mu)` with Gram
//! entries `<e_a, e_b> = mu_hat(b - a)`. The auxiliary sequence
//! `g_0 = e_0`, `g_n = e_n - sum_{i<n} <e_n, e_i> g_i` is a Parseval frame
//! whenever the exponentials are effective, and `f = sum <f, g_n> e_n`.
//!
//! Every inner product is evaluated on a depth-`K` discretization, so Gram
//! matrices and quadratures describe the same finite measure.

mod effective;
mod frame;
mod one_d;
mod slices;
mod two_d;

pub use effective::{effective_sequence, EffectiveSequence};
pub use frame::{frame_diagnostics, FrameExpansion, FrameReport};
pub use one_d::{expand_1d, sample_1d, Expansion1D, GramSource};
pub use slices::{slice_effective_cache, SliceCache, SliceGram};
pub use two_d::{
    expand_2d, expand_2d_oriented, inner_frequencies, sample_2d, CoefficientRule, Expand2dOptions, Expansion2D,
    Orientation, SeriesChoice,
};

use num_complex::Complex;

use crate::moments::phase;
use crate::scalar::Real;

/// Largest cell count for which phases are tabulated.
const TABLE_LIMIT: u64 = 1 << 20;

/// `exp(-2 pi i k j / b^K)` for cell indices `j` of a depth-`K` grid.
pub(crate) struct Phases<F> {
    base: usize,
    depth: usize,
    cells: u64,
    table: Option<Vec<Complex<F>>>,
}

impl<F: Real> Phases<F> {
    pub(crate) fn new(base: usize, depth: usize) -> Self {
        let cells = (0..depth).try_fold(1u64, |acc, _| acc.checked_mul(base as u64));
        let table = cells
            .filter(|&c| c <= TABLE_LIMIT)
            .map(|c| (0..c).map(|j| phase::<F>(1, j, base, depth)).collect::<Vec<_>>());
        Self { base, depth, cells: cells.unwrap_or(0), table }
    }

    /// `exp(-2 pi i k j / b^K)`.
    pub(crate) fn neg(&self, k: i64, j: u64) -> Complex<F> {
        match &self.table {
            Some(t) => {
                let c = self.cells as i128;
                t[((k as i128).rem_euclid(c) * j as i128 % c) as usize]
            }
            None => phase(k, j, self.base, self.depth),
        }
    }

    /// `exp(+2 pi i k j / b^K)`.
    pub(crate) fn pos(&self, k: i64, j: u64) -> Complex<F> {
        self.neg(k, j).conj()
    }
}

pub(crate) fn czero<F: Real>() -> Complex<F> {
    Complex::new(F::zero(), F::zero())
}

/// `exp(2 pi i t)` with the angle reduced mod 1 first.
pub(crate) fn cis_turns<F: Real>(t: F) -> Complex<F> {
    let a = (t - t.floor()) * F::of(2.0) * F::PI();
    Complex::new(a.cos(), a.sin())
}
