//! Symbolic sampling: i.i.d. cell addresses pushed through the coding map.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::grid_ifs::GridSpec;
use crate::scalar::{Exact, Real};

/// Default truncation depth of the coding map.
pub const DEFAULT_DEPTH: usize = 32;

const DRAW_BITS: u32 = 53;

/// Cell chooser driven by exact cumulative thresholds.
///
/// A 53-bit draw `u` selects the first cell whose cumulative weight `c`
/// satisfies `u / 2^53 < c`; the comparison is done on the integer
/// `ceil(c * 2^53)`, so it is exact.
pub(crate) struct CellSampler {
    thresholds: Vec<u64>,
    cells: Vec<(usize, usize)>,
}

impl CellSampler {
    pub(crate) fn new<Q: Exact>(spec: &GridSpec<Q>) -> Self {
        let mut cumulative = Q::zero();
        let mut thresholds = Vec::new();
        let mut cells = Vec::new();
        for (i, j, w) in spec.kept_cells() {
            cumulative = cumulative + w.clone();
            thresholds.push(cumulative.dyadic_ceil(DRAW_BITS));
            cells.push((i, j));
        }
        Self { thresholds, cells }
    }

    pub(crate) fn draw(&self, rng: &mut impl RngCore) -> (usize, usize) {
        let u = rng.next_u64() >> (64 - DRAW_BITS);
        let k = self.thresholds.partition_point(|&t| t <= u);
        self.cells[k.min(self.cells.len() - 1)]
    }
}

/// The deterministic generator behind every seeded operation.
pub fn seeded_rng(seed: u64) -> Xoshiro256StarStar {
    Xoshiro256StarStar::seed_from_u64(seed)
}

/// Draws `count` points of the invariant measure.
///
/// Each point uses `depth` i.i.d. cells and the truncated coding map
/// `(sum x_k / n^(k+1), sum y_k / m^(k+1))` started from `(0, 0)`.
pub fn sample_points<F: Real, Q: Exact>(spec: &GridSpec<Q>, count: usize, depth: usize, seed: u64) -> Vec<(F, F)> {
    let sampler = CellSampler::new(spec);
    let mut rng = seeded_rng(seed);
    let (n, m) = (F::of_usize(spec.cols()), F::of_usize(spec.rows()));
    let mut word = vec![(0usize, 0usize); depth];
    (0..count)
        .map(|_| {
            for slot in word.iter_mut() {
                *slot = sampler.draw(&mut rng);
            }
            // Horner from the deepest digit
            word.iter().rev().fold((F::zero(), F::zero()), |(x, y), &(i, j)| {
                ((x + F::of_usize(i)) / n, (y + F::of_usize(j)) / m)
            })
        })
        .collect()
}
