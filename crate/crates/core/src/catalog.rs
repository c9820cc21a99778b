//! Named grid specs and digit measures used throughout the docs and tests.

use num_traits::One;

use crate::grid_ifs::GridSpec;
use crate::measures::MarginalIfs;
use crate::scalar::Exact;
use crate::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_fraction(n, d)
}

fn weights(rows: &[&[i64]], denom: i64) -> Vec<Vec<Rational>> {
    rows.iter().map(|r| r.iter().map(|&w| q(w, denom)).collect()).collect()
}

/// Sierpinski carpet with all eight cells weighted 1/8.
pub fn carpet() -> GridSpec<Rational> {
    GridSpec::from_visual_weights(&weights(&[&[1, 1, 1], &[1, 0, 1], &[1, 1, 1]], 8)).expect("valid")
}

/// Sierpinski carpet with corner weights 91/900, edge weights 118/900 and 150/900.
pub fn nu_carpet() -> GridSpec<Rational> {
    GridSpec::from_visual_weights(&weights(&[&[91, 118, 91], &[150, 0, 150], &[91, 118, 91]], 900)).expect("valid")
}

/// Sierpinski triangle (cells (0,0), (1,0), (0,1)) with equal weights.
pub fn triangle() -> GridSpec<Rational> {
    GridSpec::from_visual_weights(&weights(&[&[1, 0], &[1, 1]], 3)).expect("valid")
}

/// Sierpinski triangle with `p00 = 1/4`, `p01 = 1/4`, `p10 = 1/2`.
pub fn triangle_weighted() -> GridSpec<Rational> {
    GridSpec::from_visual_weights(&weights(&[&[1, 0], &[1, 2]], 4)).expect("valid")
}

/// The 4x4 full grid with rows (top to bottom) 3,3,3,3 / 1,1,2,2 / 2,2,1,1 / 2,2,2,2 over 32.
pub fn full_grid_example() -> GridSpec<Rational> {
    GridSpec::from_visual_weights(&weights(&[&[3, 3, 3, 3], &[1, 1, 2, 2], &[2, 2, 1, 1], &[2, 2, 2, 2]], 32))
        .expect("valid")
}

/// Full `m x n` grid with uniform weights (planar Lebesgue measure).
pub fn uniform_full(rows: usize, cols: usize) -> GridSpec<Rational> {
    let w = Rational::one() / Rational::from_usize(rows * cols);
    GridSpec::from_visual_weights(&vec![vec![w; cols]; rows]).expect("valid")
}

/// Middle-thirds Cantor measure: base 3, digits {0, 2} with weight 1/2.
pub fn ternary_cantor() -> MarginalIfs<Rational> {
    MarginalIfs::new(3, vec![q(1, 2), q(0, 1), q(1, 2)]).expect("valid")
}

/// Quaternary Cantor measure: base 4, digits {0, 2} with weight 1/2.
pub fn quaternary_cantor() -> MarginalIfs<Rational> {
    MarginalIfs::new(4, vec![q(1, 2), q(0, 1), q(1, 2), q(0, 1)]).expect("valid")
}

/// Uniform digit measure in `base` (Lebesgue measure).
pub fn uniform_digits(base: usize) -> MarginalIfs<Rational> {
    MarginalIfs::new(base, vec![Rational::one() / Rational::from_usize(base); base]).expect("valid")
}

