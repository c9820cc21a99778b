use crate::error::{Error, Result};
use crate::grid_ifs::GridSpec;
use crate::scalar::{Exact, Real};

/// Exact combinatorial statistics of a grid spec.
#[derive(Clone, Debug, PartialEq)]
pub struct GridStats<Q> {
    /// Number of kept cells `N`.
    pub cells: usize,
    /// Kept cells per row, bottom row first.
    pub row_counts: Vec<usize>,
    /// Kept cells per column.
    pub col_counts: Vec<usize>,
    /// Total weight per column (the x-marginal digit weights).
    pub col_weights: Vec<Q>,
    /// Total weight per row, `beta_j` (the y-marginal digit weights).
    pub row_weights: Vec<Q>,
    /// Largest column total.
    pub gamma1: Q,
    /// Largest row total.
    pub gamma2: Q,
    /// Same as `gamma2`; the name used by the full-grid criterion.
    pub beta_max: Q,
    /// Nonempty rows whose nonzero weights are all equal.
    pub b: usize,
    /// Nonempty columns whose nonzero weights are all equal.
    pub b_cols: usize,
    /// Column-direction exponent sum (`None` for a degenerate grid).
    pub xi1: Option<f64>,
    /// Row-direction exponent sum (`None` for a degenerate grid).
    pub xi2: Option<f64>,
}

pub fn grid_stats<Q: Exact>(spec: &GridSpec<Q>) -> GridStats<Q> {
    let (m, n) = (spec.rows(), spec.cols());
    let row_counts: Vec<usize> = (0..m).map(|j| (0..n).filter(|&i| spec.is_kept(i, j)).count()).collect();
    let col_counts: Vec<usize> = (0..n).map(|i| (0..m).filter(|&j| spec.is_kept(i, j)).count()).collect();
    let row_weights: Vec<Q> =
        (0..m).map(|j| (0..n).fold(Q::zero(), |acc, i| acc + spec.weight(i, j).clone())).collect();
    let col_weights: Vec<Q> =
        (0..n).map(|i| (0..m).fold(Q::zero(), |acc, j| acc + spec.weight(i, j).clone())).collect();
    let gamma1 = col_weights.iter().max().cloned().unwrap_or_else(Q::zero);
    let gamma2 = row_weights.iter().max().cloned().unwrap_or_else(Q::zero);

    let b = (0..m).filter(|&j| all_equal((0..n).map(|i| spec.weight(i, j)))).count();
    let b_cols = (0..n).filter(|&i| all_equal((0..m).map(|j| spec.weight(i, j)))).count();

    let (xi1, xi2) = if m < 2 || n < 2 {
        (None, None)
    } else if m <= n {
        let (a, b) = xi_pair(m, n, &row_counts);
        (Some(a), Some(b))
    } else {
        // exchange roles: in the transposed grid the rows are our columns
        let (a, b) = xi_pair(n, m, &col_counts);
        (Some(b), Some(a))
    };

    GridStats {
        cells: row_counts.iter().sum(),
        row_counts,
        col_counts,
        col_weights,
        row_weights,
        gamma1,
        beta_max: gamma2.clone(),
        gamma2,
        b,
        b_cols,
        xi1,
        xi2,
    }
}

fn all_equal<'a, Q: Exact>(mut weights: impl Iterator<Item = &'a Q>) -> bool {
    let mut nonzero = weights.by_ref().filter(|w| !w.is_zero());
    match nonzero.next() {
        None => false,
        Some(first) => nonzero.all(|w| w == first),
    }
}

/// `(xi_1, xi_2)` for an `m x n` grid with `2 <= m <= n` and row counts `r`.
fn xi_pair(m: usize, n: usize, r: &[usize]) -> (f64, f64) {
    let s = power_sum(m, n, r);
    if m == n {
        return (s, s);
    }
    let exponent = (n as f64).ln() / (m as f64).ln();
    (s.powf(exponent), s)
}

/// `sum_j r_j^(ln m / ln n)`, with the terms that are exact evaluated exactly.
fn power_sum(m: usize, n: usize, r: &[usize]) -> f64 {
    let theta = (m as f64).ln() / (n as f64).ln();
    r.iter()
        .filter(|&&rj| rj > 0)
        .map(|&rj| {
            if m == n || rj == 1 {
                rj as f64
            } else if rj == n {
                m as f64
            } else {
                (rj as f64).powf(theta)
            }
        })
        .sum()
}

/// `f(x) = (sum_{r_j != 0} r_j^x)^(1/x)`, nonincreasing on `(0, inf)`.
pub fn xi_profile(row_counts: &[usize], x: f64) -> f64 {
    let s: f64 = row_counts.iter().filter(|&&r| r > 0).map(|&r| (r as f64).powf(x)).sum();
    s.powf(1.0 / x)
}

/// Hausdorff dimension of the Bedford-McMullen carpet of `spec`.
///
/// Uses `ln(sum_j r_j^(ln m / ln n)) / ln m` after transposing so that
/// `m <= n`. Degenerate grids (one row or one column) are not covered by the
/// formula; see [`attractor_dimension`].
pub fn mcmullen_dimension<F: Real, Q: Exact>(spec: &GridSpec<Q>) -> Result<F> {
    let (m, n) = (spec.rows(), spec.cols());
    if m < 2 || n < 2 {
        return Err(Error::Unsupported(format!("McMullen formula needs m, n >= 2 (grid is {m}x{n})")));
    }
    let stats = grid_stats(spec);
    let (m, n, r) = if m <= n { (m, n, stats.row_counts) } else { (n, m, stats.col_counts) };
    let s = power_sum(m, n, &r);
    Ok(F::of(log_base(s, m)))
}

/// Dimension of the attractor, falling back to the similarity dimension of the
/// nondegenerate axis (plus one for the unit interval along the other) when the
/// grid has a single row or column.
pub fn attractor_dimension<F: Real, Q: Exact>(spec: &GridSpec<Q>) -> F {
    match mcmullen_dimension(spec) {
        Ok(d) => d,
        Err(_) => {
            let (m, n) = (spec.rows(), spec.cols());
            let k = spec.cell_count();
            let base = m.max(n);
            if base < 2 {
                F::of(2.0)
            } else {
                F::of(1.0 + log_base(k as f64, base))
            }
        }
    }
}

/// `ln(s) / ln(base)`, returning the exact integer when `s` is an integer power of `base`.
fn log_base(s: f64, base: usize) -> f64 {
    if s.fract() == 0.0 && s >= 1.0 {
        let target = s as u128;
        let mut p: u128 = 1;
        let mut k = 0u32;
        while p < target {
            p *= base as u128;
            k += 1;
        }
        if p == target {
            return f64::from(k);
        }
    }
    // log2 is exact at powers of two, so a power-of-two base gives a correctly rounded log2(s)
    s.log2() / (base as f64).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{test_support::*, Rational};

    #[test]
    fn carpet_stats() {
        let st = grid_stats(&carpet());
        assert_eq!(st.row_counts, vec![3, 2, 3]);
        assert_eq!(st.cells, 8);
        assert_eq!(st.gamma1, q(3, 8));
        assert_eq!(st.col_weights, vec![q(3, 8), q(2, 8), q(3, 8)]);
        assert_eq!(st.xi1, Some(8.0));
        assert_eq!(st.xi2, Some(8.0));
    }

    #[test]
    fn weighted_carpet_gamma() {
        let st = grid_stats(&nu_carpet());
        assert_eq!(st.gamma1, q(332, 900));
        assert_eq!(st.row_weights, vec![q(1, 3), q(1, 3), q(1, 3)]);
    }

    #[test]
    fn full_grid_beta_and_b() {
        let st = grid_stats(&full_grid_example());
        assert_eq!(st.beta_max, q(12, 32));
        assert_eq!(st.b, 2);
        assert_eq!(st.row_weights, vec![q(8, 32), q(6, 32), q(6, 32), q(12, 32)]);
    }

    #[test]
    fn dimensions() {
        let tri: f64 = mcmullen_dimension(&triangle()).unwrap();
        assert!((tri - 3f64.ln() / 2f64.ln()).abs() < 1e-12);
        let car: f64 = mcmullen_dimension(&carpet()).unwrap();
        assert!((car - 8f64.ln() / 3f64.ln()).abs() < 1e-12);
        for (m, n) in [(2, 2), (2, 3), (3, 5), (4, 4)] {
            let d: f64 = mcmullen_dimension(&uniform_full(m, n)).unwrap();
            assert_eq!(d, 2.0, "{m}x{n}");
        }
    }

    #[test]
    fn degenerate_dimension_is_unsupported() {
        let line = GridSpec::<Rational>::from_visual_weights(&[vec![q(1, 2), q(0, 1), q(1, 2)]]).unwrap();
        assert!(matches!(mcmullen_dimension::<f64, _>(&line), Err(Error::Unsupported(_))));
        let d: f64 = attractor_dimension(&line);
        assert!((d - (1.0 + 2f64.ln() / 3f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn tall_grid_is_transposed() {
        let wide = GridSpec::<Rational>::from_visual_weights(&[
            vec![q(1, 5), q(0, 1), q(1, 5)],
            vec![q(1, 5), q(1, 5), q(1, 5)],
        ])
        .unwrap();
        let a: f64 = mcmullen_dimension(&wide).unwrap();
        let b: f64 = mcmullen_dimension(&wide.transpose()).unwrap();
        assert!((a - b).abs() < 1e-15);
        let (s, t) = (grid_stats(&wide), grid_stats(&wide.transpose()));
        assert_eq!(s.gamma1, t.gamma2);
        assert_eq!(s.xi1, t.xi2);
        assert_eq!(s.xi2, t.xi1);
    }
}
