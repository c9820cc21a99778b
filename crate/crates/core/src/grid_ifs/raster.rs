use std::fmt::Write as _;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::grid_ifs::GridSpec;
use crate::scalar::Exact;

/// Exact cell probabilities after a number of iterations.
///
/// `values` is row-major with row 0 at the bottom (`y` index ascending), so
/// `get(x, y)` is the measure of the depth-K rectangle whose base-n digits
/// spell `x` and base-m digits spell `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster<Q> {
    pub width: usize,
    pub height: usize,
    pub iterations: usize,
    values: Vec<Q>,
}

impl<Q: Exact> Raster<Q> {
    pub fn get(&self, x: usize, y: usize) -> &Q {
        &self.values[y * self.width + x]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn max_value(&self) -> Q {
        self.values.iter().max().cloned().unwrap_or_else(Q::zero)
    }

    /// Gray level for a value: `round(255 * (1 - v / vmax))`, white for zero mass.
    pub fn gray(&self, value: &Q, vmax: &Q) -> u8 {
        let scaled = Q::from_usize(255) * (Q::one() - value.clone() / vmax.clone());
        scaled.round_to_u64().map_or(0, |g| g.min(255) as u8)
    }

    /// Pixel rows, top row first.
    fn pixel_rows(&self) -> Vec<Vec<u8>> {
        let vmax = self.max_value();
        (0..self.height)
            .rev()
            .map(|y| (0..self.width).map(|x| self.gray(self.get(x, y), &vmax)).collect())
            .collect()
    }

    /// Binary PGM (`P5`, maxval 255).
    pub fn to_pgm_binary(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        for row in self.pixel_rows() {
            out.extend_from_slice(&row);
        }
        out
    }

    /// Plain PGM (`P2`), at most 70 characters per line.
    pub fn to_pgm_plain(&self) -> Vec<u8> {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.pixel_rows() {
            let mut line = String::new();
            for px in row {
                let token = px.to_string();
                if !line.is_empty() && line.len() + 1 + token.len() > 70 {
                    out.push_str(&line);
                    out.push('\n');
                    line.clear();
                }
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&token);
            }
            let _ = writeln!(out, "{line}");
        }
        out.into_bytes()
    }

    /// Sums `cols x rows` blocks, giving the raster one iteration shallower.
    pub fn aggregate(&self, cols: usize, rows: usize) -> Raster<Q> {
        let (width, height) = (self.width / cols, self.height / rows);
        let mut values = vec![Q::zero(); width * height];
        for y in 0..self.height {
            for x in 0..self.width {
                let slot = &mut values[(y / rows) * width + x / cols];
                *slot = slot.clone() + self.get(x, y).clone();
            }
        }
        Raster { width, height, iterations: self.iterations.saturating_sub(1), values }
    }
}

/// Exact raster of rectangle measures at depth `iterations`.
pub fn render_raster<Q: Exact>(spec: &GridSpec<Q>, iterations: usize, budget: &Budget) -> Result<Raster<Q>> {
    if iterations == 0 {
        return Err(Error::Invalid("iterations must be at least 1".into()));
    }
    let (n, m) = (spec.cols(), spec.rows());
    let size = checked_pow(n, iterations)
        .zip(checked_pow(m, iterations))
        .and_then(|(w, h)| w.checked_mul(h).map(|c| (w, h, c)));
    let (width, height) = match size {
        Some((w, h, cells)) if cells <= budget.max_raster_cells => (w, h),
        _ => {
            return Err(Error::Budget(format!(
                "{n}^{iterations} x {m}^{iterations} raster exceeds {} cells",
                budget.max_raster_cells
            )))
        }
    };

    let mut values = vec![Q::one()];
    let (mut w, mut h) = (1usize, 1usize);
    for _ in 0..iterations {
        let (nw, nh) = (w * n, h * m);
        let mut next = vec![Q::zero(); nw * nh];
        for y in 0..h {
            for x in 0..w {
                let v = &values[y * w + x];
                if v.is_zero() {
                    continue;
                }
                for (i, j, p) in spec.kept_cells() {
                    next[(y * m + j) * nw + x * n + i] = v.clone() * p.clone();
                }
            }
        }
        values = next;
        w = nw;
        h = nh;
    }
    debug_assert_eq!((w, h), (width, height));
    Ok(Raster { width, height, iterations, values })
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_ifs::{rectangle_measure, AdicRectangle};
    use crate::test_support::*;

    #[test]
    fn triangle_depth_one() {
        let r = render_raster(&triangle(), 1, &Budget::default()).unwrap();
        assert_eq!((r.width, r.height), (2, 2));
        assert_eq!(*r.get(0, 0), q(1, 3));
        assert_eq!(*r.get(1, 0), q(1, 3));
        assert_eq!(*r.get(0, 1), q(1, 3));
        assert_eq!(*r.get(1, 1), q(0, 1));
    }

    #[test]
    fn full_grid_depth_one_is_weight_table() {
        let spec = full_grid_example();
        let r = render_raster(&spec, 1, &Budget::default()).unwrap();
        for j in 0..4 {
            for i in 0..4 {
                assert_eq!(r.get(i, j), spec.weight(i, j));
            }
        }
    }

    #[test]
    fn carpet_depth_three() {
        let r = render_raster(&carpet(), 3, &Budget::default()).unwrap();
        assert_eq!((r.width, r.height), (27, 27));
        assert_eq!(*r.get(0, 0), q(1, 512));
        let total = r.values().iter().cloned().fold(q(0, 1), |a, b| a + b);
        assert_eq!(total, q(1, 1));
    }

    #[test]
    fn values_are_rectangle_measures() {
        let spec = nu_carpet();
        let r = render_raster(&spec, 2, &Budget::default()).unwrap();
        for y in 0..9 {
            for x in 0..9 {
                let rect = AdicRectangle::new(vec![x / 3, x % 3], vec![y / 3, y % 3]).unwrap();
                assert_eq!(*r.get(x, y), rectangle_measure(&spec, &rect).unwrap());
            }
        }
    }

    #[test]
    fn aggregation_recovers_parent() {
        let spec = full_grid_example();
        let r3 = render_raster(&spec, 3, &Budget::default()).unwrap();
        let r2 = render_raster(&spec, 2, &Budget::default()).unwrap();
        assert_eq!(r3.aggregate(4, 4), r2);
    }

    #[test]
    fn budget_is_enforced() {
        let tight = Budget { max_raster_cells: 80, ..Budget::default() };
        assert!(render_raster(&carpet(), 2, &tight).unwrap_err().is_budget());
        assert!(render_raster(&carpet(), 200, &Budget::default()).unwrap_err().is_budget());
    }

    #[test]
    fn pgm_headers_and_mapping() {
        let r = render_raster(&triangle(), 1, &Budget::default()).unwrap();
        let bin = r.to_pgm_binary();
        assert_eq!(&bin[..11], b"P5\n2 2\n255\n");
        // top row: (0,1) = 1/3 -> black, (1,1) = 0 -> white
        assert_eq!(&bin[11..], &[0, 255, 0, 0]);
        let plain = String::from_utf8(r.to_pgm_plain()).unwrap();
        assert_eq!(plain, "P2\n2 2\n255\n0 255\n0 0\n");
    }
}
