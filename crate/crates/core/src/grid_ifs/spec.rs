use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::Exact;

/// A coordinate axis of the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            other => Err(Error::Invalid(format!("unknown axis {other:?}"))),
        }
    }
}

/// Cell matrix and weight matrix of a grid IFS.
///
/// Storage indexing: column `i` runs left to right,
/// row `j` runs bottom to top, and the entry for `(i, j)` lives at
/// `j * cols + i`. The map attached to a kept cell is
/// `(x, y) -> ((x + i) / cols, (y + j) / rows)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec<Q> {
    rows: usize,
    cols: usize,
    kept: Vec<bool>,
    weights: Vec<Q>,
}

#[derive(Deserialize)]
struct RawSpec {
    rows: usize,
    cols: usize,
    cells: Vec<Vec<Value>>,
    weights: Vec<Vec<Value>>,
}

impl<Q: Exact> GridSpec<Q> {
    /// Builds a spec from tables in bottom-to-top row order.
    pub fn new(rows: usize, cols: usize, kept: Vec<bool>, weights: Vec<Q>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("grid must be at least 1x1, got {rows}x{cols}")));
        }
        if kept.len() != rows * cols || weights.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries, got {} cells and {} weights",
                rows * cols,
                kept.len(),
                weights.len()
            )));
        }
        let mut total = Q::zero();
        for j in 0..rows {
            for i in 0..cols {
                let w = &weights[j * cols + i];
                if w.is_negative() {
                    return Err(Error::NegativeWeight { col: i, row: j, weight: w.to_string() });
                }
                match (kept[j * cols + i], w.is_zero()) {
                    (false, false) => {
                        return Err(Error::WeightOnEmptyCell { col: i, row: j, weight: w.to_string() })
                    }
                    (true, true) => return Err(Error::ZeroWeightOnCell { col: i, row: j }),
                    _ => {}
                }
                total = total + w.clone();
            }
        }
        if !kept.iter().any(|&k| k) {
            return Err(Error::EmptyGrid);
        }
        if !total.is_one() {
            return Err(Error::WeightSum(total.to_string()));
        }
        Ok(Self { rows, cols, kept, weights })
    }

    /// Builds a spec from tables listed top row first, as they are displayed.
    pub fn from_visual(cells: &[Vec<bool>], weights: &[Vec<Q>]) -> Result<Self> {
        let rows = cells.len();
        let cols = cells.first().map_or(0, Vec::len);
        if weights.len() != rows {
            return Err(Error::Dimension(format!("{rows} cell rows but {} weight rows", weights.len())));
        }
        let mut kept = Vec::with_capacity(rows * cols);
        let mut w = Vec::with_capacity(rows * cols);
        for (r, (cell_row, weight_row)) in cells.iter().zip(weights).enumerate().rev() {
            if cell_row.len() != cols || weight_row.len() != cols {
                return Err(Error::Dimension(format!("display row {r} does not have {cols} entries")));
            }
            kept.extend_from_slice(cell_row);
            w.extend(weight_row.iter().cloned());
        }
        Self::new(rows, cols, kept, w)
    }

    /// Builds a spec whose kept cells are exactly the positive weights (top row first).
    pub fn from_visual_weights(weights: &[Vec<Q>]) -> Result<Self> {
        let cells: Vec<Vec<bool>> =
            weights.iter().map(|row| row.iter().map(|w| w.is_positive()).collect()).collect();
        Self::from_visual(&cells, weights)
    }

    /// Parses the JSON spec-file format.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        if raw.cells.len() != raw.rows || raw.weights.len() != raw.rows {
            return Err(Error::Dimension(format!(
                "rows = {} but cells has {} rows and weights has {}",
                raw.rows,
                raw.cells.len(),
                raw.weights.len()
            )));
        }
        let mut cells = Vec::with_capacity(raw.rows);
        let mut weights = Vec::with_capacity(raw.rows);
        for (r, (cell_row, weight_row)) in raw.cells.iter().zip(&raw.weights).enumerate() {
            if cell_row.len() != raw.cols || weight_row.len() != raw.cols {
                return Err(Error::Dimension(format!("display row {r} does not have cols = {} entries", raw.cols)));
            }
            let cell_row = cell_row
                .iter()
                .map(|v| match v.as_u64() {
                    Some(0) => Ok(false),
                    Some(1) => Ok(true),
                    _ => Err(Error::Syntax(format!("cell entry {v} in display row {r} is not 0 or 1"))),
                })
                .collect::<Result<Vec<_>>>()?;
            let weight_row = weight_row.iter().map(parse_weight::<Q>).collect::<Result<Vec<_>>>()?;
            cells.push(cell_row);
            weights.push(weight_row);
        }
        Self::from_visual(&cells, &weights)
    }

    /// Serializes to the JSON spec-file format (top row first).
    pub fn to_json(&self) -> String {
        let cells: Vec<Vec<u8>> =
            (0..self.rows).rev().map(|j| (0..self.cols).map(|i| u8::from(self.is_kept(i, j))).collect()).collect();
        let weights: Vec<Vec<String>> = (0..self.rows)
            .rev()
            .map(|j| (0..self.cols).map(|i| self.weight(i, j).to_string()).collect())
            .collect();
        serde_json::json!({ "rows": self.rows, "cols": self.cols, "cells": cells, "weights": weights })
            .to_string()
    }

    /// Number of rows `m` (the y-base).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns `n` (the x-base).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn base(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.cols,
            Axis::Y => self.rows,
        }
    }

    pub fn is_kept(&self, col: usize, row: usize) -> bool {
        self.kept[row * self.cols + col]
    }

    pub fn weight(&self, col: usize, row: usize) -> &Q {
        &self.weights[row * self.cols + col]
    }

    /// Kept cells as `(col, row, weight)`, row-major from the bottom row.
    pub fn kept_cells(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        (0..self.rows)
            .flat_map(move |j| (0..self.cols).map(move |i| (i, j)))
            .filter(move |&(i, j)| self.is_kept(i, j))
            .map(move |(i, j)| (i, j, self.weight(i, j)))
    }

    pub fn cell_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    pub fn is_full(&self) -> bool {
        self.kept.iter().all(|&k| k)
    }

    /// True for the full grid with weight `1/(mn)` everywhere: the planar Lebesgue measure.
    pub fn is_lebesgue(&self) -> bool {
        let w = Q::one() / Q::from_usize(self.rows * self.cols);
        self.is_full() && self.weights.iter().all(|p| *p == w)
    }

    /// Swaps the roles of x and y.
    pub fn transpose(&self) -> Self {
        let (rows, cols) = (self.cols, self.rows);
        let mut kept = Vec::with_capacity(rows * cols);
        let mut weights = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            for i in 0..cols {
                kept.push(self.is_kept(j, i));
                weights.push(self.weight(j, i).clone());
            }
        }
        Self { rows, cols, kept, weights }
    }
}

fn parse_weight<Q: Exact>(value: &Value) -> Result<Q> {
    let text = match value {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) if n.is_u64() || n.is_i64() => n.to_string(),
        other => return Err(Error::Syntax(format!("weight {other} must be a rational string like \"a/b\""))),
    };
    text.parse::<Q>().map_err(|_| Error::Syntax(format!("cannot parse weight {text:?} as a rational")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    const CARPET: &str = r#"{"rows":3,"cols":3,
        "cells":[[1,1,1],[1,0,1],[1,1,1]],
        "weights":[["1/8","1/8","1/8"],["1/8","0","1/8"],["1/8","1/8","1/8"]]}"#;

    #[test]
    fn parses_carpet() {
        let spec = GridSpec::<Rational>::parse(CARPET).unwrap();
        assert_eq!(spec.cell_count(), 8);
        assert!(!spec.is_kept(1, 1));
        assert_eq!(*spec.weight(0, 0), Rational::from_fraction(1, 8));
    }

    #[test]
    fn display_order_is_flipped() {
        // triangle: top row [1,0], bottom row [1,1]
        let text = r#"{"rows":2,"cols":2,"cells":[[1,0],[1,1]],"weights":[["1/3","0"],["1/3","1/3"]]}"#;
        let spec = GridSpec::<Rational>::parse(text).unwrap();
        assert!(spec.is_kept(0, 0) && spec.is_kept(1, 0) && spec.is_kept(0, 1));
        assert!(!spec.is_kept(1, 1));
        let back = GridSpec::<Rational>::parse(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn unit_grid_is_lebesgue() {
        let spec = GridSpec::<Rational>::parse(r#"{"rows":1,"cols":1,"cells":[[1]],"weights":[["1"]]}"#).unwrap();
        assert!(spec.is_lebesgue());
    }

    #[test]
    fn rejects_bad_sum() {
        let text = r#"{"rows":1,"cols":2,"cells":[[1,1]],"weights":[["1/2","449/900"]]}"#;
        let err = GridSpec::<Rational>::parse(text).unwrap_err();
        assert_eq!(err, Error::WeightSum("899/900".into()));
        assert!(err.to_string().contains("weights must sum to 1"));
    }

    #[test]
    fn rejects_weight_on_deleted_cell() {
        let text = r#"{"rows":1,"cols":2,"cells":[[1,0]],"weights":[["1/2","1/2"]]}"#;
        assert!(matches!(GridSpec::<Rational>::parse(text), Err(Error::WeightOnEmptyCell { col: 1, .. })));
    }

    #[test]
    fn rejects_negative_and_malformed() {
        let neg = r#"{"rows":1,"cols":2,"cells":[[1,1]],"weights":[["3/2","-1/2"]]}"#;
        assert!(matches!(GridSpec::<Rational>::parse(neg), Err(Error::NegativeWeight { .. })));
        let dims = r#"{"rows":2,"cols":2,"cells":[[1,1]],"weights":[["1/2","1/2"]]}"#;
        assert!(matches!(GridSpec::<Rational>::parse(dims), Err(Error::Dimension(_))));
        assert!(matches!(GridSpec::<Rational>::parse("{rows:"), Err(Error::Syntax(_))));
        let junk = r#"{"rows":1,"cols":1,"cells":[[1]],"weights":[["one"]]}"#;
        assert!(matches!(GridSpec::<Rational>::parse(junk), Err(Error::Syntax(_))));
    }

    #[test]
    fn transpose_is_involutive() {
        let spec = GridSpec::<Rational>::parse(CARPET).unwrap();
        assert_eq!(spec.transpose().transpose(), spec);
    }
}
