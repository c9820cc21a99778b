use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::grid_ifs::GridSpec;
use crate::measures::{MarginalIfs, SliceMeasure};
use crate::scalar::{Exact, Real};

/// Finitely many atoms at the left endpoints of depth-`K` base-`b` cells.
///
/// Atom `(index, weight)` sits at `index / base^depth`; atoms are listed in
/// increasing index order, which is lexicographic order of digit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure<Q> {
    pub base: usize,
    pub depth: usize,
    pub atoms: Vec<(u64, Q)>,
    pub provenance: String,
}

/// Two-dimensional counterpart: atom `(x, y, weight)` sits at
/// `(x / n^depth, y / m^depth)`, listed in increasing `(y, x)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure2<Q> {
    pub cols: usize,
    pub rows: usize,
    pub depth: usize,
    pub atoms: Vec<(u64, u64, Q)>,
    pub provenance: String,
}

fn cell_count(base: usize, depth: usize) -> Result<u64> {
    (0..depth)
        .try_fold(1u64, |acc, _| acc.checked_mul(base as u64))
        .ok_or_else(|| Error::Budget(format!("{base}^{depth} cells do not fit in 64-bit indices")))
}

fn check_atoms(per_level: usize, depth: usize, budget: &Budget) -> Result<()> {
    let fits = (0..depth).try_fold(1usize, |acc, _| acc.checked_mul(per_level).filter(|&a| a <= budget.max_atoms));
    if fits.is_none() {
        return Err(Error::Budget(format!("{per_level}^{depth} atoms exceed {}", budget.max_atoms)));
    }
    Ok(())
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    Ok(())
}

fn check_base(base: usize) -> Result<()> {
    if base < 2 {
        return Err(Error::Unsupported(format!("base {base} has no contraction to discretize")));
    }
    Ok(())
}

fn exact_location<Q: Exact>(index: u64, base: usize, depth: usize) -> Q {
    Q::from_usize(index as usize) / Q::from_usize(base).pow(depth)
}

/// Extends every word by one digit drawn from `weights`, keeping lexicographic order.
fn extend<Q: Exact>(atoms: Vec<(u64, Q)>, weights: &[Q]) -> Vec<(u64, Q)> {
    let base = weights.len() as u64;
    let mut out = Vec::with_capacity(atoms.len() * weights.len());
    for (index, w) in atoms {
        for (d, p) in weights.iter().enumerate() {
            if !p.is_zero() {
                out.push((index * base + d as u64, w.clone() * p.clone()));
            }
        }
    }
    out
}

impl<Q: Exact> DiscreteMeasure<Q> {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total(&self) -> Q {
        self.atoms.iter().fold(Q::zero(), |a, (_, w)| a + w.clone())
    }

    /// `base^depth`, the number of cells.
    pub fn cells(&self) -> u64 {
        cell_count(self.base, self.depth).expect("checked on construction")
    }

    pub fn location<F: Real>(&self, index: u64) -> F {
        F::of(index as f64 / self.cells() as f64)
    }

    pub fn locations<F: Real>(&self) -> Vec<F> {
        self.atoms.iter().map(|&(i, _)| self.location(i)).collect()
    }

    pub fn real_weights<F: Real>(&self) -> Vec<F> {
        self.atoms.iter().map(|(_, w)| w.to_real()).collect()
    }

    /// A single atom at 0.
    pub fn dirac(base: usize, depth: usize) -> Self {
        Self { base, depth, atoms: vec![(0, Q::one())], provenance: "dirac at 0".into() }
    }

    /// CSV with exact rational location and weight.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("location,weight\n");
        for (i, w) in &self.atoms {
            let _ = writeln!(out, "{},{}", exact_location::<Q>(*i, self.base, self.depth), w);
        }
        out
    }
}

impl<Q: Exact> DiscreteMeasure2<Q> {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total(&self) -> Q {
        self.atoms.iter().fold(Q::zero(), |a, (_, _, w)| a + w.clone())
    }

    pub fn x_cells(&self) -> u64 {
        cell_count(self.cols, self.depth).expect("checked on construction")
    }

    pub fn y_cells(&self) -> u64 {
        cell_count(self.rows, self.depth).expect("checked on construction")
    }

    pub fn locations<F: Real>(&self) -> Vec<(F, F)> {
        let (nx, ny) = (self.x_cells() as f64, self.y_cells() as f64);
        self.atoms.iter().map(|&(x, y, _)| (F::of(x as f64 / nx), F::of(y as f64 / ny))).collect()
    }

    pub fn real_weights<F: Real>(&self) -> Vec<F> {
        self.atoms.iter().map(|(_, _, w)| w.to_real()).collect()
    }

    /// Distinct y indices in increasing order.
    pub fn y_words(&self) -> Vec<u64> {
        let mut ys: Vec<u64> = self.atoms.iter().map(|&(_, y, _)| y).collect();
        ys.dedup();
        ys
    }

    /// Half-open atom ranges sharing one y index, in increasing y order.
    pub fn y_blocks(&self) -> Vec<(u64, std::ops::Range<usize>)> {
        let mut blocks = Vec::new();
        let mut start = 0;
        for k in 1..=self.atoms.len() {
            if k == self.atoms.len() || self.atoms[k].1 != self.atoms[start].1 {
                blocks.push((self.atoms[start].1, start..k));
                start = k;
            }
        }
        blocks
    }

    fn project(&self, base: usize, key: impl Fn(&(u64, u64, Q)) -> u64, provenance: String) -> DiscreteMeasure<Q> {
        let mut acc: BTreeMap<u64, Q> = BTreeMap::new();
        for atom in &self.atoms {
            let slot = acc.entry(key(atom)).or_insert_with(Q::zero);
            *slot = slot.clone() + atom.2.clone();
        }
        DiscreteMeasure { base, depth: self.depth, atoms: acc.into_iter().collect(), provenance }
    }

    pub fn x_marginal(&self) -> DiscreteMeasure<Q> {
        self.project(self.cols, |a| a.0, format!("x-marginal of {}", self.provenance))
    }

    pub fn y_marginal(&self) -> DiscreteMeasure<Q> {
        self.project(self.rows, |a| a.1, format!("y-marginal of {}", self.provenance))
    }

    /// Conditional x-distribution on the horizontal strip with y index `y`.
    pub fn conditional_x(&self, y: u64) -> Option<DiscreteMeasure<Q>> {
        let atoms: Vec<(u64, Q)> = self.atoms.iter().filter(|a| a.1 == y).map(|a| (a.0, a.2.clone())).collect();
        let total = atoms.iter().fold(Q::zero(), |a, (_, w)| a + w.clone());
        if total.is_zero() {
            return None;
        }
        Some(DiscreteMeasure {
            base: self.cols,
            depth: self.depth,
            atoms: atoms.into_iter().map(|(x, w)| (x, w / total.clone())).collect(),
            provenance: format!("x-conditional on y = {y} of {}", self.provenance),
        })
    }

    /// CSV with exact rational locations and weight.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,weight\n");
        for (x, y, w) in &self.atoms {
            let _ = writeln!(
                out,
                "{},{},{}",
                exact_location::<Q>(*x, self.cols, self.depth),
                exact_location::<Q>(*y, self.rows, self.depth),
                w
            );
        }
        out
    }
}

pub fn discretize_marginal<Q: Exact>(marg: &MarginalIfs<Q>, depth: usize, budget: &Budget) -> Result<DiscreteMeasure<Q>> {
    check_depth(depth)?;
    check_base(marg.base())?;
    cell_count(marg.base(), depth)?;
    check_atoms(marg.support().len(), depth, budget)?;
    let mut atoms = vec![(0u64, Q::one())];
    for _ in 0..depth {
        atoms = extend(atoms, marg.weights());
    }
    Ok(DiscreteMeasure {
        base: marg.base(),
        depth,
        atoms,
        provenance: format!("digit measure base {} depth {depth}", marg.base()),
    })
}

pub fn discretize_slice<Q: Exact>(slice: &SliceMeasure<Q>, depth: usize, budget: &Budget) -> Result<DiscreteMeasure<Q>> {
    check_depth(depth)?;
    check_base(slice.base())?;
    cell_count(slice.base(), depth)?;
    let widest = (0..depth).map(|k| slice.weights_at(k).iter().filter(|w| !w.is_zero()).count()).max().unwrap_or(1);
    check_atoms(widest, depth, budget)?;
    let mut atoms = vec![(0u64, Q::one())];
    for k in 0..depth {
        atoms = extend(atoms, slice.weights_at(k));
    }
    Ok(DiscreteMeasure {
        base: slice.base(),
        depth,
        atoms,
        provenance: format!("slice at y-digits {} depth {depth}", slice.stream()),
    })
}

/// Depth-`K` discretization of the grid measure itself.
pub fn discretize_grid<Q: Exact>(spec: &GridSpec<Q>, depth: usize, budget: &Budget) -> Result<DiscreteMeasure2<Q>> {
    check_depth(depth)?;
    check_base(spec.cols())?;
    check_base(spec.rows())?;
    cell_count(spec.cols(), depth)?;
    cell_count(spec.rows(), depth)?;
    check_atoms(spec.cell_count(), depth, budget)?;

    let (n, m) = (spec.cols() as u64, spec.rows() as u64);
    let rows: Vec<Vec<Q>> = (0..spec.rows()).map(|j| (0..spec.cols()).map(|i| spec.weight(i, j).clone()).collect()).collect();
    let live_rows: Vec<usize> = (0..spec.rows()).filter(|&j| rows[j].iter().any(|w| !w.is_zero())).collect();

    // y-words in lexicographic order, each with its digit sequence
    let mut y_words: Vec<(u64, Vec<usize>)> = vec![(0, Vec::new())];
    for _ in 0..depth {
        y_words = y_words
            .into_iter()
            .flat_map(|(y, word)| {
                live_rows.iter().map(move |&j| {
                    let mut w = word.clone();
                    w.push(j);
                    (y * m + j as u64, w)
                })
            })
            .collect();
    }
    let mut atoms = Vec::new();
    for (y, word) in y_words {
        let mut xs = vec![(0u64, Q::one())];
        for &c in &word {
            xs = extend(xs, &rows[c]);
        }
        atoms.extend(xs.into_iter().map(|(x, w)| (x, y, w)));
    }
    debug_assert!(atoms.iter().all(|a| a.0 < n.pow(depth as u32)));
    Ok(DiscreteMeasure2 {
        cols: spec.cols(),
        rows: spec.rows(),
        depth,
        atoms,
        provenance: format!("{}x{} grid measure depth {depth}", spec.rows(), spec.cols()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_ifs::Axis;
    use crate::measures::{project_marginal, slice_measure, DigitStream};
    use crate::test_support::*;

    #[test]
    fn carpet_depth_two() {
        let d = discretize_grid(&carpet(), 2, &Budget::default()).unwrap();
        assert_eq!(d.len(), 64);
        assert!(d.atoms.iter().all(|a| a.2 == q(1, 64)));
        assert_eq!(d.total(), q(1, 1));
        let mut sorted = d.atoms.clone();
        sorted.sort_by_key(|a| (a.1, a.0));
        assert_eq!(sorted, d.atoms);
    }

    #[test]
    fn cantor_depth_one() {
        let d = discretize_marginal(&ternary_cantor(), 1, &Budget::default()).unwrap();
        assert_eq!(d.atoms, vec![(0, q(1, 2)), (2, q(1, 2))]);
        assert_eq!(d.to_csv(), "location,weight\n0,1/2\n2/3,1/2\n");
    }

    #[test]
    fn carpet_middle_slice() {
        let s = slice_measure(&carpet(), &DigitStream::new(vec![], vec![1])).unwrap();
        let d = discretize_slice(&s, 3, &Budget::default()).unwrap();
        assert_eq!(d.len(), 8);
        assert!(d.atoms.iter().all(|a| a.1 == q(1, 8)));
        for (x, _) in &d.atoms {
            let digits = [x / 9, (x / 3) % 3, x % 3];
            assert!(digits.iter().all(|&g| g == 0 || g == 2), "{x}");
        }
    }

    #[test]
    fn marginal_of_discretization() {
        for spec in [carpet(), nu_carpet(), triangle_weighted(), full_grid_example()] {
            let d = discretize_grid(&spec, 3, &Budget::default()).unwrap();
            let x = discretize_marginal(&project_marginal(&spec, Axis::X), 3, &Budget::default()).unwrap();
            assert_eq!(d.x_marginal().atoms, x.atoms);
            let y = discretize_marginal(&project_marginal(&spec, Axis::Y), 3, &Budget::default()).unwrap();
            assert_eq!(d.y_marginal().atoms, y.atoms);
        }
    }

    #[test]
    fn budget_and_degenerate() {
        let tight = Budget { max_atoms: 100, ..Budget::default() };
        assert!(discretize_grid(&carpet(), 3, &tight).unwrap_err().is_budget());
        assert!(discretize_marginal(&ternary_cantor(), 7, &tight).unwrap_err().is_budget());
        assert!(discretize_marginal(&ternary_cantor(), 6, &tight).is_ok());
        assert!(matches!(discretize_grid(&uniform_full(1, 2), 2, &Budget::default()), Err(Error::Unsupported(_))));
        assert!(matches!(discretize_marginal(&ternary_cantor(), 0, &Budget::default()), Err(Error::Invalid(_))));
    }

    #[test]
    fn y_blocks_partition_atoms() {
        let d = discretize_grid(&triangle(), 3, &Budget::default()).unwrap();
        let blocks = d.y_blocks();
        assert_eq!(blocks.iter().map(|b| b.1.len()).sum::<usize>(), d.len());
        assert_eq!(blocks.iter().map(|b| b.0).collect::<Vec<_>>(), d.y_words());
    }
}
