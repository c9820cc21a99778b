use std::collections::HashMap;

use num_complex::Complex;
use rayon::prelude::*;

use super::EffectiveSequence;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::grid_ifs::GridSpec;
use crate::measures::{discretize_slice, normalized_rows, slice_measure, DigitStream};
use crate::moments::{discrete_transform, slice_transform};
use crate::scalar::{Exact, Real};

/// How slice Gram entries are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SliceGram {
    /// Transform of the depth-`K` product measure, `K` the word length.
    Discretized,
    /// Transform of the slice through the lowest supported point of the word's
    /// cell (the word followed by the lowest nonempty row), certified to `eps`.
    Transform { eps: f64 },
}

/// Effective sequences of the conditional x-measures, one per distinct slice.
///
/// Two y-words whose digits select equal normalized rows at every position
/// carry the same slice, so sequences are keyed by the row classes.
#[derive(Clone, Debug)]
pub struct SliceCache<F> {
    classes: Vec<Option<usize>>,
    sequences: HashMap<Vec<usize>, EffectiveSequence<F>>,
}

impl<F: Real> SliceCache<F> {
    /// Row classes of a word; fails if a digit selects an empty row.
    pub fn key(&self, word: &[usize]) -> Result<Vec<usize>> {
        word.iter()
            .enumerate()
            .map(|(position, &digit)| match self.classes.get(digit) {
                None => Err(Error::DigitOutOfRange { digit, base: self.classes.len() }),
                Some(None) => Err(Error::OutsideSupport { digit, position }),
                Some(Some(c)) => Ok(*c),
            })
            .collect()
    }

    pub fn get(&self, word: &[usize]) -> Option<&EffectiveSequence<F>> {
        self.key(word).ok().and_then(|k| self.sequences.get(&k))
    }

    /// Number of distinct slices.
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }
}

/// Class id of each row's normalized weight vector; `None` for empty rows.
fn row_classes<Q: Exact>(spec: &GridSpec<Q>) -> Vec<Option<usize>> {
    let rows = normalized_rows(spec);
    let mut distinct: Vec<&Vec<Q>> = Vec::new();
    rows.iter()
        .map(|row| {
            row.as_ref().map(|r| match distinct.iter().position(|d| *d == r) {
                Some(c) => c,
                None => {
                    distinct.push(r);
                    distinct.len() - 1
                }
            })
        })
        .collect()
}

pub fn slice_effective_cache<F: Real, Q: Exact>(
    spec: &GridSpec<Q>,
    words: &[Vec<usize>],
    n: usize,
    gram: SliceGram,
    budget: &Budget,
) -> Result<SliceCache<F>> {
    let mut cache = SliceCache { classes: row_classes(spec), sequences: HashMap::new() };
    let mut todo: HashMap<Vec<usize>, &Vec<usize>> = HashMap::new();
    for word in words {
        todo.entry(cache.key(word)?).or_insert(word);
    }
    let floor = cache.classes.iter().position(Option::is_some).expect("a grid has a nonempty row");
    let built: Vec<(Vec<usize>, EffectiveSequence<F>)> = todo
        .into_par_iter()
        .map(|(key, word)| {
            let slice = slice_measure(spec, &DigitStream::new(word.clone(), vec![floor]))?;
            let label = format!("slice at y-digits {}", slice.stream());
            let mu_hat: Vec<Complex<F>> = match gram {
                SliceGram::Discretized => {
                    let dm = discretize_slice(&slice, word.len(), budget)?;
                    (0..n as i64).map(|d| discrete_transform(&dm, d)).collect()
                }
                SliceGram::Transform { eps } => {
                    (0..n as i64).map(|d| slice_transform(&slice, d, eps).map(|v| v.value)).collect::<Result<_>>()?
                }
            };
            Ok((key, EffectiveSequence::from_transform(&mu_hat, n, label)?))
        })
        .collect::<Result<_>>()?;
    cache.sequences.extend(built);
    Ok(cache)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::*;

    #[test]
    fn uniform_grid_slices_are_lebesgue() {
        let words = vec![vec![0, 1], vec![1, 1], vec![1, 0]];
        let cache = slice_effective_cache::<f64, _>(&uniform_full(2, 3), &words, 6, SliceGram::Discretized, &Budget::default())
            .unwrap();
        assert_eq!(cache.len(), 1);
        // depth-2 product of uniform base-3 rows: orthonormal up to frequency 8
        assert!(cache.get(&[1, 0]).unwrap().identity_gap() < 1e-14);
    }

    #[test]
    fn carpet_middle_row() {
        let cache =
            slice_effective_cache::<f64, _>(&carpet(), &[vec![1]], 2, SliceGram::Discretized, &Budget::default()).unwrap();
        let s = cache.get(&[1]).unwrap();
        // atoms at 0 and 2/3 with mass 1/2: <e_1, e_0> = mu_hat(-1)
        let t = 2.0 * std::f64::consts::PI * 2.0 / 3.0;
        let mu_hat_minus_1 = Complex::new(0.5 + 0.5 * t.cos(), 0.5 * t.sin());
        assert!((s.alpha(1, 0) + mu_hat_minus_1).norm() < 1e-15);
    }

    #[test]
    fn equal_classes_share_a_sequence() {
        // carpet rows 0 and 2 are both (1/3, 1/3, 1/3)
        let words = vec![vec![0, 1], vec![2, 1], vec![1, 1]];
        let cache =
            slice_effective_cache::<f64, _>(&carpet(), &words, 4, SliceGram::Discretized, &Budget::default()).unwrap();
        assert_eq!(cache.len(), 2);
        assert!(std::ptr::eq(cache.get(&[0, 1]).unwrap(), cache.get(&[2, 1]).unwrap()));
        assert!(!std::ptr::eq(cache.get(&[0, 1]).unwrap(), cache.get(&[1, 1]).unwrap()));
    }

    #[test]
    fn transform_mode_tracks_discretized() {
        let words = vec![vec![1, 1, 1]];
        let a = slice_effective_cache::<f64, _>(&carpet(), &words, 4, SliceGram::Discretized, &Budget::default()).unwrap();
        let b = slice_effective_cache::<f64, _>(&carpet(), &words, 4, SliceGram::Transform { eps: 1e-12 }, &Budget::default())
            .unwrap();
        // the tail repeats the full bottom row, so only the first three factors agree
        let (sa, sb) = (a.get(&words[0]).unwrap(), b.get(&words[0]).unwrap());
        assert!((sa.alpha(1, 0) - sb.alpha(1, 0)).norm() < 0.05);
    }

    #[test]
    fn unsupported_word() {
        assert!(slice_effective_cache::<f64, _>(&triangle(), &[vec![0, 1]], 2, SliceGram::Discretized, &Budget::default()).is_ok());
        let spec = GridSpec::from_visual_weights(&[vec![q(0, 1), q(0, 1)], vec![q(1, 2), q(1, 2)]]).unwrap();
        let err = slice_effective_cache::<f64, _>(&spec, &[vec![0, 1]], 2, SliceGram::Discretized, &Budget::default())
            .unwrap_err();
        assert_eq!(err, Error::OutsideSupport { digit: 1, position: 1 });
    }

    #[test]
    fn empty_bottom_row() {
        // bottom row empty: the tail must not select it
        let spec = GridSpec::from_visual_weights(&[vec![q(1, 4), q(1, 4)], vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(0, 1)]])
            .unwrap();
        let cache = slice_effective_cache::<f64, _>(&spec, &[vec![1, 2]], 3, SliceGram::Transform { eps: 1e-12 }, &Budget::default())
            .unwrap();
        assert_eq!(cache.len(), 1);
    }
}
