use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid_ifs::GridSpec;
use crate::scalar::Exact;

/// An eventually periodic digit sequence: `preperiod` once, then `period` forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitStream {
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

impl DigitStream {
    /// An empty `period` means the stream ends in zeros.
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Self {
        let period = if period.is_empty() { vec![0] } else { period };
        Self { preperiod, period }
    }

    /// The finite word followed by zeros.
    pub fn finite(word: Vec<usize>) -> Self {
        Self::new(word, vec![0])
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    pub fn digit(&self, k: usize) -> usize {
        match self.preperiod.get(k) {
            Some(&d) => d,
            None => self.period[(k - self.preperiod.len()) % self.period.len()],
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<usize> {
        (0..len).map(|k| self.digit(k)).collect()
    }

    /// Every digit that occurs, with the position of its first occurrence.
    pub fn first_occurrences(&self) -> Vec<(usize, usize)> {
        let mut seen = Vec::new();
        for (pos, &d) in self.preperiod.iter().chain(&self.period).enumerate() {
            if !seen.iter().any(|&(e, _)| e == d) {
                seen.push((d, pos));
            }
        }
        seen
    }

    /// Base-`base` expansion of `numer / denom` in `[0, 1)`.
    pub fn from_fraction(numer: u64, denom: u64, base: usize) -> Result<Self> {
        if denom == 0 || numer >= denom {
            return Err(Error::Invalid(format!("{numer}/{denom} is not in [0, 1)")));
        }
        if base < 2 {
            return Err(Error::Invalid(format!("base {base} has no digit expansion")));
        }
        let (base, denom) = (base as u128, u128::from(denom));
        let mut seen: HashMap<u128, usize> = HashMap::new();
        let mut digits = Vec::new();
        let mut r = u128::from(numer);
        while r != 0 {
            if let Some(&start) = seen.get(&r) {
                let period = digits.split_off(start);
                return Ok(Self::new(digits, period));
            }
            seen.insert(r, digits.len());
            r *= base;
            digits.push((r / denom) as usize);
            r %= denom;
        }
        Ok(Self::finite(digits))
    }

    /// Parses `"c0 c1 ... [period: q0 q1 ...]"`, or a rational `"a/b"` expanded in `base`.
    pub fn parse(text: &str, base: usize) -> Result<Self> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('/') {
            let parse = |s: &str| {
                s.trim().parse::<u64>().map_err(|_| Error::Syntax(format!("cannot parse {text:?} as a fraction")))
            };
            return Self::from_fraction(parse(a)?, parse(b)?, base);
        }
        let (head, tail) = match text.find('[') {
            Some(open) => {
                let close = text
                    .rfind(']')
                    .filter(|&c| c > open)
                    .ok_or_else(|| Error::Syntax(format!("unclosed '[' in {text:?}")))?;
                if !text[close + 1..].trim().is_empty() {
                    return Err(Error::Syntax(format!("text after ']' in {text:?}")));
                }
                let inner = text[open + 1..close].trim();
                let inner = inner
                    .strip_prefix("period")
                    .and_then(|s| s.trim_start().strip_prefix(':'))
                    .ok_or_else(|| Error::Syntax(format!("expected \"[period: ...]\" in {text:?}")))?;
                (&text[..open], inner)
            }
            None => (text, ""),
        };
        let digits = |s: &str| -> Result<Vec<usize>> {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Error::Syntax(format!("bad digit {t:?}"))))
                .collect()
        };
        let stream = Self::new(digits(head)?, digits(tail)?);
        if let Some(&(d, _)) = stream.first_occurrences().iter().find(|&&(d, _)| d >= base) {
            return Err(Error::DigitOutOfRange { digit: d, base });
        }
        Ok(stream)
    }
}

impl fmt::Display for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.preperiod {
            write!(f, "{d} ")?;
        }
        write!(f, "[period:")?;
        for d in &self.period {
            write!(f, " {d}")?;
        }
        write!(f, "]")
    }
}

/// The conditional x-distribution of a grid measure on the horizontal line
/// whose base-`m` digits are given by a stream: a product of per-position
/// digit distributions `(p_{i, c_k} / beta_{c_k})_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMeasure<Q> {
    base: usize,
    stream: DigitStream,
    /// Normalized row vectors indexed by y-digit; `None` for rows of zero weight.
    rows: Vec<Option<Vec<Q>>>,
}

impl<Q: Exact> SliceMeasure<Q> {
    /// The Lebesgue slice, for callers that adopt that convention off the support.
    pub fn lebesgue(base: usize) -> Self {
        let u = Q::one() / Q::from_usize(base);
        Self { base, stream: DigitStream::finite(Vec::new()), rows: vec![Some(vec![u; base])] }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn stream(&self) -> &DigitStream {
        &self.stream
    }

    /// Digit distribution at position `k`.
    pub fn weights_at(&self, k: usize) -> &[Q] {
        self.rows[self.stream.digit(k)].as_deref().expect("validated on construction")
    }
}

/// Row `j` divided by its total `beta_j`, or `None` for an empty row.
pub(crate) fn normalized_rows<Q: Exact>(spec: &GridSpec<Q>) -> Vec<Option<Vec<Q>>> {
    (0..spec.rows())
        .map(|j| {
            let beta = (0..spec.cols()).fold(Q::zero(), |a, i| a + spec.weight(i, j).clone());
            (!beta.is_zero()).then(|| (0..spec.cols()).map(|i| spec.weight(i, j).clone() / beta.clone()).collect())
        })
        .collect()
}

pub fn slice_measure<Q: Exact>(spec: &GridSpec<Q>, stream: &DigitStream) -> Result<SliceMeasure<Q>> {
    let rows = normalized_rows(spec);
    for (digit, position) in stream.first_occurrences() {
        match rows.get(digit) {
            None => return Err(Error::DigitOutOfRange { digit, base: spec.rows() }),
            Some(None) => return Err(Error::OutsideSupport { digit, position }),
            Some(Some(_)) => {}
        }
    }
    Ok(SliceMeasure { base: spec.cols(), stream: stream.clone(), rows })
}

/// Like [`slice_measure`], but answers the Lebesgue slice for y outside the support.
pub fn slice_measure_or_lebesgue<Q: Exact>(spec: &GridSpec<Q>, stream: &DigitStream) -> Result<SliceMeasure<Q>> {
    match slice_measure(spec, stream) {
        Err(Error::OutsideSupport { .. }) => Ok(SliceMeasure::lebesgue(spec.cols())),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::*;

    #[test]
    fn carpet_slices() {
        let s0 = slice_measure(&carpet(), &DigitStream::finite(vec![0])).unwrap();
        assert_eq!(s0.weights_at(0), &[q(1, 3), q(1, 3), q(1, 3)]);
        let s1 = slice_measure(&carpet(), &DigitStream::new(vec![], vec![1])).unwrap();
        assert_eq!(s1.weights_at(0), &[q(1, 2), q(0, 1), q(1, 2)]);
        assert_eq!(s1.weights_at(17), &[q(1, 2), q(0, 1), q(1, 2)]);
    }

    #[test]
    fn full_grid_top_row() {
        let s = slice_measure(&full_grid_example(), &DigitStream::finite(vec![3])).unwrap();
        assert_eq!(s.weights_at(0), vec![q(1, 4); 4].as_slice());
        assert!(s.weights_at(1).iter().all(|w| *w == q(1, 4)));
    }

    #[test]
    fn outside_support() {
        let thin = crate::GridSpec::from_visual_weights(&[vec![q(0, 1), q(0, 1)], vec![q(1, 2), q(1, 2)]]).unwrap();
        let err = slice_measure(&thin, &DigitStream::new(vec![0, 0], vec![1])).unwrap_err();
        assert_eq!(err, Error::OutsideSupport { digit: 1, position: 2 });
        let leb = slice_measure_or_lebesgue(&thin, &DigitStream::new(vec![], vec![1])).unwrap();
        assert_eq!(leb.weights_at(5), &[q(1, 2), q(1, 2)]);
    }

    #[test]
    fn fractions_expand() {
        assert_eq!(DigitStream::from_fraction(1, 3, 3).unwrap(), DigitStream::finite(vec![1]));
        // 1/4 = 0.020202... in base 3
        assert_eq!(DigitStream::from_fraction(1, 4, 3).unwrap(), DigitStream::new(vec![], vec![0, 2]));
        // 1/6 = 0.0111... in base 3
        assert_eq!(DigitStream::from_fraction(1, 6, 3).unwrap(), DigitStream::new(vec![0], vec![1]));
        assert_eq!(DigitStream::from_fraction(0, 5, 2).unwrap(), DigitStream::finite(vec![]));
        assert!(DigitStream::from_fraction(5, 5, 2).is_err());
    }

    #[test]
    fn parse_syntax() {
        assert_eq!(DigitStream::parse("1 0 [period: 2 1]", 3).unwrap(), DigitStream::new(vec![1, 0], vec![2, 1]));
        assert_eq!(DigitStream::parse("[ period: 1 ]", 3).unwrap(), DigitStream::new(vec![], vec![1]));
        assert_eq!(DigitStream::parse("2", 3).unwrap(), DigitStream::finite(vec![2]));
        assert_eq!(DigitStream::parse("1/4", 3).unwrap(), DigitStream::new(vec![], vec![0, 2]));
        assert!(matches!(DigitStream::parse("3", 3), Err(Error::DigitOutOfRange { .. })));
        assert!(matches!(DigitStream::parse("1 [2]", 3), Err(Error::Syntax(_))));
        let s = DigitStream::new(vec![1, 0], vec![2]);
        assert_eq!(DigitStream::parse(&s.to_string(), 3).unwrap(), s);
    }
}
