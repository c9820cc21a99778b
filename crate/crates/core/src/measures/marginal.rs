use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid_ifs::{Axis, GridSpec};
use crate::scalar::Exact;

/// A one-dimensional digit IFS `{ (x + i) / base }` with digit weights `w_i`.
///
/// Base 1 is accepted and stands for Lebesgue measure on `[0, 1)` (the
/// marginal along a single-row or single-column axis).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarginalIfs<Q> {
    base: usize,
    weights: Vec<Q>,
}

impl<Q: Exact> MarginalIfs<Q> {
    pub fn new(base: usize, weights: Vec<Q>) -> Result<Self> {
        if base == 0 {
            return Err(Error::Dimension("base must be at least 1".into()));
        }
        if weights.len() != base {
            return Err(Error::Dimension(format!("base {base} needs {base} digit weights, got {}", weights.len())));
        }
        let mut total = Q::zero();
        for (i, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(Error::NegativeWeight { col: i, row: 0, weight: w.to_string() });
            }
            total = total + w.clone();
        }
        if !total.is_one() {
            return Err(Error::WeightSum(total.to_string()));
        }
        Ok(Self { base, weights })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn max_weight(&self) -> Q {
        self.weights.iter().max().cloned().unwrap_or_else(Q::zero)
    }

    /// Uniform weights `1/base`.
    pub fn uniform(base: usize) -> Result<Self> {
        if base == 0 {
            return Err(Error::Dimension("base must be at least 1".into()));
        }
        Self::new(base, vec![Q::one() / Q::from_usize(base); base])
    }

    pub fn is_lebesgue(&self) -> bool {
        let u = Q::one() / Q::from_usize(self.base);
        self.weights.iter().all(|w| *w == u)
    }

    /// Digits with positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.base).filter(|&i| self.weights[i].is_positive()).collect()
    }

    /// Parses whitespace or comma separated weights, e.g. `"1/2 0 1/2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let weights = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<Q>().map_err(|_| Error::Syntax(format!("cannot parse weight {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights.len(), weights)
    }
}

/// The marginal of a grid measure on one axis: column totals for `x`, row totals for `y`.
pub fn project_marginal<Q: Exact>(spec: &GridSpec<Q>, axis: Axis) -> MarginalIfs<Q> {
    let (n, m) = (spec.cols(), spec.rows());
    let weights = match axis {
        Axis::X => (0..n).map(|i| (0..m).fold(Q::zero(), |acc, j| acc + spec.weight(i, j).clone())).collect(),
        Axis::Y => (0..m).map(|j| (0..n).fold(Q::zero(), |acc, i| acc + spec.weight(i, j).clone())).collect(),
    };
    MarginalIfs { base: spec.base(axis), weights }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassTag {
    Lebesgue,
    Singular,
    Atomic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassReason {
    UniformFullDigits,
    MissingDigit,
    KakutaniNonuniform,
    FullWeightDigit,
}

/// Lebesgue / singular / atomic, with the reason.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MeasureClass {
    pub tag: ClassTag,
    pub reason: ClassReason,
}

impl MeasureClass {
    pub const LEBESGUE: Self = Self { tag: ClassTag::Lebesgue, reason: ClassReason::UniformFullDigits };

    pub fn is_singular(&self) -> bool {
        self.tag == ClassTag::Singular
    }

    pub fn is_lebesgue(&self) -> bool {
        self.tag == ClassTag::Lebesgue
    }

    pub fn is_atomic(&self) -> bool {
        self.tag == ClassTag::Atomic
    }
}

impl std::fmt::Display for MeasureClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} ({:?})", self.tag, self.reason)
    }
}

/// Kakutani dichotomy for Bernoulli digit measures, decided exactly.
pub fn classify_marginal<Q: Exact>(marg: &MarginalIfs<Q>) -> MeasureClass {
    if marg.base == 1 {
        return MeasureClass::LEBESGUE;
    }
    if marg.weights.iter().any(|w| w.is_one()) {
        return MeasureClass { tag: ClassTag::Atomic, reason: ClassReason::FullWeightDigit };
    }
    if marg.is_lebesgue() {
        return MeasureClass::LEBESGUE;
    }
    let reason =
        if marg.weights.iter().any(|w| w.is_zero()) { ClassReason::MissingDigit } else { ClassReason::KakutaniNonuniform };
    MeasureClass { tag: ClassTag::Singular, reason }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::*;
    use crate::Rational;

    #[test]
    fn carpet_projections() {
        let x = project_marginal(&carpet(), Axis::X);
        assert_eq!(x.weights(), &[q(3, 8), q(2, 8), q(3, 8)]);
        let y = project_marginal(&nu_carpet(), Axis::Y);
        assert_eq!(y.weights(), &[q(1, 3), q(1, 3), q(1, 3)]);
        let x = project_marginal(&nu_carpet(), Axis::X);
        assert_eq!(x.weights(), &[q(332, 900), q(236, 900), q(332, 900)]);
    }

    #[test]
    fn full_grid_y_projection() {
        let y = project_marginal(&full_grid_example(), Axis::Y);
        assert_eq!(y.weights(), &[q(8, 32), q(6, 32), q(6, 32), q(12, 32)]);
        assert_eq!(y.base(), 4);
    }

    #[test]
    fn classes() {
        let leb = MarginalIfs::new(3, vec![q(1, 3); 3]).unwrap();
        assert_eq!(classify_marginal(&leb), MeasureClass::LEBESGUE);
        let nu = MarginalIfs::new(3, vec![q(332, 900), q(236, 900), q(332, 900)]).unwrap();
        assert_eq!(
            classify_marginal(&nu),
            MeasureClass { tag: ClassTag::Singular, reason: ClassReason::KakutaniNonuniform }
        );
        assert_eq!(
            classify_marginal(&ternary_cantor()),
            MeasureClass { tag: ClassTag::Singular, reason: ClassReason::MissingDigit }
        );
        let atom = MarginalIfs::new(2, vec![q(1, 1), q(0, 1)]).unwrap();
        assert!(classify_marginal(&atom).is_atomic());
        let unit = MarginalIfs::new(1, vec![q(1, 1)]).unwrap();
        assert!(classify_marginal(&unit).is_lebesgue());
    }

    #[test]
    fn validation() {
        assert!(matches!(MarginalIfs::new(2, vec![q(1, 2)]), Err(Error::Dimension(_))));
        assert!(matches!(MarginalIfs::new(2, vec![q(1, 2), q(1, 3)]), Err(Error::WeightSum(_))));
        assert!(matches!(MarginalIfs::new(2, vec![q(3, 2), q(-1, 2)]), Err(Error::NegativeWeight { .. })));
        let parsed = MarginalIfs::<Rational>::parse("1/2, 0 1/2").unwrap();
        assert_eq!(parsed, ternary_cantor());
    }
}
