use rand_core::RngCore;
use serde::Serialize;

use crate::grid_ifs::seeded_rng;
use crate::measures::MarginalIfs;
use crate::scalar::Exact;

/// A pair `(alpha, C)` with `mu(I) <= C |I|^alpha` for every interval `I`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrostmanBound {
    pub alpha: f64,
    pub c: f64,
    /// Set when some digit carries all the mass; only `alpha = 0` works then.
    pub atomic: bool,
}

impl FrostmanBound {
    pub fn new(alpha: f64, c: f64) -> Self {
        Self { alpha, c, atomic: false }
    }
}

/// `alpha = -ln(max w) / ln(base)`, `C = base + 1`.
pub fn frostman_bound<Q: Exact>(marg: &MarginalIfs<Q>) -> FrostmanBound {
    let base = marg.base();
    let gamma = marg.max_weight();
    let c = (base + 1) as f64;
    if gamma.is_one() {
        return FrostmanBound { alpha: 0.0, c, atomic: true };
    }
    FrostmanBound { alpha: -gamma.to_real::<f64>().ln() / (base as f64).ln(), c, atomic: false }
}

/// Outcome of a randomized check of a Frostman pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrostmanReport {
    pub trials: usize,
    pub violations: usize,
    /// Largest `mu(I) / (C |I|^alpha)` seen; at most 1 when there is no violation.
    pub worst_ratio: f64,
    /// The interval attaining `worst_ratio`, as `(depth, start, span)`:
    /// `[start / base^depth, (start + span) / base^depth)`.
    pub worst_interval: Option<(usize, u64, u64)>,
}

impl FrostmanReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

const RELATIVE_SLACK: f64 = 1e-12;

/// Checks `mu(I) <= C |I|^alpha` on random `base`-adic intervals.
///
/// Each trial picks a depth `k <= max_depth`, a start cell and a span of at
/// most `base` consecutive depth-`k` cells; the interval mass is the exact sum
/// of the cylinder products.
pub fn verify_frostman<Q: Exact>(
    marg: &MarginalIfs<Q>,
    bound: FrostmanBound,
    trials: usize,
    max_depth: usize,
    seed: u64,
) -> FrostmanReport {
    let base = marg.base() as u64;
    let max_depth = if base < 2 { 0 } else { max_depth.min((62.0 / (base as f64).log2()).floor() as usize) };
    let mut rng = seeded_rng(seed);
    let mut below = |limit: u64| -> u64 { ((u128::from(rng.next_u64()) * u128::from(limit)) >> 64) as u64 };

    let mut report = FrostmanReport { trials, violations: 0, worst_ratio: 0.0, worst_interval: None };
    for _ in 0..trials {
        let depth = below(max_depth as u64 + 1) as usize;
        let cells = base.pow(depth as u32);
        let start = below(cells);
        let span = 1 + below(base.min(cells - start));
        let mass = (start..start + span)
            .map(|cell| cylinder_mass(marg, cell, depth))
            .fold(Q::zero(), |a, b| a + b)
            .to_real::<f64>();
        if mass == 0.0 {
            continue;
        }
        let length = span as f64 / cells as f64;
        let allowed = bound.c * length.powf(bound.alpha);
        let ratio = mass / allowed;
        if ratio > 1.0 + RELATIVE_SLACK {
            report.violations += 1;
        }
        if ratio > report.worst_ratio {
            report.worst_ratio = ratio;
            report.worst_interval = Some((depth, start, span));
        }
    }
    report
}

/// Mass of the depth-`depth` cylinder with index `cell`.
fn cylinder_mass<Q: Exact>(marg: &MarginalIfs<Q>, mut cell: u64, depth: usize) -> Q {
    let base = marg.base() as u64;
    let mut acc = Q::one();
    for _ in 0..depth {
        let w = &marg.weights()[(cell % base) as usize];
        if w.is_zero() {
            return Q::zero();
        }
        acc = acc * w.clone();
        cell /= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid_ifs::Axis;
    use crate::measures::project_marginal;
    use crate::test_support::*;

    #[test]
    fn cantor_bound() {
        let b = frostman_bound(&ternary_cantor());
        assert!((b.alpha - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert_eq!(b.c, 4.0);
        assert!(!b.atomic);
    }

    #[test]
    fn triangle_x_bound() {
        let b = frostman_bound(&project_marginal(&triangle(), Axis::X));
        assert!((b.alpha - (3f64.ln() / 2f64.ln() - 1.0)).abs() < 1e-12);
        assert_eq!(b.c, 3.0);
    }

    #[test]
    fn uniform_bound() {
        let b = frostman_bound(&uniform_digits(5));
        assert!((b.alpha - 1.0).abs() < 1e-15);
        assert_eq!(b.c, 6.0);
    }

    #[test]
    fn atomic_is_flagged() {
        let m = MarginalIfs::new(2, vec![q(0, 1), q(1, 1)]).unwrap();
        let b = frostman_bound(&m);
        assert!(b.atomic);
        assert_eq!(b.alpha, 0.0);
    }

    #[test]
    fn cantor_pair_holds_and_wrong_pair_fails() {
        let cantor = ternary_cantor();
        let good = verify_frostman(&cantor, frostman_bound(&cantor), 2000, 10, 5);
        assert!(good.passed(), "{good:?}");
        assert!(good.worst_ratio <= 1.0 + 1e-12);
        let bad = verify_frostman(&cantor, FrostmanBound::new(1.0, 4.0), 2000, 10, 5);
        assert!(bad.violations > 0);
    }

    #[test]
    fn inflated_constant_never_fails() {
        for marg in [quaternary_cantor(), project_marginal(&nu_carpet(), Axis::X)] {
            let mut b = frostman_bound(&marg);
            b.c *= 10.0;
            assert!(verify_frostman(&marg, b, 500, 8, 9).passed());
        }
    }

    #[test]
    fn cylinder_masses() {
        let c = ternary_cantor();
        // cell 0 at depth 3 is [0, 1/27)
        assert_eq!(cylinder_mass(&c, 0, 3), q(1, 8));
        // cell 1 at depth 1 is the middle third
        assert_eq!(cylinder_mass(&c, 1, 1), q(0, 1));
    }
}
