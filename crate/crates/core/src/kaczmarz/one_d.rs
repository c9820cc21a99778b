use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;

use super::{cis_turns, czero, EffectiveSequence, Phases};
use crate::error::{Error, Result};
use crate::measures::DiscreteMeasure;
use crate::moments::MomentTable;
use crate::scalar::{Exact, Real};

/// Where the Gram entries `mu_hat(d)` come from.
#[derive(Clone, Copy, Debug)]
pub enum GramSource<'a, F> {
    /// The transform of the discretization itself (consistent with the quadrature).
    Discrete,
    /// Precomputed values; the table must hold `k = 0..N-1`.
    Table(&'a MomentTable<F>),
}

/// `f ~ sum_n c_n e_n` with `c_n = <f, g_n>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion1D<F> {
    pub coefficients: Vec<Complex<F>>,
    /// `||f - S_N f||` for `N = 0..=len`, evaluated at the atoms.
    pub residual_curve: Vec<F>,
    pub norm_f: F,
    pub gram: String,
}

/// Samples `f` at the atoms of a discretization, in atom order.
pub fn sample_1d<F: Real, Q: Exact>(dm: &DiscreteMeasure<Q>, f: impl Fn(F) -> Complex<F>) -> Vec<Complex<F>> {
    dm.locations::<F>().into_iter().map(f).collect()
}

pub fn expand_1d<F: Real, Q: Exact>(
    dm: &DiscreteMeasure<Q>,
    gram: GramSource<'_, F>,
    f: &[Complex<F>],
    n: usize,
) -> Result<Expansion1D<F>> {
    if f.len() != dm.len() {
        return Err(Error::SampleMismatch(format!("{} samples for {} atoms", f.len(), dm.len())));
    }
    let phases = Phases::<F>::new(dm.base, dm.depth);
    let weights: Vec<F> = dm.real_weights();
    let quad = |g: &(dyn Fn(usize) -> Complex<F> + Sync), k: i64| {
        dm.atoms.iter().enumerate().fold(czero::<F>(), |acc, (a, (x, _))| acc + g(a) * phases.neg(k, *x) * weights[a])
    };
    let (mu_hat, descriptor): (Vec<Complex<F>>, String) = match gram {
        GramSource::Discrete => (
            (0..n as i64).into_par_iter().map(|d| quad(&|_| Complex::new(F::one(), F::zero()), d)).collect(),
            format!("depth-{} discretization of {}", dm.depth, dm.provenance),
        ),
        GramSource::Table(table) => (
            (0..n as i64)
                .map(|d| table.get(d).ok_or_else(|| Error::Invalid(format!("moment table has no entry for k = {d}"))))
                .collect::<Result<_>>()?,
            table.descriptor.clone(),
        ),
    };
    let seq = EffectiveSequence::from_transform(&mu_hat, n, descriptor.clone())?;
    let inner: Vec<Complex<F>> = (0..n as i64).into_par_iter().map(|k| quad(&|a| f[a], k)).collect();
    let coefficients = seq.coefficients(&inner);

    let norm = |r: &[Complex<F>]| r.iter().zip(&weights).map(|(v, &w)| v.norm_sqr() * w).sum::<F>().sqrt();
    let mut residual = f.to_vec();
    let norm_f = norm(&residual);
    let mut residual_curve = Vec::with_capacity(n + 1);
    residual_curve.push(norm_f);
    for (k, c) in coefficients.iter().enumerate() {
        for (r, (x, _)) in residual.iter_mut().zip(&dm.atoms) {
            *r = *r - *c * phases.pos(k as i64, *x);
        }
        residual_curve.push(norm(&residual));
    }
    Ok(Expansion1D { coefficients, residual_curve, norm_f, gram: descriptor })
}

impl<F: Real> Expansion1D<F> {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn final_residual(&self) -> F {
        *self.residual_curve.last().expect("curve starts at ||f||")
    }

    /// `sum_n c_n exp(2 pi i n x)`, summed with `n` ascending.
    pub fn synthesize(&self, points: &[F]) -> Vec<Complex<F>> {
        points
            .iter()
            .map(|&x| {
                self.coefficients
                    .iter()
                    .enumerate()
                    .fold(czero(), |acc, (n, c)| acc + *c * cis_turns(F::of_usize(n) * x))
            })
            .collect()
    }

    /// Canonical order and frame bounds, for echoing next to exports.
    pub fn describe(&self) -> String {
        format!(
            "order: n = 0..{} ascending; frame bounds A = 1, B = 1 (Parseval); gram: {}",
            self.len().saturating_sub(1),
            self.gram
        )
    }

    /// CSV with columns `n,re,im`.
    pub fn coefficients_csv(&self) -> String {
        let mut out = String::from("n,re,im\n");
        for (n, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "{n},{},{}", c.re, c.im);
        }
        out
    }

    /// CSV with columns `step,residual`.
    pub fn residual_csv(&self) -> String {
        residual_csv(&self.residual_curve)
    }
}

pub(crate) fn residual_csv<F: Real>(curve: &[F]) -> String {
    let mut out = String::from("step,residual\n");
    for (k, r) in curve.iter().enumerate() {
        let _ = writeln!(out, "{k},{r}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::discretize_marginal;
    use crate::moments::MomentTable;
    use crate::Budget;

    fn lebesgue(depth: usize) -> DiscreteMeasure<crate::Rational> {
        discretize_marginal(&crate::Marginal::parse("1/2 1/2").unwrap(), depth, &Budget::default()).unwrap()
    }

    fn cantor(depth: usize) -> DiscreteMeasure<crate::Rational> {
        discretize_marginal(&crate::Marginal::parse("1/2 0 1/2").unwrap(), depth, &Budget::default()).unwrap()
    }

    fn exp(k: f64) -> impl Fn(f64) -> Complex<f64> {
        move |x| cis_turns(k * x)
    }

    #[test]
    fn constant_function() {
        let dm = cantor(6);
        let f = sample_1d(&dm, |_| Complex::new(1.0, 0.0));
        let e = expand_1d(&dm, GramSource::Discrete, &f, 8).unwrap();
        assert!((e.coefficients[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        assert!(e.coefficients[1..].iter().all(|c| c.norm() < 1e-12));
        assert!(e.residual_curve[1] < 1e-12);
    }

    #[test]
    fn lebesgue_is_classical() {
        let dm = lebesgue(6);
        let f = sample_1d(&dm, exp(3.0));
        let e = expand_1d(&dm, GramSource::Discrete, &f, 8).unwrap();
        for (n, c) in e.coefficients.iter().enumerate() {
            let want = if n == 3 { 1.0 } else { 0.0 };
            assert!((c - Complex::new(want, 0.0)).norm() < 1e-12, "{n}: {c}");
        }
        assert!(e.final_residual() < 1e-12);
    }

    #[test]
    fn cantor_residual_decreases() {
        let dm = cantor(8);
        let f = sample_1d(&dm, exp(1.0));
        let e = expand_1d(&dm, GramSource::Discrete, &f, 64).unwrap();
        assert!(e.residual_curve.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(e.residual_curve[64] < e.residual_curve[8]);
        let mass: f64 = e.coefficients.iter().map(|c| c.norm_sqr()).sum();
        assert!(mass <= 1.0 + 1e-9);
    }

    #[test]
    fn table_gram_close_to_discrete() {
        let cantor_ifs = crate::Marginal::parse("1/2 0 1/2").unwrap();
        let dm = cantor(8);
        let f = sample_1d(&dm, exp(1.0));
        let table = MomentTable::<f64>::marginal(&cantor_ifs, 0..=15, 1e-12).unwrap();
        let a = expand_1d(&dm, GramSource::Table(&table), &f, 16).unwrap();
        let b = expand_1d(&dm, GramSource::Discrete, &f, 16).unwrap();
        assert_eq!(a.gram, table.descriptor);
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((x - y).norm() < 1e-2);
        }
        let short = MomentTable::<f64>::marginal(&cantor_ifs, 0..=3, 1e-12).unwrap();
        assert!(expand_1d(&dm, GramSource::Table(&short), &f, 16).is_err());
    }

    #[test]
    fn mismatched_samples() {
        let dm = cantor(3);
        let err = expand_1d::<f64, _>(&dm, GramSource::Discrete, &[Complex::new(1.0, 0.0)], 4).unwrap_err();
        assert!(matches!(err, Error::SampleMismatch(_)));
    }

    #[test]
    fn synthesis() {
        let dm = lebesgue(5);
        let f = sample_1d(&dm, |_| Complex::new(1.0, 0.0));
        let e = expand_1d(&dm, GramSource::Discrete, &f, 4).unwrap();
        for v in e.synthesize(&[0.0, 0.3, 0.99]) {
            assert!((v - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
        let zero = Expansion1D { coefficients: vec![Complex::new(0.0, 0.0); 3], ..e };
        assert!(zero.synthesize(&[0.1, 0.7]).iter().all(|v| v.norm() == 0.0));
        assert!(zero.coefficients_csv().starts_with("n,re,im\n0,0,0\n"));
        assert!(zero.residual_csv().starts_with("step,residual\n0,"));
    }
}
