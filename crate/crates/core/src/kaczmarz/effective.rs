use num_complex::Complex;

use super::czero;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Auxiliary functions `g_n = sum_{k<=n} alpha[n][k] e_k` for `n < N`.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveSequence<F> {
    alpha: Vec<Vec<Complex<F>>>,
    pub source: String,
}

impl<F: Real> EffectiveSequence<F> {
    /// Runs the auxiliary recursion on a Hermitian Gram with unit diagonal.
    ///
    /// `gram(a, b)` is `<e_a, e_b>`; entries are read for `b < a` and `a == b`.
    pub fn new(gram: impl Fn(usize, usize) -> Complex<F>, n: usize, source: impl Into<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("an effective sequence needs N >= 1".into()));
        }
        let tol = F::epsilon().sqrt();
        for i in 0..n {
            let d = gram(i, i);
            if (d - Complex::new(F::one(), F::zero())).norm() > tol {
                return Err(Error::NonUnitDiagonal { index: i, value: format!("{d}") });
            }
        }
        let mut alpha: Vec<Vec<Complex<F>>> = Vec::with_capacity(n);
        for row in 0..n {
            let mut a = vec![czero::<F>(); row + 1];
            a[row] = Complex::new(F::one(), F::zero());
            for (i, prev) in alpha.iter().enumerate() {
                let g = gram(row, i);
                for (slot, &p) in a.iter_mut().zip(prev) {
                    *slot = *slot - g * p;
                }
            }
            alpha.push(a);
        }
        Ok(Self { alpha, source: source.into() })
    }

    /// Toeplitz case: `<e_a, e_b> = mu_hat(b - a)` from `mu_hat[d]`, `d >= 0`.
    pub fn from_transform(mu_hat: &[Complex<F>], n: usize, source: impl Into<String>) -> Result<Self> {
        if mu_hat.len() < n {
            return Err(Error::Invalid(format!("{} transform values given, {n} needed", mu_hat.len())));
        }
        Self::new(
            |a, b| if b >= a { mu_hat[b - a] } else { mu_hat[a - b].conj() },
            n,
            source,
        )
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self, n: usize, k: usize) -> Complex<F> {
        if k <= n {
            self.alpha[n][k]
        } else {
            czero()
        }
    }

    pub fn row(&self, n: usize) -> &[Complex<F>] {
        &self.alpha[n]
    }

    /// `<f, g_n> = sum_k conj(alpha[n][k]) <f, e_k>` for every `n`.
    pub fn coefficients(&self, inner: &[Complex<F>]) -> Vec<Complex<F>> {
        (0..self.len()).map(|n| self.coefficient(n, inner)).collect()
    }

    pub fn coefficient(&self, n: usize, inner: &[Complex<F>]) -> Complex<F> {
        self.alpha[n].iter().zip(inner).fold(czero(), |acc, (a, p)| acc + a.conj() * p)
    }

    /// Largest `|alpha[n][k] - delta_nk|`.
    pub fn identity_gap(&self) -> F {
        let mut gap = F::zero();
        for (n, row) in self.alpha.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                let d = if k == n { *a - Complex::new(F::one(), F::zero()) } else { *a };
                gap = gap.max(d.norm());
            }
        }
        gap
    }
}

/// Same as [`EffectiveSequence::new`].
pub fn effective_sequence<F: Real>(
    gram: impl Fn(usize, usize) -> Complex<F>,
    n: usize,
    source: impl Into<String>,
) -> Result<EffectiveSequence<F>> {
    EffectiveSequence::new(gram, n, source)
}
