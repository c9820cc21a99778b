use crate::error::{Error, Result};
use crate::measures::MarginalIfs;
use crate::scalar::{Exact, Real};

/// Hellinger affinity `sum_i sqrt(p_i q_i)` of two digit distributions.
///
/// Requires `q_i = 0 => p_i = 0`. Equal inputs give exactly 1.
pub fn kakutani_affinity<F: Real, Q: Exact>(p: &[Q], q: &[Q]) -> Result<F> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!("weight vectors have lengths {} and {}", p.len(), q.len())));
    }
    for (name, v) in [("p", p), ("q", q)] {
        if v.iter().any(|w| w.is_negative()) {
            return Err(Error::Support(format!("{name} has a negative entry")));
        }
        let total = v.iter().fold(Q::zero(), |a, w| a + w.clone());
        if !total.is_one() {
            return Err(Error::WeightSum(total.to_string()));
        }
    }
    if let Some(i) = (0..p.len()).find(|&i| q[i].is_zero() && !p[i].is_zero()) {
        return Err(Error::Support(format!("digit {i} has q = 0 but p = {}", p[i])));
    }
    if p == q {
        return Ok(F::one());
    }
    Ok(p.iter().zip(q).map(|(a, b)| (a.clone() * b.clone()).to_real::<F>().sqrt()).sum())
}

/// Partial products `rho, rho^2, ..., rho^terms` of the Kakutani product for
/// two Bernoulli digit measures of the same base.
pub fn kakutani_product_curve<F: Real, Q: Exact>(
    marg: &MarginalIfs<Q>,
    reference: &MarginalIfs<Q>,
    terms: usize,
) -> Result<Vec<F>> {
    if marg.base() != reference.base() {
        return Err(Error::Dimension(format!("bases {} and {} differ", marg.base(), reference.base())));
    }
    let rho: F = kakutani_affinity(marg.weights(), reference.weights())?;
    let mut acc = F::one();
    Ok((0..terms)
        .map(|_| {
            acc = acc * rho;
            acc
        })
        .collect())
}
