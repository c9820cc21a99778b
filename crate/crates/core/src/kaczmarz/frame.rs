use super::{Expansion1D, Expansion2D};
use crate::scalar::Real;

/// What [`frame_diagnostics`] needs from an expansion.
pub trait FrameExpansion<F: Real> {
    /// `|coefficient|^2` in summation order.
    fn energies(&self) -> Vec<F>;
    fn residual_curve(&self) -> &[F];
    fn norm_f(&self) -> F;
    fn frame_bounds(&self) -> (F, F);
}

impl<F: Real> FrameExpansion<F> for Expansion1D<F> {
    fn energies(&self) -> Vec<F> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    fn residual_curve(&self) -> &[F] {
        &self.residual_curve
    }

    fn norm_f(&self) -> F {
        self.norm_f
    }

    fn frame_bounds(&self) -> (F, F) {
        (F::one(), F::one())
    }
}

impl<F: Real> FrameExpansion<F> for Expansion2D<F> {
    fn energies(&self) -> Vec<F> {
        self.coefficients.iter().flatten().map(|c| c.norm_sqr()).collect()
    }

    fn residual_curve(&self) -> &[F] {
        &self.residual_curve
    }

    fn norm_f(&self) -> F {
        self.norm_f
    }

    fn frame_bounds(&self) -> (F, F) {
        self.frame_bounds
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameReport {
    /// `sum |coefficients|^2`.
    pub energy: f64,
    pub norm_sq: f64,
    /// `A ||f||^2`.
    pub lower: f64,
    /// `B ||f||^2`.
    pub upper: f64,
    pub tolerance: f64,
    /// `energy <= upper + tolerance`.
    pub bessel_ok: bool,
    /// `|energy - ||f||^2|`; tends to zero for a Parseval frame as `N` grows.
    pub identity_gap: f64,
    /// Largest step up of the residual curve (zero when nonincreasing).
    pub residual_max_increase: f64,
    /// No residual step up exceeds `1e-12`.
    pub residual_monotone: bool,
}

impl FrameReport {
    pub fn passed(&self) -> bool {
        self.bessel_ok
    }

    pub fn to_text(&self) -> String {
        format!(
            "energy {:.12e}\n||f||^2 {:.12e}\nA||f||^2 {:.12e}\nB||f||^2 {:.12e}\nbessel {} (tolerance {:e})\nidentity gap {:.3e}\nresidual max increase {:.3e} ({})\n",
            self.energy,
            self.norm_sq,
            self.lower,
            self.upper,
            if self.bessel_ok { "pass" } else { "FAIL" },
            self.tolerance,
            self.identity_gap,
            self.residual_max_increase,
            if self.residual_monotone { "nonincreasing" } else { "NOT nonincreasing" },
        )
    }
}

pub fn frame_diagnostics<F: Real>(expansion: &impl FrameExpansion<F>, tolerance: f64) -> FrameReport {
    let to = |v: F| v.to_f64().unwrap_or(f64::NAN);
    let energy: f64 = expansion.energies().into_iter().map(to).sum();
    let norm_sq = to(expansion.norm_f()).powi(2);
    let (a, b) = expansion.frame_bounds();
    let (lower, upper) = (to(a) * norm_sq, to(b) * norm_sq);
    let residual_max_increase = expansion
        .residual_curve()
        .windows(2)
        .map(|w| to(w[1]) - to(w[0]))
        .fold(0.0, f64::max);
    FrameReport {
        energy,
        norm_sq,
        lower,
        upper,
        tolerance,
        bessel_ok: energy <= upper + tolerance,
        identity_gap: (energy - norm_sq).abs(),
        residual_max_increase,
        residual_monotone: residual_max_increase <= 1e-12,
    }
}
