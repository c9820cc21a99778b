use crate::error::{Error, Result};
use crate::grid_ifs::GridSpec;
use crate::scalar::Exact;

/// The `(n, m)`-adic rectangle
/// `[sum d_k / n^(k+1), + n^-K) x [sum c_k / m^(k+1), + m^-K)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdicRectangle {
    x_digits: Vec<usize>,
    y_digits: Vec<usize>,
}

impl AdicRectangle {
    pub fn new(x_digits: Vec<usize>, y_digits: Vec<usize>) -> Result<Self> {
        if x_digits.len() != y_digits.len() {
            return Err(Error::Dimension(format!(
                "x word has {} digits, y word has {}",
                x_digits.len(),
                y_digits.len()
            )));
        }
        Ok(Self { x_digits, y_digits })
    }

    /// The whole square.
    pub fn whole() -> Self {
        Self { x_digits: Vec::new(), y_digits: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.x_digits.len()
    }

    pub fn x_digits(&self) -> &[usize] {
        &self.x_digits
    }

    pub fn y_digits(&self) -> &[usize] {
        &self.y_digits
    }

    /// Appends one digit pair.
    pub fn child(&self, x_digit: usize, y_digit: usize) -> Self {
        let mut out = self.clone();
        out.x_digits.push(x_digit);
        out.y_digits.push(y_digit);
        out
    }
}

/// `prod_k p(d_k, c_k)`, exactly; 1 for the empty word.
pub fn rectangle_measure<Q: Exact>(spec: &GridSpec<Q>, rect: &AdicRectangle) -> Result<Q> {
    let mut acc = Q::one();
    for (&d, &c) in rect.x_digits.iter().zip(&rect.y_digits) {
        if d >= spec.cols() {
            return Err(Error::DigitOutOfRange { digit: d, base: spec.cols() });
        }
        if c >= spec.rows() {
            return Err(Error::DigitOutOfRange { digit: c, base: spec.rows() });
        }
        acc = acc * spec.weight(d, c).clone();
    }
    Ok(acc)
}
