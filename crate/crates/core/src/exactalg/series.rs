//! Truncated power series over `Q`.

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// `Σ_{k ≤ K} c_k z^k + O(z^{K+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    coeffs: Vec<BigRational>,
}

impl TruncSeries {
    /// Series with the given coefficients; the truncation order is
    /// `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one term");
        TruncSeries { coeffs }
    }

    pub fn from_poly(p: &IntPoly, order: usize) -> Self {
        TruncSeries {
            coeffs: (0..=order)
                .map(|i| BigRational::from_integer(p.coeff(i)))
                .collect(),
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        TruncSeries::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        let k = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..=k).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        let k = self.order().min(other.order());
        TruncSeries {
            coeffs: (0..=k).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let k = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(k + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn scale(&self, r: &BigRational) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse to the same order.
    pub fn inverse(&self) -> Result<TruncSeries> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let k = self.order();
        let inv0 = a0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(k + 1);
        out.push(inv0.clone());
        for n in 1..=k {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &out[n - i];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncSeries { coeffs: out })
    }
}

/// Free-function form of [`TruncSeries::inverse`].
pub fn series_inverse(p: &TruncSeries) -> Result<TruncSeries> {
    p.inverse()
}
