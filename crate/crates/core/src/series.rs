//! Truncated complex power series `a_0 + a_1 z + ... + a_N z^N`.
//!
//! Every operation is exact to order `N`: coefficient `n` of a result only
//! depends on coefficients `0..=n` of the operands. Series of different
//! orders are never combined implicitly; use [`TruncatedSeries::retruncate`].
//!
//! Supported working range is `N <= 128` and derivative orders `m <= 12`;
//! factorial ratios are formed as falling-factorial products so they stay
//! finite throughout that range.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::falling_factorial;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Relative part of the division threshold: `|den_0| < DIV_REL_TOL * max(1, |den|_inf)` is refused.
pub const DIV_REL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// Builds a series of order `coeffs.len() - 1`. Rejects empty input and non-finite values.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParams("a series needs at least one coefficient".into()));
        }
        Self::checked(coeffs)
    }

    /// Pads with zeros (or rejects nothing) so that the result has order `order`.
    /// Coefficients beyond `order` are dropped.
    pub fn from_slice(coeffs: &[Complex64], order: usize) -> Result<Self> {
        let mut v = vec![ZERO; order + 1];
        for (dst, src) in v.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Self::checked(v)
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Result<Self> {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_slice(&c, order)
    }

    pub fn zeros(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order + 1] }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `c * z^k`, or the zero series when `k > order`.
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    fn checked(coeffs: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    /// Changes the truncation order, dropping or zero-padding coefficients.
    pub fn retruncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Self::checked(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Self::checked(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        Self::checked(self.coeffs.iter().map(|a| a * factor).collect())
    }

    /// Truncated product: `c_n = sum_{k<=n} a_k b_{n-k}`.
    pub fn cauchy_product(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let n = self.coeffs.len();
        let mut out = vec![ZERO; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = ZERO;
            for k in 0..=i {
                acc += self.coeffs[k] * other.coeffs[i - k];
            }
            *slot = acc;
        }
        Self::checked(out)
    }

    /// `m`-th derivative; the result has order `N - m`.
    pub fn differentiate(&self, m: usize) -> Result<Self> {
        let order = self.order();
        if m > order {
            return Err(Error::DegreeUnderflow { m, order });
        }
        Self::checked(
            (0..=order - m)
                .map(|n| self.coeffs[n + m] * falling_factorial(n + m, m))
                .collect(),
        )
    }

    /// `self^k` truncated to the same order, by binary exponentiation.
    pub fn power(&self, k: u32) -> Result<Self> {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.cauchy_product(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.cauchy_product(&base)?;
            }
        }
        Ok(result)
    }

    /// Quotient `self / den` by forward substitution.
    pub fn divide(&self, den: &Self) -> Result<Self> {
        self.same_order(den)?;
        let d0 = den.coeffs[0];
        let threshold = DIV_REL_TOL * den.sup_norm().max(1.0);
        if d0.norm() < threshold {
            return Err(Error::DivisionByNearZero { magnitude: d0.norm(), threshold });
        }
        let n = self.coeffs.len();
        let mut r = vec![ZERO; n];
        for i in 0..n {
            let mut acc = self.coeffs[i];
            for k in 1..=i {
                acc -= den.coeffs[k] * r[i - k];
            }
            r[i] = acc / d0;
        }
        Self::checked(r)
    }

    /// Horner evaluation of the truncated sum.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
    }
}
