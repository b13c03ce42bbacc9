//! Weighted Hardy spaces `H^2(beta)`: weight sequences, the weighted inner
//! product and the reproducing kernels `K_alpha` and `K_alpha^[m]`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::falling_factorial;
use crate::series::TruncatedSeries;

/// Finite-order stand-in for `liminf beta(n)^(1/n) >= 1`.
pub const ROOT_FLOOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Hardy,
    Bergman,
    Dirichlet,
    DerivHardy,
    Custom,
}

impl WeightKind {
    pub const NAMED: [WeightKind; 4] =
        [WeightKind::Hardy, WeightKind::Bergman, WeightKind::Dirichlet, WeightKind::DerivHardy];

    /// `beta(n)` for the named spaces. `beta(0) = 1` throughout; Dirichlet and
    /// derivative Hardy use `sqrt(n)` and `n` only for `n >= 1`.
    pub fn beta(self, n: usize) -> Option<f64> {
        let x = n as f64;
        match self {
            WeightKind::Hardy => Some(1.0),
            WeightKind::Bergman => Some((x + 1.0).sqrt().recip()),
            WeightKind::Dirichlet => Some(if n == 0 { 1.0 } else { x.sqrt() }),
            WeightKind::DerivHardy => Some(if n == 0 { 1.0 } else { x }),
            WeightKind::Custom => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WeightKind::Hardy => "hardy",
            WeightKind::Bergman => "bergman",
            WeightKind::Dirichlet => "dirichlet",
            WeightKind::DerivHardy => "deriv_hardy",
            WeightKind::Custom => "custom",
        }
    }
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hardy" => Ok(WeightKind::Hardy),
            "bergman" => Ok(WeightKind::Bergman),
            "dirichlet" => Ok(WeightKind::Dirichlet),
            "deriv_hardy" | "deriv-hardy" => Ok(WeightKind::DerivHardy),
            "custom" => Ok(WeightKind::Custom),
            other => Err(Error::InvalidWeights(format!("unknown space kind '{other}'"))),
        }
    }
}

/// `beta(0), ..., beta(N)`. Cheap to clone; the values are shared.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    kind: WeightKind,
    values: Arc<[f64]>,
}

impl PartialEq for WeightSequence {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && (Arc::ptr_eq(&self.values, &other.values) || self.values == other.values)
    }
}

impl WeightSequence {
    /// Weights of a named space up to order `order`. `Custom` has no formula; use [`Self::custom`].
    pub fn named(kind: WeightKind, order: usize) -> Result<Self> {
        if kind == WeightKind::Custom {
            return Err(Error::InvalidWeights("custom weights need explicit values".into()));
        }
        let values: Vec<f64> = (0..=order).map(|n| kind.beta(n).unwrap()).collect();
        Self::validated(kind, values)
    }

    pub fn custom(values: Vec<f64>) -> Result<Self> {
        Self::validated(WeightKind::Custom, values)
    }

    fn validated(kind: WeightKind, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidWeights("empty weight sequence".into()));
        }
        if values[0] != 1.0 {
            return Err(Error::InvalidWeights(format!("beta(0) must be 1, got {}", values[0])));
        }
        for (n, &b) in values.iter().enumerate() {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidWeights(format!("beta({n}) = {b} is not a positive number")));
            }
            if n > 0 && b.powf(1.0 / n as f64) < ROOT_FLOOR {
                return Err(Error::InvalidWeights(format!(
                    "beta({n})^(1/{n}) = {} is below {ROOT_FLOOR}",
                    b.powf(1.0 / n as f64)
                )));
            }
        }
        Ok(Self { kind, values: values.into() })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn beta(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// `beta(n)` for any `n`: the formula for named kinds, the stored value
    /// for custom weights, `None` past the order of custom weights.
    pub fn beta_extended(&self, n: usize) -> Option<f64> {
        self.kind.beta(n).or_else(|| self.values.get(n).copied())
    }

    /// Same space at a different truncation order. Custom weights cannot be extended.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        if order <= self.order() {
            return Self::validated(self.kind, self.values[..=order].to_vec());
        }
        match self.kind {
            WeightKind::Custom => Err(Error::InvalidWeights(format!(
                "custom weights only known up to order {}",
                self.order()
            ))),
            kind => Self::named(kind, order),
        }
    }

    pub fn element(&self, series: TruncatedSeries) -> Result<SpaceElement> {
        SpaceElement::new(series, self.clone())
    }

    pub fn inner_product(&self, f: &SpaceElement, g: &SpaceElement) -> Result<Complex64> {
        if f.weights != *self || g.weights != *self {
            return Err(Error::SpaceMismatch);
        }
        f.inner_product(g)
    }

    /// `K_alpha(z) = sum conj(alpha)^n z^n / beta(n)^2`.
    pub fn kernel(&self, alpha: Complex64) -> Result<SpaceElement> {
        self.derivative_kernel(alpha, 0)
    }

    /// `K_alpha^[m](z) = sum_{n>=m} n!/(n-m)! conj(alpha)^(n-m) z^n / beta(n)^2`,
    /// reproducing `f^(m)(alpha)`.
    pub fn derivative_kernel(&self, alpha: Complex64, m: usize) -> Result<SpaceElement> {
        check_in_disc(alpha)?;
        let order = self.order();
        if m > order {
            return Err(Error::DegreeUnderflow { m, order });
        }
        let a = alpha.conj();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        let mut pow = Complex64::new(1.0, 0.0);
        for n in m..=order {
            let b = self.values[n];
            coeffs[n] = pow * (falling_factorial(n, m) / (b * b));
            pow *= a;
        }
        self.element(TruncatedSeries::new(coeffs)?)
    }

    /// Total magnitude of the coefficients of `K_alpha^[m]` dropped by the
    /// truncation, bounded by `sum_{n>N} n^m |alpha|^(n-m) / beta(n)^2`.
    pub fn tail_bound(&self, alpha: Complex64, m: usize) -> Result<f64> {
        check_in_disc(alpha)?;
        let r = alpha.norm();
        let start = self.order() + 1;
        if r == 0.0 {
            return Ok(if start <= m {
                falling_factorial(m, m) / self.tail_beta(m).powi(2)
            } else {
                0.0
            });
        }
        let mut sum = 0.0;
        let mut n = start;
        loop {
            let exp = n.saturating_sub(m) as i32;
            let term = (n as f64).powi(m as i32) * r.powi(exp) / self.tail_beta(n).powi(2);
            sum += term;
            if n > m + 1 && term <= 1e-30 * sum.max(f64::MIN_POSITIVE) || n > start + 100_000 {
                break;
            }
            n += 1;
        }
        Ok(sum)
    }

    // Custom weights are continued by holding beta(N) constant.
    fn tail_beta(&self, n: usize) -> f64 {
        self.beta_extended(n).unwrap_or(self.values[self.order()])
    }
}

fn check_in_disc(alpha: Complex64) -> Result<()> {
    let modulus = alpha.norm();
    if !(modulus < 1.0) {
        return Err(Error::OutOfDisc { modulus });
    }
    Ok(())
}

/// A truncated element of `H^2(beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceElement {
    series: TruncatedSeries,
    weights: WeightSequence,
}

impl SpaceElement {
    pub fn new(series: TruncatedSeries, weights: WeightSequence) -> Result<Self> {
        if series.order() != weights.order() {
            return Err(Error::OrderMismatch { left: series.order(), right: weights.order() });
        }
        Ok(Self { series, weights })
    }

    /// Element with orthonormal-basis coordinates `y_n`, i.e. `a_n = y_n / beta(n)`.
    pub fn from_orthonormal(coords: &[Complex64], weights: WeightSequence) -> Result<Self> {
        let coeffs = coords.iter().zip(weights.values()).map(|(y, b)| y / b).collect();
        Self::new(TruncatedSeries::new(coeffs)?, weights)
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.series
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    /// Coordinates in the basis `e_n = z^n / beta(n)`: `y_n = beta(n) a_n`.
    pub fn to_orthonormal(&self) -> Vec<Complex64> {
        self.series.coeffs().iter().zip(self.weights.values()).map(|(a, b)| a * b).collect()
    }

    /// `<f, g> = sum a_n conj(c_n) beta(n)^2`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.weights != other.weights {
            return Err(Error::SpaceMismatch);
        }
        Ok(self
            .series
            .coeffs()
            .iter()
            .zip(other.series.coeffs())
            .zip(self.weights.values())
            .map(|((a, c), b)| a * c.conj() * (b * b))
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.series
            .coeffs()
            .iter()
            .zip(self.weights.values())
            .map(|(a, b)| a.norm_sqr() * b * b)
            .sum::<f64>()
            .sqrt()
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.series.evaluate(z)
    }
}
