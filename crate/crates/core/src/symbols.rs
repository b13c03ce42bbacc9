//! Symbol families for which `D_{m,psi,phi}` is `J_w`-symmetric, the series
//! `p`, `q` and the expansion of `q/p`, the coefficient obstruction for
//! `a_0 a_1 != 0`, the automorphism data, and the parameter conditions for
//! Hermitian and normal operators.
//!
//! Parameters follow the usual normalisation `a0 = phi(0)`, `a1 = phi'(0)`,
//! `a2 = psi^(m)(0)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::falling_factorial;
use crate::operator::UNIMODULAR_TOL;
use crate::series::TruncatedSeries;
use crate::spaces::WeightSequence;

/// Absolute tolerance for the exact-arithmetic parameter predicates.
pub const PARAM_TOL: f64 = 1e-12;

/// Relative tolerance below which the obstruction counts as zero.
pub const OBSTRUCTION_REL_TOL: f64 = 1e-10;

/// Deviation of `|lambda|` from one that is flagged in [`Automorphism::warning`].
pub const LAMBDA_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolParams {
    pub m: usize,
    pub w: Complex64,
    pub a0: Complex64,
    pub a1: Complex64,
    pub a2: Complex64,
}

impl SymbolParams {
    pub fn new(m: usize, w: Complex64, a0: Complex64, a1: Complex64, a2: Complex64) -> Result<Self> {
        if m == 0 {
            return Err(Error::UnsupportedOrder(m));
        }
        if !((w.norm() - 1.0).abs() <= UNIMODULAR_TOL) {
            return Err(Error::NotUnimodular { modulus: w.norm() });
        }
        if !(a0.norm() < 1.0) {
            return Err(Error::InvalidParams(format!("|a0| = {} must be below 1", a0.norm())));
        }
        if a2 == ZERO {
            return Err(Error::InvalidParams("a2 must be nonzero".into()));
        }
        if [a0, a1, a2].iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        Ok(Self { m, w, a0, a1, a2 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPair {
    pub phi: TruncatedSeries,
    pub psi: TruncatedSeries,
    pub params: SymbolParams,
}

fn beta_at(weights: &WeightSequence, n: usize) -> Result<f64> {
    weights.beta_extended(n).ok_or_else(|| {
        Error::InvalidWeights(format!(
            "beta({n}) is needed but custom weights stop at order {}",
            weights.order()
        ))
    })
}

/// `p(z) = sum_k (k+m)!/k! (conj(w) a0 z)^k / beta(k+m)^2` and
/// `q(z) = sum_{k>=1} (k+m)!/(k-1)! conj(w)^(k+m) a0^(k-1) z^k / beta(k+m)^2`,
/// both truncated at the order of `weights`.
pub fn pq_series(params: &SymbolParams, weights: &WeightSequence) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let m = params.m;
    if m == 0 {
        return Err(Error::UnsupportedOrder(m));
    }
    let order = weights.order();
    let wb = params.w.conj();
    let x = wb * params.a0;
    let mut p = vec![ZERO; order + 1];
    let mut q = vec![ZERO; order + 1];
    let mut x_pow = Complex64::new(1.0, 0.0);
    let mut a0_pow = Complex64::new(1.0, 0.0);
    let mut wb_pow = wb.powu((m + 1) as u32);
    for k in 0..=order {
        let b = beta_at(weights, k + m)?;
        let b2 = b * b;
        p[k] = x_pow * (falling_factorial(k + m, m) / b2);
        x_pow *= x;
        if k >= 1 {
            q[k] = wb_pow * a0_pow * (falling_factorial(k + m, m + 1) / b2);
            a0_pow *= params.a0;
            wb_pow *= wb;
        }
    }
    Ok((TruncatedSeries::new(p)?, TruncatedSeries::new(q)?))
}

/// Real coefficients `c_1..c_N` of `q/p = sum_i c_i conj(w)^(i+m) a0^(i-1) z^i`.
/// With `a0 = 0` only `c_1` is recoverable; the rest are reported as zero.
pub fn qp_coefficients(params: &SymbolParams, weights: &WeightSequence) -> Result<Vec<Complex64>> {
    let (p, q) = pq_series(params, weights)?;
    let ratio = q.divide(&p)?;
    let wb = params.w.conj();
    let a0 = params.a0;
    Ok((1..=weights.order())
        .map(|i| {
            if a0 == ZERO {
                if i == 1 {
                    ratio.coeff(1) / wb.powu((1 + params.m) as u32)
                } else {
                    ZERO
                }
            } else {
                ratio.coeff(i) / (wb.powu((i + params.m) as u32) * a0.powu((i - 1) as u32))
            }
        })
        .collect())
}

/// The value `c_1` must take for `phi'(0) = a1`: `(m+1) beta(m)^2 / beta(m+1)^2`.
pub fn derived_c1(m: usize, weights: &WeightSequence) -> Result<f64> {
    let bm = beta_at(weights, m)?;
    let bm1 = beta_at(weights, m + 1)?;
    Ok((m + 1) as f64 * bm * bm / (bm1 * bm1))
}

/// `psi = beta(m)^2 a2 / (m!)^2 * K^[m]_{w conj(a0)}`.
pub fn symmetric_psi(
    m: usize,
    w: Complex64,
    a0: Complex64,
    a2: Complex64,
    weights: &WeightSequence,
) -> Result<TruncatedSeries> {
    let order = weights.order();
    let m_fact = falling_factorial(m, m);
    if a0 == ZERO {
        return Ok(TruncatedSeries::monomial(m, a2 / m_fact, order));
    }
    let bm = weights.beta(m);
    let prefactor = a2 * (bm * bm / (m_fact * m_fact));
    weights.derivative_kernel(w * a0.conj(), m)?.series().scale(prefactor)
}

/// `phi = a0 + beta(m+1)^2 a1 / ((m+1) conj(w)^(m+1) beta(m)^2) * q/p` and the matching `psi`.
pub fn symmetric_symbols(params: &SymbolParams, weights: &WeightSequence) -> Result<SymbolPair> {
    let SymbolParams { m, w, a0, a1, a2 } = *params;
    if m == 0 {
        return Err(Error::UnsupportedOrder(m));
    }
    let order = weights.order();
    let phi = if a0 == ZERO {
        TruncatedSeries::monomial(1, a1, order)
    } else if a1 == ZERO {
        TruncatedSeries::constant(a0, order)
    } else {
        let (p, q) = pq_series(params, weights)?;
        let bm = weights.beta(m);
        let bm1 = beta_at(weights, m + 1)?;
        let factor = a1 * (bm1 * bm1) / (w.conj().powu((m + 1) as u32) * ((m + 1) as f64 * bm * bm));
        let ratio = q.divide(&p)?.scale(factor)?;
        ratio.add(&TruncatedSeries::constant(a0, order))?
    };
    let psi = symmetric_psi(m, w, a0, a2, weights)?;
    Ok(SymbolPair { phi, psi, params: *params })
}

/// Both sides of the `z^(m+2) alpha^(m+1)` coefficient identity, kept as written.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstruction {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Sum of the magnitudes of the individual terms; the scale for "zero".
    pub scale: f64,
}

impl Obstruction {
    pub fn value(&self) -> Complex64 {
        self.lhs - self.rhs
    }

    pub fn vanishes(&self) -> bool {
        self.value().norm() <= OBSTRUCTION_REL_TOL * self.scale
    }
}

/// LHS - RHS of the coefficient identity that a `J_w`-symmetric pair with
/// `a0 a1 != 0` would have to satisfy. `c_1`, `c_2` come from [`qp_coefficients`].
pub fn obstruction_eq13(params: &SymbolParams, weights: &WeightSequence) -> Result<Complex64> {
    Ok(obstruction_terms(params, weights)?.value())
}

pub fn obstruction_terms(params: &SymbolParams, weights: &WeightSequence) -> Result<Obstruction> {
    let SymbolParams { m, w, a0, a1, .. } = *params;
    // c_1 and c_2 only depend on the first three coefficients of p and q.
    let c = qp_coefficients(params, &weights.with_order(2)?)?;
    let (c1, c2) = (c[0], c[1]);
    let wb = w.conj();
    let f = |n: usize| falling_factorial(n, n);
    let b2 = |n: usize| beta_at(weights, n).map(|b| b * b);
    let (bm2, bm12, bm22) = (b2(m)?, b2(m + 1)?, b2(m + 2)?);

    let lhs_outer = wb.powu((m + 1) as u32) * (f(m + 1) / bm12);
    let l1 = c2 * wb * a0 * a1 * (f(m) * bm12 / ((m + 1) as f64 * bm2 * bm2));
    let l2 = c1 * wb * a0 * a1 * (f(m) / bm2);
    let l3 = wb * wb * a0.powu(3) * (f(m + 2) / (2.0 * bm22));
    let rhs_outer = wb.powu((m + 2) as u32) * (f(m + 2) / (2.0 * bm22));
    let r1 = wb * a0.powu(3) * (f(m + 1) / bm12);
    let r2 = c1 * a0 * a1 * (2.0 * f(m) * bm12 / ((m + 1) as f64 * bm2 * bm2));

    let lhs = lhs_outer * (l1 + l2 + l3);
    let rhs = rhs_outer * (r1 + r2);
    let scale = lhs_outer.norm() * (l1.norm() + l2.norm() + l3.norm()) + rhs_outer.norm() * (r1.norm() + r2.norm());
    Ok(Obstruction { lhs, rhs, scale })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    pub lambda: Complex64,
    pub a1: Complex64,
    pub phi: TruncatedSeries,
    /// `| |lambda| - 1 |`.
    pub lambda_deviation: f64,
    pub warning: Option<String>,
}

/// Candidate automorphism `phi = lambda (a - z)/(1 - conj(a) z)` forced by
/// `J_w`-symmetry. For `a = 0`, `lambda` is free and `free_lambda` is used.
pub fn automorphism_symbols(
    a: Complex64,
    w: Complex64,
    m: usize,
    weights: &WeightSequence,
    free_lambda: Complex64,
) -> Result<Automorphism> {
    if m == 0 {
        return Err(Error::UnsupportedOrder(m));
    }
    if !(a.norm() < 1.0) {
        return Err(Error::OutOfDisc { modulus: a.norm() });
    }
    if !((w.norm() - 1.0).abs() <= UNIMODULAR_TOL) {
        return Err(Error::NotUnimodular { modulus: w.norm() });
    }
    let order = weights.order();
    let (lambda, a1, phi) = if a == ZERO {
        let phi = TruncatedSeries::monomial(1, -free_lambda, order);
        (free_lambda, -free_lambda, phi)
    } else {
        let b2 = |n: usize| beta_at(weights, n).map(|b| b * b);
        let (bm2, bm12, bm22) = (b2(m)?, b2(m + 1)?, b2(m + 2)?);
        let mf = m as f64;
        let bracket = (mf + 2.0) * bm12 * bm12 - (mf + 1.0) * bm2 * bm22;
        let bracket_scale = (mf + 2.0) * bm12 * bm12 + (mf + 1.0) * bm2 * bm22;
        if bracket.abs() <= 1e-14 * bracket_scale {
            return Err(Error::DegenerateWeights);
        }
        let wb = w.conj();
        let lambda = a.conj() * (bm12 * bm22) / (a * wb * bracket);
        let a1 = lambda * lambda * wb * a * ((mf + 1.0) * bm2 * bm22 * (a.norm_sqr() - 1.0))
            / (bm12 * (wb * lambda * a * ((mf + 2.0) * bm12) - a.conj() * bm22));
        let num = TruncatedSeries::from_slice(&[lambda * a, -lambda], order)?;
        let den = TruncatedSeries::from_slice(&[Complex64::new(1.0, 0.0), -a.conj()], order)?;
        (lambda, a1, num.divide(&den)?)
    };
    let lambda_deviation = (lambda.norm() - 1.0).abs();
    let warning = (lambda_deviation > LAMBDA_TOL)
        .then(|| format!("|lambda| = {} deviates from 1 by {lambda_deviation:e}", lambda.norm()));
    Ok(Automorphism { lambda, a1, phi, lambda_deviation, warning })
}

/// `a2, a1` real and `conj(a0) = conj(w) a0`.
pub fn hermitian_conditions(params: &SymbolParams) -> bool {
    params.a2.im.abs() <= PARAM_TOL
        && params.a1.im.abs() <= PARAM_TOL
        && normal_constant_condition(params.a0, params.w)
}

/// `conj(a0) = conj(w) a0`.
pub fn normal_constant_condition(a0: Complex64, w: Complex64) -> bool {
    (a0.conj() - w.conj() * a0).norm() <= PARAM_TOL
}

/// `|D e_j| = |a2| |a1|^(j-m) j!/(m!(j-m)!)` for the `a0 = 0` family; zero for `j < m`.
pub fn theorem_norm_formula(j: usize, params: &SymbolParams) -> f64 {
    let m = params.m;
    if j < m {
        return 0.0;
    }
    let binom = falling_factorial(j, j - m) / falling_factorial(j - m, j - m);
    params.a2.norm() * params.a1.norm().powi((j - m) as i32) * binom
}
