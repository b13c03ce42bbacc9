//! Compressions of `D_{m,psi,phi} f = psi * f^(m) o phi` onto `span{e_0..e_N}`
//! and the defect functionals used to decide complex symmetry, Hermitian-ness
//! and normality at truncation scale.
//!
//! In the orthonormal basis `e_n = z^n / beta(n)` the conjugation
//! `J_w f(z) = conj(f(w conj(z)))` acts as `x -> U conj(x)` with
//! `U = diag(conj(w)^n)`. Hence `J_w T* J_w` has matrix `U T^t conj(U)` and
//! `T = J_w T* J_w` holds iff `diag(w^n) T` is transpose-symmetric. `U` is
//! diagonal, so it commutes with the compression and a `J_w`-symmetric
//! operator has zero symmetry defect at every truncation order.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::falling_factorial;
use crate::series::TruncatedSeries;
use crate::spaces::{SpaceElement, WeightSequence};

/// Tolerance on `|w| = 1`.
pub const UNIMODULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMeta {
    pub m: usize,
    pub phi_at_zero: Complex64,
    /// Dropped-tail bound of `K^[m]` at `phi(0)`; infinite when `|phi(0)| = 1`.
    pub tail_bound: f64,
    pub warning: Option<String>,
}

/// `T[i][j] = <D e_j, e_i>` for `i, j <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<Complex64>,
    weights: WeightSequence,
    meta: OperatorMeta,
}

impl OperatorMatrix {
    /// Compresses `D_{m,psi,phi}`. Column `j` holds
    /// `beta(i)/beta(j) * j!/(j-m)! * [z^i](psi * phi^(j-m))`; columns `j < m` are zero.
    pub fn build(
        phi: &TruncatedSeries,
        psi: &TruncatedSeries,
        m: usize,
        weights: &WeightSequence,
    ) -> Result<Self> {
        let order = weights.order();
        for s in [phi, psi] {
            if s.order() != order {
                return Err(Error::OrderMismatch { left: s.order(), right: order });
            }
        }
        if m > order {
            return Err(Error::DegreeUnderflow { m, order });
        }
        let phi0 = phi.coeff(0);
        let modulus = phi0.norm();
        let mut warning = None;
        if modulus > 1.0 || !modulus.is_finite() {
            return Err(Error::SelfMapViolation { modulus });
        }
        let tail_bound = if modulus == 1.0 {
            warning = Some("|phi(0)| = 1: phi is not a self-map of the open disc".to_string());
            f64::INFINITY
        } else {
            weights.tail_bound(phi0, m)?
        };

        let n = order + 1;
        let mut entries = Array2::zeros((n, n));
        let mut power = TruncatedSeries::one(order);
        for j in m..n {
            if j > m {
                power = power.cauchy_product(phi)?;
            }
            let column = psi.cauchy_product(&power)?;
            let ff = falling_factorial(j, m);
            let bj = weights.beta(j);
            for i in 0..n {
                entries[[i, j]] = column.coeff(i) * (weights.beta(i) / bj * ff);
            }
        }
        if let Some(index) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            entries,
            weights: weights.clone(),
            meta: OperatorMeta { m, phi_at_zero: phi0, tail_bound, warning },
        })
    }

    /// Wraps an explicit matrix (orthonormal-basis entries). Used for tests and
    /// for operators that do not come from a symbol pair.
    pub fn from_entries(entries: Array2<Complex64>, weights: &WeightSequence, m: usize) -> Result<Self> {
        let n = weights.order() + 1;
        if entries.dim() != (n, n) {
            return Err(Error::OrderMismatch { left: entries.nrows().saturating_sub(1), right: weights.order() });
        }
        if let Some(index) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            entries,
            weights: weights.clone(),
            meta: OperatorMeta { m, phi_at_zero: Complex64::new(0.0, 0.0), tail_bound: 0.0, warning: None },
        })
    }

    pub fn entries(&self) -> ArrayView2<'_, Complex64> {
        self.entries.view()
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn meta(&self) -> &OperatorMeta {
        &self.meta
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(self.entries.view())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|z| z.conj()),
            weights: self.weights.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Applies the matrix to orthonormal-basis coordinates.
    pub fn apply(&self, coords: &[Complex64]) -> Vec<Complex64> {
        self.entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(coords).map(|(t, x)| t * x).sum())
            .collect()
    }

    pub fn apply_element(&self, f: &SpaceElement) -> Result<SpaceElement> {
        if *f.weights() != self.weights {
            return Err(Error::SpaceMismatch);
        }
        SpaceElement::from_orthonormal(&self.apply(&f.to_orthonormal()), self.weights.clone())
    }

    /// `|S - S^t|_F / max(1, |T|_F)` with `S[i][j] = w^i T[i][j]`.
    pub fn symmetry_defect(&self, c: &Conjugation) -> f64 {
        let n = self.dim();
        let powers: Vec<Complex64> = (0..n).map(|i| c.w.powu(i as u32)).collect();
        let mut sum = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = powers[i] * self.entries[[i, j]] - powers[j] * self.entries[[j, i]];
                sum += 2.0 * d.norm_sqr();
            }
        }
        sum.sqrt() / self.frobenius_norm().max(1.0)
    }

    /// `|T - T*|_F / max(1, |T|_F)`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                sum += (self.entries[[i, j]] - self.entries[[j, i]].conj()).norm_sqr();
            }
        }
        sum.sqrt() / self.frobenius_norm().max(1.0)
    }

    /// Frobenius norm of `T T* - T* T` on the leading `(N+1-margin)` square block,
    /// over `max(1, |T|_F^2)`. Compressions of normal operators need not be
    /// normal near the truncation edge; the margin discards that edge.
    pub fn normality_defect(&self, margin: usize) -> Result<f64> {
        let order = self.dim() - 1;
        if margin >= order {
            return Err(Error::InvalidMargin { margin, order });
        }
        // Plain loops rather than a BLAS-style product: a fused multiply-add
        // kernel rounds d*conj(d) and conj(d)*d differently, and diagonal
        // matrices must come out exactly normal.
        let t = &self.entries;
        let n = self.dim();
        let keep = n - margin;
        let mut sum = 0.0;
        for i in 0..keep {
            for k in 0..keep {
                let mut tt_star = Complex64::new(0.0, 0.0);
                let mut t_star_t = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    tt_star += t[[i, j]] * t[[k, j]].conj();
                    t_star_t += t[[j, i]].conj() * t[[j, k]];
                }
                sum += (tt_star - t_star_t).norm_sqr();
            }
        }
        Ok(sum.sqrt() / self.frobenius_norm().powi(2).max(1.0))
    }
}

pub fn frobenius(m: ArrayView2<'_, Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `J_w f(z) = conj(f(w conj(z)))` for unimodular `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjugation {
    w: Complex64,
}

impl Conjugation {
    pub fn new(w: Complex64) -> Result<Self> {
        let modulus = w.norm();
        if !((modulus - 1.0).abs() <= UNIMODULAR_TOL) {
            return Err(Error::NotUnimodular { modulus });
        }
        Ok(Self { w })
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    /// Coefficientwise `a_n -> conj(a_n) conj(w)^n`.
    pub fn apply_series(&self, f: &TruncatedSeries) -> TruncatedSeries {
        let wb = self.w.conj();
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = f
            .coeffs()
            .iter()
            .map(|a| {
                let v = a.conj() * pow;
                pow *= wb;
                v
            })
            .collect();
        TruncatedSeries::new(coeffs).expect("unimodular rotation keeps coefficients finite")
    }

    pub fn apply(&self, f: &SpaceElement) -> SpaceElement {
        SpaceElement::new(self.apply_series(f.series()), f.weights().clone())
            .expect("order is preserved")
    }
}

/// Relative defect `|T* K_alpha - conj(psi(alpha)) K^[m]_{phi(alpha)}| / |conj(psi(alpha)) K^[m]_{phi(alpha)}|`.
/// Falls back to the absolute difference when the reference vanishes.
pub fn adjoint_kernel_defect(
    phi: &TruncatedSeries,
    psi: &TruncatedSeries,
    m: usize,
    alpha: Complex64,
    weights: &WeightSequence,
) -> Result<f64> {
    let t = OperatorMatrix::build(phi, psi, m, weights)?;
    let k = weights.kernel(alpha)?;
    let lhs = t.adjoint().apply(&k.to_orthonormal());
    let target = weights.derivative_kernel(phi.evaluate(alpha), m)?;
    let scale = psi.evaluate(alpha).conj();
    let rhs: Vec<Complex64> = target.to_orthonormal().into_iter().map(|y| y * scale).collect();
    let diff = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let reference = rhs.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
    Ok(if reference > 0.0 { diff / reference } else { diff })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// Defect below `pass` means the property holds; above `fail` means it is
/// violated; anything in between is reported as indeterminate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub pass: f64,
    pub fail: f64,
}

impl Thresholds {
    /// Properties that hold exactly at every truncation (symmetry, Hermitian).
    pub const EXACT: Thresholds = Thresholds { pass: 1e-10, fail: 1e-4 };
    /// Properties limited by kernel tails or compression edges.
    pub const TAIL_LIMITED: Thresholds = Thresholds { pass: 1e-8, fail: 1e-4 };

    pub fn verdict(&self, defect: f64) -> Verdict {
        if defect < self.pass {
            Verdict::Pass
        } else if defect > self.fail {
            Verdict::Fail
        } else {
            Verdict::Indeterminate
        }
    }
}
