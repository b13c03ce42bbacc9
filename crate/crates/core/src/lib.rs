//! Numerical laboratory for generalized weighted composition operators
//! `D f = psi * f^(m) o phi` on weighted Hardy spaces `H^2(beta)`.
//!
//! Functions are handled as truncated power series ([`series`]), the space is
//! fixed by its weight sequence ([`spaces`]), operators are realised as
//! compressions onto `span{e_0..e_N}` with `e_n = z^n / beta(n)` ([`operator`]),
//! and [`symbols`] builds the symbol families for which the operator is
//! complex symmetric with respect to `J_w f(z) = conj(f(w conj(z)))`.

pub mod error;
pub mod operator;
pub mod series;
pub mod spaces;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use operator::{Conjugation, OperatorMatrix, Thresholds, Verdict};
pub use series::TruncatedSeries;
pub use spaces::{SpaceElement, WeightKind, WeightSequence};
pub use symbols::{SymbolPair, SymbolParams};

/// `n! / (n - m)!` as a falling-factorial product. Zero when `m > n`.
pub fn falling_factorial(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    ((n - m + 1)..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `n! / (m! (n - m)!)` without forming either factorial.
pub fn binomial(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    let m = m.min(n - m);
    (0..m).fold(1.0, |acc, k| acc * (n - k) as f64 / (k + 1) as f64)
}
