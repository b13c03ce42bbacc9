//! Complex literals: `"a+bi"`, `"a-bi"`, pure real or imaginary forms, and
//! `"exp:theta"` for `e^{i theta}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty complex literal".into());
    }
    let value = if let Some(theta) = compact.strip_prefix("exp:") {
        let theta: f64 = theta.parse().map_err(|_| format!("bad angle in {text:?}"))?;
        Complex64::from_polar(1.0, theta)
    } else {
        compact
            .parse::<Complex64>()
            .map_err(|_| format!("{text:?} is not a complex number (expected a+bi, a-bi or exp:theta)"))?
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(format!("{text:?} is not finite"));
    }
    Ok(value)
}

/// Splits a comma-separated list of complex literals. An empty string is an empty list.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_complex).collect()
}

/// JSON form of a complex value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

impl From<Cx> for Complex64 {
    fn from(z: Cx) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Text form with 15 significant digits per part.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.14e}{sign}{:.14e}i", z.re, z.im.abs())
}
