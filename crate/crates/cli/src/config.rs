//! Experiment configuration. A [`RawConfig`] is what a TOML file or the
//! command line provides; [`RawConfig::resolve`] validates it into an
//! [`ExperimentConfig`].

use std::path::Path;
use std::str::FromStr;

use gwc_core::operator::{Thresholds, UNIMODULAR_TOL};
use gwc_core::spaces::{WeightKind, WeightSequence};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complex::{parse_complex, Cx};
use crate::error::CliError;

pub const DEFAULT_N: usize = 48;
pub const DEFAULT_MARGIN: usize = 8;
pub const MAX_N: usize = 128;
pub const DEFAULT_ALPHA: Complex64 = Complex64::new(0.3, 0.0);

/// A complex value in a config file: either a number or a literal string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Real(f64),
    Text(String),
}

impl ComplexInput {
    fn value(&self, field: &str) -> Result<Complex64, CliError> {
        match self {
            ComplexInput::Real(x) if x.is_finite() => Ok(Complex64::new(*x, 0.0)),
            ComplexInput::Real(x) => Err(CliError::config(field, format!("{x} is not finite"))),
            ComplexInput::Text(s) => parse_complex(s).map_err(|e| CliError::config(field, e)),
        }
    }
}

impl From<&str> for ComplexInput {
    fn from(s: &str) -> Self {
        ComplexInput::Text(s.to_string())
    }
}

/// Unvalidated configuration; every field optional so that layers can be merged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub space: Option<String>,
    pub weights: Option<Vec<f64>>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub w: Option<ComplexInput>,
    pub a0: Option<ComplexInput>,
    pub a1: Option<ComplexInput>,
    pub a2: Option<ComplexInput>,
    pub auto_a: Option<ComplexInput>,
    pub lambda: Option<ComplexInput>,
    pub phi: Option<Vec<ComplexInput>>,
    pub psi: Option<Vec<ComplexInput>>,
    pub defects: Option<Vec<String>>,
    pub margin: Option<usize>,
    pub alpha: Option<ComplexInput>,
    pub tol_pass: Option<f64>,
    pub tol_fail: Option<f64>,
    pub format: Option<String>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

impl RawConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::ConfigFile { path: "<string>".into(), message: e.to_string() })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::ConfigFile { path: path.display().to_string(), message: e.to_string() })?;
        toml::from_str(&text)
            .map_err(|e| CliError::ConfigFile { path: path.display().to_string(), message: e.to_string() })
    }

    /// Fields set in `top` replace those in `self`.
    pub fn merged(mut self, top: RawConfig) -> RawConfig {
        overlay!(self, top; space, weights, n, m, w, a0, a1, a2, auto_a, lambda, phi, psi,
                 defects, margin, alpha, tol_pass, tol_fail, format);
        self
    }

    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let space = match &self.space {
            None => WeightKind::Hardy,
            Some(s) => WeightKind::from_str(s).map_err(|_| {
                CliError::config("space", format!("unknown space {s:?} (hardy, bergman, dirichlet, deriv_hardy, custom)"))
            })?,
        };
        let n = self.n.unwrap_or(DEFAULT_N);
        if n > MAX_N {
            return Err(CliError::config("n", format!("N = {n} exceeds the supported maximum {MAX_N}")));
        }
        let m = self.m.unwrap_or(1);
        if n < m + 4 {
            return Err(CliError::config("n", format!("N = {n} must be at least m + 4 = {}", m + 4)));
        }

        let custom_weights = match (space, &self.weights) {
            (WeightKind::Custom, None) => {
                return Err(CliError::config("weights", "space = custom needs a weights list"));
            }
            (WeightKind::Custom, Some(values)) => {
                if values.len() != n + 1 {
                    return Err(CliError::config(
                        "weights",
                        format!("expected N + 1 = {} values, got {}", n + 1, values.len()),
                    ));
                }
                WeightSequence::custom(values.clone()).map_err(|e| CliError::config("weights", e.to_string()))?;
                Some(values.clone())
            }
            (_, Some(_)) => {
                return Err(CliError::config("weights", "explicit weights require space = custom"));
            }
            (_, None) => None,
        };

        let w = match &self.w {
            None => Complex64::new(1.0, 0.0),
            Some(input) => input.value("w")?,
        };
        if !((w.norm() - 1.0).abs() <= UNIMODULAR_TOL) {
            return Err(CliError::config("w", format!("w must be unimodular (|w| = {})", w.norm())));
        }

        let source = self.resolve_source(m, space, n)?;

        let defects = match &self.defects {
            None => DefectKind::ALL.to_vec(),
            Some(names) => {
                let mut out: Vec<DefectKind> = Vec::new();
                for name in names {
                    let d = DefectKind::from_str(name).map_err(|e| CliError::config("defects", e))?;
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
                if out.is_empty() {
                    return Err(CliError::config("defects", "select at least one defect"));
                }
                out
            }
        };

        let margin = self.margin.unwrap_or(DEFAULT_MARGIN);
        if defects.contains(&DefectKind::Normality) && margin >= n {
            return Err(CliError::config("margin", format!("margin {margin} must be below N = {n}")));
        }
        let alpha = match &self.alpha {
            None => DEFAULT_ALPHA,
            Some(input) => input.value("alpha")?,
        };
        if !(alpha.norm() < 1.0) {
            return Err(CliError::config("alpha", format!("alpha must lie in the open unit disc (|alpha| = {})", alpha.norm())));
        }
        for (field, tol) in [("tol_pass", self.tol_pass), ("tol_fail", self.tol_fail)] {
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::config(field, format!("tolerance must be positive, got {t}")));
                }
            }
        }
        let format = match self.format.as_deref() {
            None => OutputFormat::Text,
            Some(s) => OutputFormat::from_str(s).map_err(|e| CliError::config("format", e))?,
        };
        let config = ExperimentConfig {
            space,
            weights: custom_weights,
            n,
            m,
            w,
            source,
            defects,
            margin,
            alpha,
            tol_pass: self.tol_pass,
            tol_fail: self.tol_fail,
            format,
        };
        for d in &config.defects {
            let t = config.thresholds(*d);
            if t.pass > t.fail {
                return Err(CliError::config(
                    "tol_pass",
                    format!("pass threshold {} exceeds fail threshold {} for {}", t.pass, t.fail, d.as_str()),
                ));
            }
        }
        Ok(config)
    }

    fn resolve_source(&self, m: usize, space: WeightKind, n: usize) -> Result<SymbolSource, CliError> {
        let has_params = self.a0.is_some() || self.a1.is_some();
        let has_explicit = self.phi.is_some() || self.psi.is_some();
        let has_auto = self.auto_a.is_some();
        let count = [has_params, has_explicit, has_auto].iter().filter(|b| **b).count();
        if count > 1 {
            return Err(CliError::config(
                "symbols",
                "give exactly one symbol source: a0/a1/a2, phi/psi, or auto_a",
            ));
        }
        if has_explicit {
            if self.a2.is_some() || self.lambda.is_some() {
                return Err(CliError::config("symbols", "a2 and lambda do not apply to explicit phi/psi"));
            }
            let phi = coefficient_list("phi", self.phi.as_deref(), n)?;
            let psi = coefficient_list("psi", self.psi.as_deref(), n)?;
            if !(phi[0].norm() <= 1.0) {
                return Err(CliError::config("phi", format!("|phi(0)| = {} exceeds 1", phi[0].norm())));
            }
            return Ok(SymbolSource::Explicit { phi, psi });
        }
        if count == 0 && self.a2.is_none() {
            return Err(CliError::config("symbols", "no symbol source given (a0/a1/a2, phi/psi, or auto_a)"));
        }
        if m == 0 {
            return Err(CliError::config("m", "theorem symbol families need m >= 1"));
        }
        if space == WeightKind::Custom {
            return Err(CliError::config(
                "space",
                "custom weights stop at order N, but the theorem symbols need beta up to N + m",
            ));
        }
        let a2 = opt_complex(&self.a2, "a2", Complex64::new(1.0, 0.0))?;
        if a2 == Complex64::new(0.0, 0.0) {
            return Err(CliError::config("a2", "a2 must be nonzero"));
        }
        if has_auto {
            let a = opt_complex(&self.auto_a, "auto_a", Complex64::new(0.0, 0.0))?;
            if !(a.norm() < 1.0) {
                return Err(CliError::config("auto_a", format!("a must lie in the open unit disc (|a| = {})", a.norm())));
            }
            let lambda = opt_complex(&self.lambda, "lambda", Complex64::new(1.0, 0.0))?;
            if !((lambda.norm() - 1.0).abs() <= UNIMODULAR_TOL) {
                return Err(CliError::config("lambda", format!("lambda must be unimodular (|lambda| = {})", lambda.norm())));
            }
            return Ok(SymbolSource::Automorphism { a, lambda, a2 });
        }
        if self.lambda.is_some() {
            return Err(CliError::config("lambda", "lambda only applies to the auto_a source"));
        }
        let a0 = opt_complex(&self.a0, "a0", Complex64::new(0.0, 0.0))?;
        let a1 = opt_complex(&self.a1, "a1", Complex64::new(0.0, 0.0))?;
        if !(a0.norm() < 1.0) {
            return Err(CliError::config("a0", format!("a0 must lie in the open unit disc (|a0| = {})", a0.norm())));
        }
        Ok(SymbolSource::Params { a0, a1, a2 })
    }
}

fn opt_complex(input: &Option<ComplexInput>, field: &str, default: Complex64) -> Result<Complex64, CliError> {
    match input {
        None => Ok(default),
        Some(v) => v.value(field),
    }
}

fn coefficient_list(field: &str, list: Option<&[ComplexInput]>, n: usize) -> Result<Vec<Complex64>, CliError> {
    let list = list.ok_or_else(|| CliError::config(field, "phi and psi must be given together"))?;
    if list.is_empty() {
        return Err(CliError::config(field, "coefficient list is empty"));
    }
    if list.len() > n + 1 {
        return Err(CliError::config(field, format!("{} coefficients exceed order N = {n}", list.len())));
    }
    list.iter().map(|c| c.value(field)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DefectKind {
    Symmetry,
    Hermitian,
    Normality,
    AdjointKernel,
}

impl DefectKind {
    pub const ALL: [DefectKind; 4] =
        [DefectKind::Symmetry, DefectKind::Hermitian, DefectKind::Normality, DefectKind::AdjointKernel];

    pub fn as_str(self) -> &'static str {
        match self {
            DefectKind::Symmetry => "symmetry",
            DefectKind::Hermitian => "hermitian",
            DefectKind::Normality => "normality",
            DefectKind::AdjointKernel => "adjoint_kernel",
        }
    }

    pub fn default_thresholds(self) -> Thresholds {
        match self {
            DefectKind::Symmetry | DefectKind::Hermitian => Thresholds::EXACT,
            DefectKind::Normality | DefectKind::AdjointKernel => Thresholds::TAIL_LIMITED,
        }
    }
}

impl FromStr for DefectKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "symmetry" => Ok(DefectKind::Symmetry),
            "hermitian" => Ok(DefectKind::Hermitian),
            "normality" => Ok(DefectKind::Normality),
            "adjoint_kernel" => Ok(DefectKind::AdjointKernel),
            other => Err(format!(
                "unknown defect {other:?} (symmetry, hermitian, normality, adjoint_kernel)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?} (text, json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymbolSource {
    /// `phi`, `psi` from the parameters `a0 = phi(0)`, `a1 = phi'(0)`, `a2 = psi^(m)(0)`.
    Params { a0: Complex64, a1: Complex64, a2: Complex64 },
    /// Coefficient lists, zero-padded to order `N`.
    Explicit { phi: Vec<Complex64>, psi: Vec<Complex64> },
    /// Automorphism data for the point `a`; `lambda` is only used when `a = 0`.
    Automorphism { a: Complex64, lambda: Complex64, a2: Complex64 },
}

/// A validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub space: WeightKind,
    pub weights: Option<Vec<f64>>,
    pub n: usize,
    pub m: usize,
    pub w: Complex64,
    pub source: SymbolSource,
    pub defects: Vec<DefectKind>,
    pub margin: usize,
    pub alpha: Complex64,
    pub tol_pass: Option<f64>,
    pub tol_fail: Option<f64>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn thresholds(&self, defect: DefectKind) -> Thresholds {
        let base = defect.default_thresholds();
        Thresholds { pass: self.tol_pass.unwrap_or(base.pass), fail: self.tol_fail.unwrap_or(base.fail) }
    }

    pub fn weight_sequence(&self) -> Result<WeightSequence, CliError> {
        match &self.weights {
            Some(values) => Ok(WeightSequence::custom(values.clone())?),
            None => Ok(WeightSequence::named(self.space, self.n)?),
        }
    }

    pub fn echo(&self) -> ConfigEcho {
        let (source, a0, a1, a2, auto_a, lambda, phi, psi) = match &self.source {
            SymbolSource::Params { a0, a1, a2 } => {
                ("params", Some((*a0).into()), Some((*a1).into()), Some((*a2).into()), None, None, None, None)
            }
            SymbolSource::Explicit { phi, psi } => (
                "explicit",
                None,
                None,
                None,
                None,
                None,
                Some(phi.iter().map(|z| Cx::from(*z)).collect()),
                Some(psi.iter().map(|z| Cx::from(*z)).collect()),
            ),
            SymbolSource::Automorphism { a, lambda, a2 } => {
                ("automorphism", None, None, Some((*a2).into()), Some((*a).into()), Some((*lambda).into()), None, None)
            }
        };
        ConfigEcho {
            space: self.space.as_str().to_string(),
            weights: self.weights.clone(),
            n: self.n,
            m: self.m,
            w: self.w.into(),
            source: source.to_string(),
            a0,
            a1,
            a2,
            auto_a,
            lambda,
            phi,
            psi,
            defects: self.defects.iter().map(|d| d.as_str().to_string()).collect(),
            margin: self.margin,
            alpha: self.alpha.into(),
            tol_pass: self.tol_pass,
            tol_fail: self.tol_fail,
        }
    }
}

/// The configuration as echoed in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub space: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    pub n: usize,
    pub m: usize,
    pub w: Cx,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<Cx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1: Option<Cx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a2: Option<Cx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auto_a: Option<Cx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Cx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Cx>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<Vec<Cx>>,
    pub defects: Vec<String>,
    pub margin: usize,
    pub alpha: Cx,
    pub tol_pass: Option<f64>,
    pub tol_fail: Option<f64>,
}
