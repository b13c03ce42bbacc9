//! Running a single experiment and rendering its report.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use gwc_core::operator::{adjoint_kernel_defect, Conjugation, OperatorMatrix, Verdict};
use gwc_core::series::TruncatedSeries;
use gwc_core::spaces::{WeightKind, WeightSequence};
use gwc_core::symbols::{
    automorphism_symbols, derived_c1, hermitian_conditions, normal_constant_condition, obstruction_terms,
    qp_coefficients, symmetric_psi, symmetric_symbols, SymbolParams,
};
use serde::Serialize;

use crate::complex::{format_complex, Cx};
use crate::config::{ConfigEcho, DefectKind, ExperimentConfig, RawConfig, SymbolSource, DEFAULT_N};
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};

/// Number of `q/p` coefficients reported.
pub const REPORTED_C: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectResult {
    pub name: String,
    pub value: f64,
    pub pass_below: f64,
    pub fail_above: f64,
    pub verdict: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Derived {
    pub phi_at_zero: Option<Cx>,
    pub frobenius_norm: Option<f64>,
    /// `None` when the bound is infinite (`|phi(0)| = 1`).
    pub tail_bound: Option<f64>,
    pub c: Option<Vec<Cx>>,
    pub derived_c1: Option<f64>,
    pub obstruction: Option<Cx>,
    pub obstruction_vanishes: Option<bool>,
    pub hermitian_conditions: Option<bool>,
    pub normal_constant_condition: Option<bool>,
    pub lambda: Option<Cx>,
    pub lambda_deviation: Option<f64>,
    pub automorphism_a1: Option<Cx>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ConfigEcho,
    pub defects: Vec<DefectResult>,
    pub derived: Derived,
    pub warnings: Vec<String>,
    pub status: String,
    pub exit_code: i32,
    pub duration_ms: f64,
}

impl ExperimentReport {
    pub fn defect(&self, name: &str) -> Option<&DefectResult> {
        self.defects.iter().find(|d| d.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn overall(verdicts: &[Verdict]) -> Verdict {
    if verdicts.contains(&Verdict::Fail) {
        Verdict::Fail
    } else if verdicts.contains(&Verdict::Indeterminate) {
        Verdict::Indeterminate
    } else {
        Verdict::Pass
    }
}

/// Builds the symbols and the compressed operator for `config` and evaluates
/// the selected defects. Invalid parameters surface as [`CliError::Config`],
/// failures inside the numerics as [`CliError::Numeric`].
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let start = Instant::now();
    let weights = config.weight_sequence()?;
    let (m, w, n) = (config.m, config.w, config.n);
    let mut derived = Derived::default();
    let mut warnings = Vec::new();

    let (phi, psi) = match &config.source {
        SymbolSource::Params { a0, a1, a2 } => {
            let params = SymbolParams::new(m, w, *a0, *a1, *a2).map_err(|e| CliError::config("symbols", e.to_string()))?;
            let pair = symmetric_symbols(&params, &weights)?;
            let c = qp_coefficients(&params, &weights)?;
            derived.c = Some(c.iter().take(REPORTED_C).map(|z| Cx::from(*z)).collect());
            derived.derived_c1 = Some(derived_c1(m, &weights)?);
            let obstruction = obstruction_terms(&params, &weights)?;
            derived.obstruction = Some(obstruction.value().into());
            derived.obstruction_vanishes = Some(obstruction.vanishes());
            derived.hermitian_conditions = Some(hermitian_conditions(&params));
            derived.normal_constant_condition = Some(normal_constant_condition(*a0, w));
            (pair.phi, pair.psi)
        }
        SymbolSource::Automorphism { a, lambda, a2 } => {
            let auto = automorphism_symbols(*a, w, m, &weights, *lambda)?;
            derived.lambda = Some(auto.lambda.into());
            derived.lambda_deviation = Some(auto.lambda_deviation);
            derived.automorphism_a1 = Some(auto.a1.into());
            warnings.extend(auto.warning.clone());
            let psi = symmetric_psi(m, w, auto.phi.coeff(0), *a2, &weights)?;
            (auto.phi, psi)
        }
        SymbolSource::Explicit { phi, psi } => {
            (TruncatedSeries::from_slice(phi, n)?, TruncatedSeries::from_slice(psi, n)?)
        }
    };

    let t = OperatorMatrix::build(&phi, &psi, m, &weights)?;
    derived.phi_at_zero = Some(phi.coeff(0).into());
    derived.frobenius_norm = Some(t.frobenius_norm());
    derived.tail_bound = t.meta().tail_bound.is_finite().then_some(t.meta().tail_bound);
    warnings.extend(t.meta().warning.clone());

    let mut defects = Vec::with_capacity(config.defects.len());
    let mut verdicts = Vec::with_capacity(config.defects.len());
    for &kind in &config.defects {
        let value = match kind {
            DefectKind::Symmetry => t.symmetry_defect(&Conjugation::new(w)?),
            DefectKind::Hermitian => t.hermitian_defect(),
            DefectKind::Normality => t.normality_defect(config.margin)?,
            DefectKind::AdjointKernel => adjoint_kernel_defect(&phi, &psi, m, config.alpha, &weights)?,
        };
        let thresholds = config.thresholds(kind);
        let verdict = thresholds.verdict(value);
        verdicts.push(verdict);
        defects.push(DefectResult {
            name: kind.as_str().to_string(),
            value,
            pass_below: thresholds.pass,
            fail_above: thresholds.fail,
            verdict: verdict.as_str().to_string(),
        });
    }
    let status = overall(&verdicts);
    let exit_code = if status == Verdict::Pass { EXIT_PASS } else { EXIT_FAIL };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    Ok(ExperimentReport {
        config: config.echo(),
        defects,
        derived,
        warnings,
        status: status.as_str().to_string(),
        exit_code,
        duration_ms: (elapsed * 1e3).round() / 1e3,
    })
}

fn sci(x: f64) -> String {
    format!("{x:.14e}")
}

fn opt_cx(label: &str, z: Option<Cx>, out: &mut String) {
    if let Some(z) = z {
        let _ = writeln!(out, "  {label:<26}{}", format_complex(z.into()));
    }
}

pub fn render_text(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let c = &report.config;
    let _ = writeln!(out, "space {} | N = {} | m = {} | source {}", c.space, c.n, c.m, c.source);
    let _ = writeln!(out, "config");
    opt_cx("w", Some(c.w), &mut out);
    opt_cx("a0", c.a0, &mut out);
    opt_cx("a1", c.a1, &mut out);
    opt_cx("a2", c.a2, &mut out);
    opt_cx("a", c.auto_a, &mut out);
    if c.phi.is_some() {
        let _ = writeln!(out, "  {:<26}{} coefficients", "phi", c.phi.as_ref().map_or(0, Vec::len));
        let _ = writeln!(out, "  {:<26}{} coefficients", "psi", c.psi.as_ref().map_or(0, Vec::len));
    }
    let _ = writeln!(out, "  {:<26}{}", "margin", c.margin);
    opt_cx("alpha", Some(c.alpha), &mut out);

    let _ = writeln!(out, "defects");
    for d in &report.defects {
        let _ = writeln!(
            out,
            "  {:<26}{:<24}{:<15}(pass < {:e}, fail > {:e})",
            d.name,
            sci(d.value),
            d.verdict,
            d.pass_below,
            d.fail_above
        );
    }

    let _ = writeln!(out, "derived");
    let dv = &report.derived;
    opt_cx("phi(0)", dv.phi_at_zero, &mut out);
    if let Some(x) = dv.frobenius_norm {
        let _ = writeln!(out, "  {:<26}{}", "frobenius_norm", sci(x));
    }
    match dv.tail_bound {
        Some(x) => {
            let _ = writeln!(out, "  {:<26}{}", "tail_bound", sci(x));
        }
        None => {
            let _ = writeln!(out, "  {:<26}unbounded", "tail_bound");
        }
    }
    if let Some(cs) = &dv.c {
        for (i, z) in cs.iter().enumerate() {
            opt_cx(&format!("c{}", i + 1), Some(*z), &mut out);
        }
    }
    if let Some(x) = dv.derived_c1 {
        let _ = writeln!(out, "  {:<26}{}", "derived_c1", sci(x));
    }
    opt_cx("obstruction", dv.obstruction, &mut out);
    for (label, flag) in [
        ("obstruction_vanishes", dv.obstruction_vanishes),
        ("hermitian_conditions", dv.hermitian_conditions),
        ("normal_constant_condition", dv.normal_constant_condition),
    ] {
        if let Some(b) = flag {
            let _ = writeln!(out, "  {label:<26}{b}");
        }
    }
    opt_cx("lambda", dv.lambda, &mut out);
    if let Some(x) = dv.lambda_deviation {
        let _ = writeln!(out, "  {:<26}{}", "lambda_deviation", sci(x));
    }
    opt_cx("automorphism_a1", dv.automorphism_a1, &mut out);
    for wmsg in &report.warnings {
        let _ = writeln!(out, "warning: {wmsg}");
    }
    let _ = writeln!(out, "status {} (exit {})", report.status, report.exit_code);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightTable {
    pub space: String,
    pub n: usize,
    pub beta: Vec<f64>,
}

/// The weight sequence selected by `space`, `n` and `weights`; symbol fields are ignored.
pub fn weight_table(raw: &RawConfig) -> Result<WeightTable, CliError> {
    let kind = match &raw.space {
        None => WeightKind::Hardy,
        Some(s) => WeightKind::from_str(s).map_err(|e| CliError::config("space", e.to_string()))?,
    };
    let seq = match (kind, &raw.weights) {
        (WeightKind::Custom, Some(values)) => {
            WeightSequence::custom(values.clone()).map_err(|e| CliError::config("weights", e.to_string()))?
        }
        (WeightKind::Custom, None) => return Err(CliError::config("weights", "space = custom needs a weights list")),
        (_, Some(_)) => return Err(CliError::config("weights", "explicit weights require space = custom")),
        (kind, None) => WeightSequence::named(kind, raw.n.unwrap_or(DEFAULT_N))
            .map_err(|e| CliError::config("space", e.to_string()))?,
    };
    Ok(WeightTable { space: kind.as_str().to_string(), n: seq.order(), beta: seq.values().to_vec() })
}

pub fn render_weights_text(table: &WeightTable) -> String {
    let mut out = format!("space {} | N = {}\n", table.space, table.n);
    for (i, b) in table.beta.iter().enumerate() {
        let _ = writeln!(out, "{i:>4}  {}", sci(*b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::EXIT_INVALID;
    use num_complex::Complex64;

    fn run(raw: RawConfig) -> ExperimentReport {
        run_experiment(&raw.resolve().unwrap()).unwrap()
    }

    #[test]
    fn case_one_symmetry_passes() {
        let report = run(RawConfig {
            n: Some(32),
            a0: Some("0".into()),
            a1: Some("0.5".into()),
            a2: Some("1".into()),
            defects: Some(vec!["symmetry".into()]),
            ..Default::default()
        });
        let d = report.defect("symmetry").unwrap();
        assert!(d.value < 1e-12);
        assert_eq!(d.verdict, "pass");
        assert_eq!(report.exit_code, EXIT_PASS);
        assert_eq!(report.defects.len(), 1);
    }

    #[test]
    fn every_selected_defect_appears_once() {
        let report = run(RawConfig { n: Some(24), a0: Some("0.3".into()), ..Default::default() });
        let names: Vec<&str> = report.defects.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, ["symmetry", "hermitian", "normality", "adjoint_kernel"]);
    }

    #[test]
    fn obstructed_pair_fails() {
        let report = run(RawConfig {
            space: Some("deriv_hardy".into()),
            n: Some(32),
            a0: Some("0.3".into()),
            a1: Some("0.3".into()),
            defects: Some(vec!["symmetry".into()]),
            ..Default::default()
        });
        assert_eq!(report.defect("symmetry").unwrap().verdict, "fail");
        assert_eq!(report.exit_code, EXIT_FAIL);
    }

    #[test]
    fn indeterminate_maps_to_exit_one() {
        let report = run(RawConfig {
            n: Some(16),
            a0: Some("0.3i".into()),
            defects: Some(vec!["hermitian".into()]),
            tol_pass: Some(1e-12),
            tol_fail: Some(1e3),
            ..Default::default()
        });
        assert_eq!(report.status, "indeterminate");
        assert_eq!(report.exit_code, EXIT_FAIL);
    }

    #[test]
    fn automorphism_source() {
        let report = run(RawConfig { n: Some(32), auto_a: Some("0.2".into()), ..Default::default() });
        let lambda: Complex64 = report.derived.lambda.unwrap().into();
        assert!((lambda - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(report.derived.lambda_deviation.unwrap() < 1e-14);
        let phi0: Complex64 = report.derived.phi_at_zero.unwrap().into();
        assert!((phi0 - Complex64::new(0.2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn text_lists_defects_with_fifteen_digits() {
        let report = run(RawConfig { n: Some(16), a1: Some("0.5".into()), ..Default::default() });
        let text = render_text(&report);
        for d in &report.defects {
            assert!(text.contains(&format!("{:.14e}", d.value)), "{text}");
        }
        assert!(text.contains("status pass (exit 0)"));
    }

    #[test]
    fn weight_tables() {
        let t = weight_table(&RawConfig { space: Some("dirichlet".into()), n: Some(4), ..Default::default() }).unwrap();
        assert_eq!(t.beta, vec![1.0, 1.0, 2f64.sqrt(), 3f64.sqrt(), 2.0]);
        let err = weight_table(&RawConfig { space: Some("custom".into()), ..Default::default() }).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INVALID);
        let custom = weight_table(&RawConfig {
            space: Some("custom".into()),
            weights: Some(vec![1.0, 0.9, 0.8]),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(custom.n, 2);
    }
}
