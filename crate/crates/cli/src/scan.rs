//! One-dimensional parameter scans.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ComplexInput, RawConfig};
use crate::error::{CliError, EXIT_PASS};
use crate::report::{run_experiment, ExperimentReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanAxis {
    A0,
    A1,
    A2,
    W,
    M,
    N,
    A,
}

impl ScanAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanAxis::A0 => "a0",
            ScanAxis::A1 => "a1",
            ScanAxis::A2 => "a2",
            ScanAxis::W => "w",
            ScanAxis::M => "m",
            ScanAxis::N => "n",
            ScanAxis::A => "a",
        }
    }

    /// `base` with this axis set to `value`.
    fn apply(self, base: &RawConfig, value: &str) -> Result<RawConfig, CliError> {
        let mut raw = base.clone();
        let cx = || Some(ComplexInput::Text(value.to_string()));
        let int = |field: &str| {
            value
                .trim()
                .parse::<usize>()
                .map_err(|_| CliError::config(field, format!("{value:?} is not a non-negative integer")))
        };
        match self {
            ScanAxis::A0 => raw.a0 = cx(),
            ScanAxis::A1 => raw.a1 = cx(),
            ScanAxis::A2 => raw.a2 = cx(),
            ScanAxis::W => raw.w = cx(),
            ScanAxis::A => raw.auto_a = cx(),
            ScanAxis::M => raw.m = Some(int("m")?),
            ScanAxis::N => raw.n = Some(int("n")?),
        }
        Ok(raw)
    }
}

impl FromStr for ScanAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a0" => Ok(ScanAxis::A0),
            "a1" => Ok(ScanAxis::A1),
            "a2" => Ok(ScanAxis::A2),
            "w" => Ok(ScanAxis::W),
            "m" => Ok(ScanAxis::M),
            "n" => Ok(ScanAxis::N),
            "a" | "auto_a" => Ok(ScanAxis::A),
            other => Err(format!("unknown scan axis {other:?} (a0, a1, a2, w, m, n, a)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointOutcome {
    Report(Box<ExperimentReport>),
    Invalid { message: String, exit_code: i32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub index: usize,
    pub value: String,
    pub outcome: PointOutcome,
}

impl ScanPoint {
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            PointOutcome::Report(r) => r.exit_code,
            PointOutcome::Invalid { exit_code, .. } => *exit_code,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectRange {
    pub name: String,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub points: usize,
    pub valid: usize,
    pub invalid: usize,
    pub defects: Vec<DefectRange>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub axis: ScanAxis,
    pub points: Vec<ScanPoint>,
}

impl ScanResult {
    /// Worst exit code over all points; 0 for an empty scan.
    pub fn exit_code(&self) -> i32 {
        self.points.iter().map(ScanPoint::exit_code).max().unwrap_or(EXIT_PASS)
    }

    pub fn summary(&self) -> Option<ScanSummary> {
        if self.points.is_empty() {
            return None;
        }
        let mut ranges: Vec<DefectRange> = Vec::new();
        let mut valid = 0;
        for p in &self.points {
            if let PointOutcome::Report(r) = &p.outcome {
                valid += 1;
                for d in &r.defects {
                    match ranges.iter_mut().find(|x| x.name == d.name) {
                        Some(x) => {
                            x.min = x.min.min(d.value);
                            x.max = x.max.max(d.value);
                        }
                        None => ranges.push(DefectRange { name: d.name.clone(), min: d.value, max: d.value }),
                    }
                }
            }
        }
        Some(ScanSummary {
            points: self.points.len(),
            valid,
            invalid: self.points.len() - valid,
            defects: ranges,
            exit_code: self.exit_code(),
        })
    }

    /// One array: a record per point in input order, then the summary (omitted when empty).
    pub fn to_json_value(&self) -> Value {
        let mut out: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let mut obj = json!({
                    "index": p.index,
                    "axis": self.axis.as_str(),
                    "value": p.value,
                    "exit_code": p.exit_code(),
                });
                match &p.outcome {
                    PointOutcome::Report(r) => obj["report"] = serde_json::to_value(r).expect("report serialises"),
                    PointOutcome::Invalid { message, .. } => obj["invalid"] = Value::String(message.clone()),
                }
                obj
            })
            .collect();
        if let Some(s) = self.summary() {
            out.push(json!({ "summary": s }));
        }
        Value::Array(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("scan serialises")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let _ = write!(out, "[{}] {} = {}: ", p.index, self.axis.as_str(), p.value);
            match &p.outcome {
                PointOutcome::Report(r) => {
                    let parts: Vec<String> =
                        r.defects.iter().map(|d| format!("{} {:.14e} {}", d.name, d.value, d.verdict)).collect();
                    let _ = writeln!(out, "{} | status {}", parts.join(" | "), r.status);
                }
                PointOutcome::Invalid { message, exit_code } => {
                    let _ = writeln!(out, "invalid (exit {exit_code}): {message}");
                }
            }
        }
        if let Some(s) = self.summary() {
            let _ = writeln!(out, "summary: {} points, {} valid, {} invalid", s.points, s.valid, s.invalid);
            for d in &s.defects {
                let _ = writeln!(out, "  {:<16} min {:.14e}  max {:.14e}", d.name, d.min, d.max);
            }
        }
        let _ = writeln!(out, "exit {}", self.exit_code());
        out
    }
}

fn evaluate_point(base: &RawConfig, axis: ScanAxis, index: usize, value: &str) -> ScanPoint {
    let outcome = axis
        .apply(base, value)
        .and_then(|raw| raw.resolve())
        .and_then(|config| run_experiment(&config));
    let outcome = match outcome {
        Ok(report) => PointOutcome::Report(Box::new(report)),
        Err(e) => PointOutcome::Invalid { message: e.to_string(), exit_code: e.exit_code() },
    };
    ScanPoint { index, value: value.to_string(), outcome }
}

/// Evaluates `base` once per value of `axis`. Points are independent; with
/// `jobs > 1` they run on a thread pool of that size. Results keep input order.
pub fn scan_grid(base: &RawConfig, axis: ScanAxis, values: &[String], jobs: usize) -> ScanResult {
    let eval = |(i, v): (usize, &String)| evaluate_point(base, axis, i, v);
    let points = if jobs > 1 && values.len() > 1 {
        match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| values.par_iter().enumerate().map(eval).collect()),
            Err(_) => values.iter().enumerate().map(eval).collect(),
        }
    } else {
        values.iter().enumerate().map(eval).collect()
    };
    ScanResult { axis, points }
}

/// Splits `values` on commas or semicolons; blank input is an empty list.
pub fn split_values(values: &str) -> Vec<String> {
    values
        .split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::{EXIT_INVALID, EXIT_PASS};
    use std::f64::consts::PI;

    fn base() -> RawConfig {
        RawConfig { n: Some(24), defects: Some(vec!["symmetry".into()]), ..Default::default() }
    }

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn case_two_family_passes_along_a0() {
        let raw = RawConfig { a1: Some("0".into()), ..base() };
        let r = scan_grid(&raw, ScanAxis::A0, &strings(&["0", "0.1", "0.2", "0.3", "0.4"]), 1);
        assert_eq!(r.points.len(), 5);
        for p in &r.points {
            match &p.outcome {
                PointOutcome::Report(rep) => assert_eq!(rep.defect("symmetry").unwrap().verdict, "pass"),
                other => panic!("{other:?}"),
            }
        }
        assert_eq!(r.exit_code(), EXIT_PASS);
        assert_eq!(r.summary().unwrap().valid, 5);
    }

    #[test]
    fn roots_of_unity_case_one() {
        let raw = RawConfig { a0: Some("0".into()), a1: Some("0.5".into()), ..base() };
        let values: Vec<String> = (0..8).map(|k| format!("exp:{}", 2.0 * PI * k as f64 / 8.0)).collect();
        let r = scan_grid(&raw, ScanAxis::W, &values, 4);
        for p in &r.points {
            let PointOutcome::Report(rep) = &p.outcome else { panic!("invalid point") };
            assert!(rep.defect("symmetry").unwrap().value < 1e-12);
        }
    }

    #[test]
    fn empty_scan() {
        let r = scan_grid(&base(), ScanAxis::A0, &[], 2);
        assert!(r.points.is_empty());
        assert_eq!(r.exit_code(), EXIT_PASS);
        assert_eq!(r.to_json(), "[]");
    }

    #[test]
    fn invalid_point_does_not_stop_scan() {
        let raw = RawConfig { a1: Some("0".into()), ..base() };
        let r = scan_grid(&raw, ScanAxis::A0, &strings(&["0.2", "1.5", "oops", "0.3"]), 1);
        assert_eq!(r.points.len(), 4);
        assert!(matches!(r.points[1].outcome, PointOutcome::Invalid { exit_code: EXIT_INVALID, .. }));
        assert!(matches!(r.points[2].outcome, PointOutcome::Invalid { .. }));
        assert!(matches!(r.points[3].outcome, PointOutcome::Report(_)));
        assert_eq!(r.exit_code(), EXIT_INVALID);
        let s = r.summary().unwrap();
        assert_eq!((s.valid, s.invalid), (2, 2));
    }

    #[test]
    fn parallel_matches_sequential() {
        let raw = RawConfig { a0: Some("0.2".into()), defects: None, ..base() };
        let values = strings(&["0", "0.1", "0.2i", "0.3", "-0.25", "0.1+0.1i"]);
        let strip = |r: &ScanResult| {
            r.points
                .iter()
                .map(|p| match &p.outcome {
                    PointOutcome::Report(rep) => serde_json::to_string(&rep.defects).unwrap(),
                    PointOutcome::Invalid { message, .. } => message.clone(),
                })
                .collect::<Vec<_>>()
        };
        let seq = scan_grid(&raw, ScanAxis::A1, &values, 1);
        let par = scan_grid(&raw, ScanAxis::A1, &values, 3);
        assert_eq!(strip(&seq), strip(&par));
        assert!(par.points.iter().enumerate().all(|(i, p)| p.index == i));
    }

    #[test]
    fn value_splitting() {
        assert!(split_values("  ").is_empty());
        assert_eq!(split_values("0, 0.1;0.2"), strings(&["0", "0.1", "0.2"]));
    }
}
